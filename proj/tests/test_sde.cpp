#include "eigengrowth/closedform.hpp"
#include "eigengrowth/error.hpp"
#include "eigengrowth/sde.hpp"
#include "eigengrowth/special.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>

using namespace eigengrowth;

namespace {

const double kBrownianSurvival = 2.0 * normal_cdf(1.0) - 1.0;

SimConfig brownian_config(std::size_t n, double dt) {
    SimConfig cfg;
    cfg.T = 1.0;
    cfg.dt = dt;
    cfg.n_paths = n;
    cfg.absorb_level = 23;
    cfg.track_levels = false;
    return cfg;
}

}  // namespace

TEST(Simulate, BrownianExitMatchesReflectionPrinciple) {
    const ExampleEntry b = make_example("bessel-4.3");
    const PathEnsemble ens = simulate(Measure::q(), b.domain, b.c, {1.0}, brownian_config(20000, 1e-3));
    const Estimate e = exit_probability(ens, 1.0);
    EXPECT_NEAR(e.value, kBrownianSurvival, 4.0 * e.std_error);
}

TEST(Simulate, AbsorbedPathsAreNaNAfterExit) {
    const ExampleEntry w = make_example("ex-6.1.1");
    SimConfig cfg;
    cfg.T = 3.0;
    cfg.dt = 1e-2;
    cfg.n_paths = 500;
    cfg.record_every = 10;
    cfg.absorb_level = 2;
    const PathEnsemble ens = simulate(Measure::q(), w.domain, w.c, {0.5}, cfg);
    ASSERT_GT(ens.absorbed_count(), 0u);
    for (std::size_t p = 0; p < ens.n_paths; ++p) {
        const double z = ens.exit_time[p];
        if (!ens.absorbed[p]) {
            EXPECT_EQ(z, kNeverExited);
            EXPECT_TRUE(std::isfinite(ens.final_state(p)[0]));
            continue;
        }
        EXPECT_LE(z, cfg.T + 1e-12);
        EXPECT_TRUE(w.domain.contains(ens.last_valid_state(p)));
        for (std::size_t k = 0; k < ens.records(); ++k) {
            if (ens.times[k] >= z) EXPECT_TRUE(std::isnan(ens.state(p, k)[0]));
        }
    }
}

TEST(Simulate, LevelExitsAreOrdered) {
    const ExampleEntry w = make_example("ex-6.1.1");
    SimConfig cfg;
    cfg.T = 2.0;
    cfg.dt = 1e-3;
    cfg.n_paths = 300;
    cfg.absorb_level = 2;
    const PathEnsemble ens = simulate(Measure::q(), w.domain, w.c, {0.5}, cfg);
    ASSERT_GT(ens.levels, 4);
    for (std::size_t p = 0; p < ens.n_paths; ++p) {
        for (int n = 0; n + 1 < ens.levels; ++n) {
            ASSERT_LE(ens.level_exit_time(p, n), ens.level_exit_time(p, n + 1));
        }
        if (ens.absorbed[p]) EXPECT_LE(ens.level_exit_time(p, ens.levels - 1), ens.exit_time[p]);
    }
}

TEST(Simulate, OuterRadiusIsFlagged) {
    const DomainSpec half = DomainSpec::interval(0.0, std::numeric_limits<double>::infinity());
    const auto c = CovarianceField::one_dimensional("bm", [](double) { return 1.0; });
    SimConfig cfg = brownian_config(500, 1e-3);
    cfg.absorb_level = 2;
    cfg.outer_radius = 2.0;
    const PathEnsemble ens = simulate(Measure::q(), half, c, {1.0}, cfg);
    std::size_t outer = 0;
    for (auto f : ens.outer_hit) outer += f;
    EXPECT_GT(outer, 0u);
}

TEST(Simulate, LogEulerIsExactForGeometricBrownianMotion) {
    // log X_T = −aT/2 + √a W_T under the driftless law
    const double a = 0.3;
    const auto c = CovarianceField::one_dimensional("gbm", [a](double x) { return a * x * x; });
    SimConfig cfg;
    cfg.T = 2.0;
    cfg.dt = 0.5;
    cfg.n_paths = 20000;
    cfg.absorb_level = 2;
    cfg.scheme = Scheme::log_euler;
    cfg.track_levels = false;
    const PathEnsemble ens = simulate(Measure::q(), DomainSpec::orthant(1), c, {1.0}, cfg);
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t p = 0; p < ens.n_paths; ++p) {
        const double l = std::log(ens.final_state(p)[0]);
        sum += l;
        sum2 += l * l;
    }
    const double n = static_cast<double>(ens.n_paths);
    const double mean = sum / n, var = sum2 / n - mean * mean;
    EXPECT_NEAR(mean, -0.5 * a * cfg.T, 4.0 * std::sqrt(a * cfg.T / n));
    EXPECT_NEAR(var, a * cfg.T, 0.05 * a * cfg.T);
}

TEST(Simulate, PreconditionsAreChecked) {
    const ExampleEntry w = make_example("ex-6.1.1");
    SimConfig cfg;
    cfg.absorb_level = 4;
    EXPECT_THROW(simulate(Measure::q(), w.domain, w.c, {0.001}, cfg), PreconditionError);
    cfg.scheme = Scheme::log_euler;
    EXPECT_THROW(simulate(Measure::q(), w.domain, w.c, {0.5}, cfg), PreconditionError);
    SimConfig bad;
    bad.dt = 0.0;
    EXPECT_THROW(bad.validate(), PreconditionError);
}

TEST(SimulateProperty, SeedDeterminismAcrossWorkers) {
    const auto gbm = make_example("gbm-6.2.1");
    const auto wf = make_example("ex-6.1.1");
    SimConfig cfg;
    cfg.T = 0.5;
    cfg.dt = 1e-3;
    cfg.n_paths = 200;
    cfg.record_every = 50;
    cfg.absorb_level = 2;
    cfg.seed = 99;
    for (int model = 0; model < 2; ++model) {
        const ExampleEntry& e = model == 0 ? wf : gbm;
        SimConfig base = cfg;
        if (model == 1) base.scheme = Scheme::log_euler;
        const Measure m = model == 0 ? Measure::q() : Measure::pstar(e.pair);
        const std::uint64_t h1 = simulate(m, e.domain, e.c, e.pair.x0, base).hash();
        EXPECT_EQ(simulate(m, e.domain, e.c, e.pair.x0, base).hash(), h1);
        for (std::size_t threads : {4u, 8u}) {
            SimConfig t = base;
            t.threads = threads;
            EXPECT_EQ(simulate(m, e.domain, e.c, e.pair.x0, t).hash(), h1) << e.name << " threads " << threads;
        }
        SimConfig other = base;
        other.seed = 100;
        EXPECT_NE(simulate(m, e.domain, e.c, e.pair.x0, other).hash(), h1);
    }
}

TEST(SimulateProperty, DriftlessMeanIsPreserved) {
    const ExampleEntry e = make_example("ex-6.1.2");
    SimConfig cfg;
    cfg.T = 1.0;
    cfg.dt = 1e-3;
    cfg.n_paths = 10000;
    cfg.absorb_level = 2;
    cfg.track_levels = false;
    for (double x0 : {0.3, 0.5}) {
        const PathEnsemble ens = simulate(Measure::q(), e.domain, e.c, {x0}, cfg);
        ASSERT_EQ(ens.absorbed_count(), 0u);
        double sum = 0.0, sum2 = 0.0;
        for (std::size_t p = 0; p < ens.n_paths; ++p) {
            const double x = ens.final_state(p)[0];
            sum += x;
            sum2 += x * x;
        }
        const double n = static_cast<double>(ens.n_paths);
        const double mean = sum / n;
        const double se = std::sqrt((sum2 / n - mean * mean) / n);
        EXPECT_NEAR(mean, x0, 4.0 * se);
    }
}

TEST(SimulateProperty, QuadraticVariationMatchesCovariance) {
    const ExampleEntry w = make_example("ex-6.1.1");
    SimConfig cfg;
    cfg.T = 1.0;
    cfg.dt = 1e-4;
    cfg.n_paths = 40;
    cfg.record_every = 1;
    cfg.absorb_level = 2;
    cfg.track_levels = false;
    const PathEnsemble ens = simulate(Measure::pstar(w.pair), w.domain, w.c, {0.5}, cfg);
    for (std::size_t p = 0; p < ens.n_paths; ++p) {
        double qv = 0.0, expected = 0.0;
        for (std::size_t k = 1; k < ens.records(); ++k) {
            const double x = ens.state(p, k - 1)[0], y = ens.state(p, k)[0];
            qv += (y - x) * (y - x);
            expected += w.c(x) * cfg.dt;
        }
        EXPECT_NEAR(qv / expected, 1.0, 0.05) << "path " << p;
    }

    const ExampleEntry g = make_example("gbm-6.2.1");
    SimConfig gc = cfg;
    gc.n_paths = 20;
    gc.absorb_level = 4;
    const PathEnsemble ge = simulate(Measure::q(), g.domain, g.c, g.pair.x0, gc);
    // increments relative to X_k, so c_ij/(x_i x_j) = A_ij weighs every step alike
    const Eigen::MatrixXd A = reference_gbm_matrix();
    for (std::size_t p = 0; p < ge.n_paths; ++p) {
        Eigen::Matrix3d qv = Eigen::Matrix3d::Zero();
        for (std::size_t k = 1; k < ge.records(); ++k) {
            const auto x = ge.state(p, k - 1), y = ge.state(p, k);
            const Eigen::Vector3d r((y[0] - x[0]) / x[0], (y[1] - x[1]) / x[1], (y[2] - x[2]) / x[2]);
            qv += r * r.transpose();
        }
        for (int i = 0; i < 3; ++i) EXPECT_NEAR(qv(i, i) / (A(i, i) * gc.T), 1.0, 0.05) << "path " << p;
    }
}

TEST(SimulateProperty, HalvingDtKeepsBrownianExitStable) {
    const ExampleEntry b = make_example("bessel-4.3");
    const Estimate coarse =
        exit_probability(simulate(Measure::q(), b.domain, b.c, {1.0}, brownian_config(20000, 1e-3)), 1.0);
    SimConfig fine = brownian_config(20000, 5e-4);
    fine.seed = 1;
    const Estimate half = exit_probability(simulate(Measure::q(), b.domain, b.c, {1.0}, fine), 1.0);
    EXPECT_LE(std::abs(coarse.value - half.value), 3.0 * std::hypot(coarse.std_error, half.std_error));
}

TEST(SimulateProperty, TiltedWrightFisherReachesBetaTwoTwo) {
    const ExampleEntry w = make_example("ex-6.1.1");
    SimConfig cfg;
    cfg.T = 50.0;
    cfg.dt = 5e-3;
    cfg.n_paths = 10000;
    cfg.absorb_level = 2;
    cfg.max_refine = 20;
    cfg.track_levels = false;
    const PathEnsemble ens = simulate(Measure::pstar(w.pair), w.domain, w.c, {0.5}, cfg);
    ASSERT_EQ(ens.absorbed_count(), 0u);
    std::vector<double> xs;
    for (std::size_t p = 0; p < ens.n_paths; ++p) xs.push_back(ens.final_state(p)[0]);
    std::sort(xs.begin(), xs.end());
    double ks = 0.0;
    const double n = static_cast<double>(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double x = xs[i];
        const double F = x * x * (3.0 - 2.0 * x);
        ks = std::max({ks, std::abs(F - static_cast<double>(i) / n), std::abs(F - static_cast<double>(i + 1) / n)});
    }
    EXPECT_LE(ks, 0.02);
}

TEST(ExitIdentity, ZeroHorizonIsExact) {
    const ExampleEntry w = make_example("ex-6.1.1");
    SimConfig cfg;
    cfg.n_paths = 10;
    const ExitIdentityResult r = exit_identity_check(w.domain, w.c, w.pair, {0.5}, 0.0, cfg);
    EXPECT_EQ(r.lhs, 1.0);
    EXPECT_EQ(r.rhs, 1.0);
    EXPECT_TRUE(r.pass);
}

TEST(ExitIdentity, SmallWrightFisherRun) {
    const ExampleEntry w = make_example("ex-6.1.1");
    SimConfig cfg;
    cfg.dt = 2e-3;
    cfg.n_paths = 10000;
    cfg.absorb_level = 2;
    cfg.max_refine = 12;
    cfg.track_levels = false;
    const ExitIdentityResult r = exit_identity_check(w.domain, w.c, w.pair, {0.5}, 1.0, cfg);
    EXPECT_TRUE(r.pass) << r.lhs << " vs " << r.rhs;
}

TEST(TailDecay, WrightFisherIsFlatAfterTransient) {
    const ExampleEntry w = make_example("ex-6.1.1");
    SimConfig cfg;
    cfg.dt = 2e-3;
    cfg.n_paths = 20000;
    cfg.absorb_level = 2;
    cfg.track_levels = false;
    const TailDecay td = tail_decay_estimate(w.domain, w.c, w.pair, {0.5}, {0.5, 1.0, 1.5, 2.0}, cfg);
    ASSERT_EQ(td.points.size(), 4u);
    // e^{T}·Q[ζ>T] → η(x0)·∫η dm-weight constant; the spectral limit is 1.5 at x0 = 1/2
    for (const TailPoint& p : td.points) {
        if (p.T >= 1.0) EXPECT_NEAR(p.scaled, 1.5, 4.0 * p.std_error + 0.02) << p.T;
    }
}
