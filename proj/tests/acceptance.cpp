#include "eigengrowth/app.hpp"
#include "eigengrowth/closedform.hpp"
#include "eigengrowth/eigen1d.hpp"
#include "eigengrowth/error.hpp"
#include "eigengrowth/growth.hpp"
#include "eigengrowth/sde.hpp"
#include "eigengrowth/special.hpp"

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace eigengrowth;

namespace {

// Pinned tolerances and budgets.
constexpr double kRegularRelTol = 1e-6;
constexpr double kRegularSeconds = 1.0;
constexpr double kSingularTol = 1e-3;
constexpr double kSingularSeconds = 10.0;
constexpr double kClosedFormTol = 1e-12;
constexpr double kResidualTol = 1e-5;
constexpr double kClosedFormSeconds = 5.0;
constexpr double kExitSe = 3.0;
constexpr double kExitSeconds = 60.0;
constexpr double kIdentitySeconds = 120.0;
constexpr double kGrowthFraction = 0.95;
constexpr double kGrowthBand = 0.1;
constexpr double kGrowthSeconds = 120.0;
constexpr double kNumeraireSeconds = 60.0;
constexpr double kArbitrageSeconds = 60.0;
constexpr double kHopfTol = 1e-2;

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

CovarianceField power_c(double p, double q) {
    return CovarianceField::one_dimensional(
        "power", [p, q](double x) { return std::pow(x, p) * std::pow(1.0 - x, q); });
}

double normalized_gap(const ScalarFn& a, const ScalarFn& b) {
    double worst = 0.0;
    for (int i = 0; i <= 800; ++i) {
        const double x = 0.1 + 0.8 * i / 800.0;
        worst = std::max(worst, std::abs(a(x) / a(0.5) - b(x) / b(0.5)));
    }
    return worst;
}

Eigen::Matrix3d adjugate_inverse(const Eigen::Matrix3d& m) {
    Eigen::Matrix3d adj;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            const int r0 = (j + 1) % 3, r1 = (j + 2) % 3, c0 = (i + 1) % 3, c1 = (i + 2) % 3;
            adj(i, j) = m(r0, c0) * m(r1, c1) - m(r0, c1) * m(r1, c0);
        }
    }
    return adj / (m(0, 0) * adj(0, 0) + m(0, 1) * adj(1, 0) + m(0, 2) * adj(2, 0));
}

Outcome regular() {
    const auto start = Clock::now();
    const auto c = CovarianceField::one_dimensional("const", [](double) { return 1.0; });
    const EigenSolution s = solve_principal_eigenpair(c, Interval{0.0, 1.0});
    const double exact = std::numbers::pi * std::numbers::pi / 2.0;
    const double rel = std::abs(s.pair.lambda - exact) / exact;
    const double t = seconds_since(start);
    return {rel <= kRegularRelTol && t < kRegularSeconds, fmt("rel_err=%.3e time=%.3fs", rel, t)};
}

Outcome singular() {
    bool pass = true;
    std::string detail;
    struct Case {
        CovarianceField c;
        double lambda;
        ScalarFn eta;
    };
    const Case cases[] = {
        {power_c(1.0, 1.0), 1.0, [](double x) { return x * (1 - x); }},
        {power_c(2.0, 2.0), 0.125, [](double x) { return std::sqrt(x * (1 - x)); }},
    };
    for (const Case& k : cases) {
        const auto start = Clock::now();
        const EigenSolution s = solve_principal_eigenpair(k.c, Interval{0.0, 1.0});
        const double t = seconds_since(start);
        const double err = std::abs(s.pair.lambda - k.lambda);
        const double gap = normalized_gap(s.pair.eta1, k.eta);
        pass = pass && err <= kSingularTol && gap <= kSingularTol && t < kSingularSeconds;
        detail += fmt("[lambda_err=%.2e eta_gap=%.2e time=%.2fs] ", err, gap, t);
    }
    return {pass, detail};
}

Outcome classification() {
    const Interval unit{0.0, 1.0};
    const ExampleEntry e1 = make_example("ex-6.1.1");
    const ExampleEntry e2 = make_example("ex-6.1.2");
    const ExampleEntry e3 = make_example("ex-6.1.3");
    const LambdaSign i1 = integral_test(e1.c, unit).verdict;
    const LambdaSign i3 = integral_test(e3.c, unit).verdict;
    const LambdaSign p1 = pointwise_test(e1.c, unit).verdict;
    const LambdaSign p3 = pointwise_test(e3.c, unit).verdict;
    const RecurrenceClass r1 = recurrence_class(e1.pair, e1.c, unit).cls;
    const RecurrenceClass r2 = recurrence_class(e2.pair, e2.c, unit).cls;
    const bool pass = i1 == LambdaSign::positive && i3 == LambdaSign::zero && p1 == LambdaSign::positive &&
                      p3 == LambdaSign::zero && r1 == RecurrenceClass::positive_recurrent &&
                      r2 == RecurrenceClass::null_recurrent;
    return {pass, "integral(6.1.1,6.1.3)=" + to_string(i1) + "," + to_string(i3) + " pointwise=" +
                      to_string(p1) + "," + to_string(p3) + " recurrence(6.1.1,6.1.2)=" + to_string(r1) +
                      "," + to_string(r2)};
}

Outcome closed_forms() {
    const auto start = Clock::now();
    const Eigen::Matrix3d A = reference_gbm_matrix();
    const Eigen::Vector3d a_hat = A.diagonal();
    const Eigen::Matrix3d inv = adjugate_inverse(A);
    const Eigen::Vector3d b_oracle = 0.5 * inv * a_hat;
    const double lam_oracle = a_hat.dot(inv * a_hat) / 8.0;

    const GBMSpec gs = GBMSpec::from_matrix(A);
    const ClosedFormPair g = gbm_eigenpair(gs, {1.0, 1.0, 1.0});
    const Eigen::Vector3d b_exact(-7.0 / 4.0, 5.0 / 4.0, 0.5);
    double err = std::max((gs.B_hat - b_exact).cwiseAbs().maxCoeff(), (gs.B_hat - b_oracle).cwiseAbs().maxCoeff());
    err = std::max({err, std::abs(g.pair.lambda - 19.0 / 12.0), std::abs(g.pair.lambda - lam_oracle)});

    Eigen::Matrix2d R;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) R(i, j) = A(i, j) - A(i, 2) - A(j, 2) + A(2, 2);
    const double det = R(0, 0) * R(1, 1) - R(0, 1) * R(1, 0);
    Eigen::Matrix2d rinv;
    rinv << R(1, 1) / det, -R(0, 1) / det, -R(1, 0) / det, R(0, 0) / det;
    const Eigen::Vector2d r_hat = R.diagonal();
    const SimplexSpec ss = SimplexSpec::from_matrix(A);
    const ClosedFormPair s = simplex_eigenpair(ss, {1.0 / 3, 1.0 / 3});
    err = std::max({err, std::abs(ss.B_hat(0) + 1.0), std::abs(ss.B_hat(1) - 1.0),
                    (ss.B_hat - 0.5 * rinv * r_hat).cwiseAbs().maxCoeff(), std::abs(s.pair.lambda - 4.0 / 3.0),
                    std::abs(s.pair.lambda - r_hat.dot(rinv * r_hat) / 8.0)});

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.5, 2.0);
    std::exponential_distribution<double> ex(1.0);
    std::vector<Point> orthant, simplex;
    while (orthant.size() < 1000) orthant.push_back({u(rng), u(rng), u(rng)});
    while (simplex.size() < 1000) {
        const double a = ex(rng), b = ex(rng), c = ex(rng);
        const Point x{a / (a + b + c), b / (a + b + c)};
        if (s.domain.boundary_distance(x) > 0.05) simplex.push_back(x);
    }
    const double res_g = pde_residual(g.pair, g.c, g.domain, orthant, 1e-4);
    const double res_s = pde_residual(s.pair, s.c, s.domain, simplex, 1e-4);
    const double t = seconds_since(start);
    const bool pass = err <= kClosedFormTol && res_g < kResidualTol && res_s < kResidualTol && t < kClosedFormSeconds;
    return {pass, fmt("max_err=%.2e residual_gbm=%.2e residual_simplex=%.2e time=%.2fs", err, res_g, res_s, t)};
}

Outcome brownian_exit() {
    const auto start = Clock::now();
    const ExampleEntry b = make_example("bessel-4.3");
    SimConfig cfg;
    cfg.T = 1.0;
    cfg.dt = 1e-4;
    cfg.n_paths = 100000;
    cfg.absorb_level = 23;
    cfg.track_levels = false;
    const PathEnsemble ens = simulate(Measure::q(), b.domain, b.c, {1.0}, cfg);
    const Estimate e = exit_probability(ens, 1.0);
    const double exact = 2.0 * normal_cdf(1.0) - 1.0;
    const double t = seconds_since(start);
    const double z = std::abs(e.value - exact) / e.std_error;
    return {z <= kExitSe && t < kExitSeconds,
            fmt("estimate=%.6f exact=%.6f se=%.2e z=%.2f time=%.1fs", e.value, exact, e.std_error, z, t)};
}

Outcome exit_identity() {
    const auto start = Clock::now();
    const ExampleEntry w = make_example("ex-6.1.1");
    SimConfig cfg;
    cfg.dt = 1e-3;
    cfg.n_paths = 100000;
    cfg.absorb_level = 2;
    cfg.max_refine = 12;
    cfg.track_levels = false;
    const ExitIdentityResult r = exit_identity_check(w.domain, w.c, w.pair, {0.5}, 2.0, cfg);
    const double t = seconds_since(start);
    const double z = std::abs(r.lhs - r.rhs) / r.combined_se;
    return {z <= kExitSe && t < kIdentitySeconds,
            fmt("lhs=%.5f rhs=%.5f combined_se=%.2e z=%.2f time=%.1fs", r.lhs, r.rhs, r.combined_se, z, t)};
}

bool growth_holds(const ExampleEntry& e, const SimConfig& cfg, std::string& detail) {
    const PathEnsemble ens = simulate(Measure::pstar(e.pair), e.domain, e.c, e.pair.x0, cfg);
    const double lam = e.pair.lambda;
    const GrowthReport g = growth_rate(wealth_star(e.pair, ens), gamma_grid(0.0, 2.0 * lam + 1.0, 0.001));
    const double floor = lam - kGrowthBand;
    // fraction of paths with rate ≥ λ − band, read from the same report
    double fraction = 0.0;
    for (std::size_t i = 0; i < g.gammas.size(); ++i) {
        if (g.gammas[i] <= floor + 1e-12) fraction = g.fractions[i];
    }
    detail += fmt("[%s lambda=%.4f g_hat=%.3f q05=%.3f frac>=%.3f: %.3f absorbed=%zu] ", e.name.c_str(), lam,
                  g.g_hat, g.quantiles.front(), floor, fraction, g.skipped_absorbed);
    return fraction >= kGrowthFraction && std::abs(g.g_hat - lam) <= kGrowthBand;
}

Outcome growth() {
    const auto start = Clock::now();
    std::string detail;
    SimConfig cfg;
    cfg.T = 200.0;
    cfg.n_paths = 1000;
    cfg.track_levels = false;

    cfg.dt = 1e-3;
    cfg.absorb_level = 2;
    cfg.max_refine = 12;
    const bool wf = growth_holds(make_example("ex-6.1.1"), cfg, detail);

    cfg.dt = 1e-2;
    cfg.absorb_level = 2;
    cfg.scheme = Scheme::log_euler;
    // log X has variance A_ii·t ≈ 1400 at t = 200; no finite cap is meaningful
    cfg.outer_radius = std::numeric_limits<double>::infinity();
    const bool gbm = growth_holds(make_example("gbm-6.2.1"), cfg, detail);
    const double t = seconds_since(start);
    detail += fmt("time=%.1fs", t);
    return {wf && gbm && t < kGrowthSeconds, detail};
}

Outcome numeraire() {
    const auto start = Clock::now();
    const ExampleEntry w = make_example("ex-6.1.1");
    SimConfig cfg;
    cfg.T = 1.0;
    cfg.dt = 1e-3;
    cfg.n_paths = 10000;
    cfg.record_every = 1;
    cfg.absorb_level = 2;
    cfg.max_refine = 12;
    cfg.track_levels = false;
    const Strategy zero = [](std::span<const double>, double, std::span<double> out) { out[0] = 0.0; };
    const Strategy half = [](std::span<const double> x, double v, std::span<double> out) { out[0] = 0.5 * v / x[0]; };
    const NumeraireResult a = numeraire_check(w.pair, w.domain, w.c, zero, {0.5}, cfg);
    const NumeraireResult b = numeraire_check(w.pair, w.domain, w.c, half, {0.5}, cfg);
    const double t = seconds_since(start);
    return {a.monotone_pass && b.monotone_pass && t < kNumeraireSeconds,
            fmt("zero: pass=%d end=%.4f  half: pass=%d end=%.4f  time=%.1fs", a.monotone_pass, a.mean_ratio.back(),
                b.monotone_pass, b.mean_ratio.back(), t)};
}

Outcome arbitrage() {
    const auto start = Clock::now();
    SimConfig cfg;
    cfg.T = 1.0;
    cfg.dt = 1e-3;
    cfg.n_paths = 1000;
    cfg.record_every = 1;
    cfg.absorb_level = 23;
    cfg.track_levels = false;
    const ArbitrageReport r = arbitrage_convergence(1.0, {4.0, 16.0, 64.0, 256.0}, cfg);
    const double t = seconds_since(start);
    std::string detail;
    for (const ArbitrageRow& row : r.rows) {
        detail += fmt("[T=%g median=%.4f density_gap=%.4f] ", row.T, row.median_sup_deviation, row.mean_density_gap);
    }
    detail += fmt("time=%.1fs", t);
    return {r.sup_deviation_decreasing && r.density_gap_decreasing && t < kArbitrageSeconds, detail};
}

Outcome hopf() {
    const ExampleEntry e = make_example("ex-6.1.5");
    const HopfStatistic h = hopf_statistic(e.pair, e.c, e.domain, 20, 200000);
    const double sup = h.sup_alpha - e.pair.lambda;
    const double inf = h.inf_alpha - e.pair.lambda;
    const bool pass = std::abs(sup - 0.0) <= kHopfTol && std::abs(inf + 2.0 / 3.0) <= kHopfTol;
    return {pass, fmt("limsup(q-lambda)=%.4f target 0; liminf(q-lambda)=%.4f target -0.6667", sup, inf)};
}

Outcome properties() {
    bool pass = true;
    std::string detail;
    std::stringstream bins(EIGENGROWTH_TEST_BINARIES);
    std::string bin;
    while (std::getline(bins, bin, ',')) {
        const std::string cmd = "\"" + bin + "\" --gtest_filter=*Property* --gtest_brief=1 > /dev/null 2>&1";
        const int rc = std::system(cmd.c_str());
        const std::string name = bin.substr(bin.find_last_of('/') + 1);
        detail += name + (rc == 0 ? "=ok " : "=FAILED ");
        pass = pass && rc == 0;
    }

    ScenarioConfig c;
    c.kind = ScenarioKind::simulate;
    c.example = "ex-6.1.1";
    c.sim.T = 2.0;
    c.sim.dt = 1e-3;
    c.sim.n_paths = 2000;
    c.sim.record_every = 100;
    c.sim.absorb_level = 2;
    std::string reference;
    bool same = true;
    for (std::size_t threads : {1u, 4u, 8u}) {
        c.sim.threads = threads;
        const std::string dump = run_scenario(c).deterministic_body().dump(2);
        if (reference.empty()) reference = dump;
        same = same && dump == reference;
    }
    detail += same ? "determinism(1,4,8)=byte-exact" : "determinism(1,4,8)=DIFFERS";
    return {pass && same, detail};
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<Outcome()> run;
    };
    const Criterion criteria[] = {
        {"regular Sturm-Liouville", regular},
        {"singular solver", singular},
        {"classification", classification},
        {"closed forms", closed_forms},
        {"Brownian exit probability", brownian_exit},
        {"exit identity", exit_identity},
        {"growth rate", growth},
        {"numeraire", numeraire},
        {"arbitrage convergence", arbitrage},
        {"Hopf statistic", hopf},
        {"property suites and determinism", properties},
    };
    int failed = 0;
    int index = 0;
    for (const Criterion& c : criteria) {
        ++index;
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::printf("%s %2d %-32s %s\n", o.pass ? "PASS" : "FAIL", index, c.name, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %d criteria passed\n", index - failed, index);
    return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
