#include "eigengrowth/closedform.hpp"
#include "eigengrowth/eigen1d.hpp"
#include "eigengrowth/error.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace eigengrowth;

namespace {

/// Inverse by the adjugate formula, independent of the library's factorizations.
Eigen::Matrix3d adjugate_inverse(const Eigen::Matrix3d& m) {
    Eigen::Matrix3d adj;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            const int r0 = (j + 1) % 3, r1 = (j + 2) % 3, c0 = (i + 1) % 3, c1 = (i + 2) % 3;
            adj(i, j) = m(r0, c0) * m(r1, c1) - m(r0, c1) * m(r1, c0);
        }
    }
    const double det = m(0, 0) * adj(0, 0) + m(0, 1) * adj(1, 0) + m(0, 2) * adj(2, 0);
    return adj / det;
}

Eigen::Matrix2d inverse2(const Eigen::Matrix2d& m) {
    Eigen::Matrix2d inv;
    inv << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
    return inv / (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0));
}

std::vector<Point> random_orthant(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.5, 2.0);
    std::vector<Point> pts;
    for (std::size_t i = 0; i < n; ++i) pts.push_back({u(rng), u(rng), u(rng)});
    return pts;
}

std::vector<Point> random_simplex(std::size_t n, std::mt19937_64& rng, double margin) {
    std::exponential_distribution<double> e(1.0);
    const DomainSpec d = DomainSpec::simplex(3);
    std::vector<Point> pts;
    while (pts.size() < n) {
        const double a = e(rng), b = e(rng), c = e(rng);
        const Point x{a / (a + b + c), b / (a + b + c)};
        if (d.boundary_distance(x) > margin) pts.push_back(x);
    }
    return pts;
}

}  // namespace

TEST(Gbm, ReferenceMatrixEigenpairMatchesAdjugateOracle) {
    const Eigen::Matrix3d A = reference_gbm_matrix();
    const Eigen::Vector3d a_hat = A.diagonal();
    const Eigen::Vector3d b_oracle = 0.5 * adjugate_inverse(A) * a_hat;
    const double lambda_oracle = a_hat.dot(adjugate_inverse(A) * a_hat) / 8.0;

    const GBMSpec spec = GBMSpec::from_matrix(A);
    EXPECT_NEAR(spec.B_hat(0), -7.0 / 4.0, 1e-12);
    EXPECT_NEAR(spec.B_hat(1), 5.0 / 4.0, 1e-12);
    EXPECT_NEAR(spec.B_hat(2), 0.5, 1e-12);
    EXPECT_LT((spec.B_hat - b_oracle).cwiseAbs().maxCoeff(), 1e-12);

    const ClosedFormPair cf = gbm_eigenpair(spec, {1.0, 1.0, 1.0});
    EXPECT_NEAR(cf.pair.lambda, 19.0 / 12.0, 1e-12);
    EXPECT_NEAR(cf.pair.lambda, lambda_oracle, 1e-12);
}

TEST(Simplex, ReferenceMatrixEigenpairMatchesOracle) {
    const Eigen::Matrix3d A = reference_gbm_matrix();
    Eigen::Matrix2d R;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) R(i, j) = A(i, j) - A(i, 2) - A(j, 2) + A(2, 2);
    const Eigen::Vector2d r_hat = R.diagonal();
    const Eigen::Vector2d b_oracle = 0.5 * inverse2(R) * r_hat;

    const SimplexSpec spec = SimplexSpec::from_matrix(A);
    EXPECT_NEAR(spec.B_hat(0), -1.0, 1e-12);
    EXPECT_NEAR(spec.B_hat(1), 1.0, 1e-12);
    EXPECT_LT((spec.B_hat - b_oracle).cwiseAbs().maxCoeff(), 1e-12);
    const ClosedFormPair cf = simplex_eigenpair(spec, {1.0 / 3, 1.0 / 3});
    EXPECT_NEAR(cf.pair.lambda, 4.0 / 3.0, 1e-12);
    EXPECT_NEAR(cf.pair.lambda, r_hat.dot(inverse2(R) * r_hat) / 8.0, 1e-12);
}

TEST(Gbm, RejectsNonPositiveDefinite) {
    Eigen::Matrix3d A;
    A << 1, 2, 0, 2, 1, 0, 0, 0, 1;
    EXPECT_THROW(GBMSpec::from_matrix(A), NotPositiveDefiniteError);
}

TEST(ClosedFormProperty, ResidualOnRandomInteriorGrids) {
    std::mt19937_64 rng(2024);
    const auto gbm = gbm_eigenpair(GBMSpec::from_matrix(reference_gbm_matrix()), {1.0, 1.0, 1.0});
    EXPECT_LT(pde_residual(gbm.pair, gbm.c, gbm.domain, random_orthant(1000, rng), 1e-4), 1e-5);
    const auto sx = simplex_eigenpair(SimplexSpec::from_matrix(reference_gbm_matrix()), {1.0 / 3, 1.0 / 3});
    EXPECT_LT(pde_residual(sx.pair, sx.c, sx.domain, random_simplex(1000, rng, 0.05), 1e-4), 1e-5);
}

TEST(ClosedFormProperty, TwoAssetSimplexMatchesOneDimensionalSolver) {
    for (const auto& [a, b] : {std::pair{1.0, 1.0}, std::pair{0.5, 2.0}, std::pair{3.0, 1.0}}) {
        Eigen::Matrix2d A = Eigen::Vector2d(a, b).asDiagonal();
        const auto cf = simplex_eigenpair(SimplexSpec::from_matrix(A), {0.5});
        EXPECT_NEAR(cf.pair.lambda, (a + b) / 8.0, 1e-12);
        const double k = a + b;
        const auto c = CovarianceField::one_dimensional(
            "sq", [k](double x) { return k * x * x * (1 - x) * (1 - x); });
        const EigenSolution s = solve_principal_eigenpair(c, Interval{0.0, 1.0});
        double gap = 0.0;
        for (int i = 0; i <= 400; ++i) {
            const double x = 0.1 + 0.8 * i / 400.0;
            const Point p{x};
            gap = std::max(gap, std::abs(cf.pair.eta(p) / cf.pair.eta(Point{0.5}) - s.pair.eta1(x) / s.pair.eta1(0.5)));
        }
        EXPECT_LT(gap, 1e-3) << a << "," << b;
    }
}

TEST(ClosedFormProperty, PositiveHomogeneity) {
    const Eigen::MatrixXd A = reference_gbm_matrix();
    const GBMSpec base = GBMSpec::from_matrix(A);
    const double lam = gbm_eigenpair(base, {1, 1, 1}).pair.lambda;
    for (double k : {0.25, 3.0, 10.0}) {
        const GBMSpec s = GBMSpec::from_matrix(k * A);
        EXPECT_NEAR(gbm_eigenpair(s, {1, 1, 1}).pair.lambda, k * lam, 1e-12 * k);
        EXPECT_LT((s.B_hat - base.B_hat).cwiseAbs().maxCoeff(), 1e-12);
        const SimplexSpec sx = SimplexSpec::from_matrix(k * A);
        EXPECT_NEAR(simplex_eigenpair(sx, {1.0 / 3, 1.0 / 3}).pair.lambda, k * 4.0 / 3.0, 1e-12 * k);
    }
}

TEST(ClosedFormProperty, EtaDivergesAlongBoundaryRays) {
    // rays: GBM x = (s, 1, 1) as s → 0; simplex x = (s, 1/2) as s → 0
    const auto gbm = gbm_eigenpair(GBMSpec::from_matrix(reference_gbm_matrix()), {1.0, 1.0, 1.0});
    EXPECT_GT(gbm.pair.eta(Point{1e-8, 1.0, 1.0}), 1e6);
    const auto sx = simplex_eigenpair(SimplexSpec::from_matrix(reference_gbm_matrix()), {1.0 / 3, 1.0 / 3});
    EXPECT_GT(sx.pair.eta(Point{1e-8, 0.5}), 1e6);
}

TEST(Residual, RefusesPointsNearBoundary) {
    const ExampleEntry e = make_example("ex-6.1.1");
    EXPECT_THROW(pde_residual(e.pair, e.c, e.domain, {{1e-5}}, 1e-4), GeometryError);
}

TEST(Residual, DetectsWrongEigenvalue) {
    ExampleEntry e = make_example("ex-6.1.1");
    e.pair.lambda = 1.1;
    EXPECT_GT(pde_residual(e.pair, e.c, e.domain, {{0.5}}, 1e-4), 0.05);
}

TEST(Hopf, WrightFisherQ) {
    // q = ½c(η'/η)² = (1−2x)²/(2x(1−x))
    const ExampleEntry e = make_example("ex-6.1.1");
    for (double x : {0.1, 0.3, 0.5}) {
        EXPECT_NEAR(hopf_q(e.pair, e.c, Point{x}), (1 - 2 * x) * (1 - 2 * x) / (2 * x * (1 - x)), 1e-12);
    }
}

TEST(Registry, EightEntriesRoundTrip) {
    const auto names = example_names();
    ASSERT_EQ(names.size(), 8u);
    for (const std::string& n : names) {
        const ExampleEntry e = make_example(n);
        EXPECT_EQ(e.name, n);
        EXPECT_FALSE(e.description.empty());
        EXPECT_LT(pde_residual(e.pair, e.c, e.domain, e.residual_grid(), e.h), e.residual_threshold) << n;
    }
}

TEST(Registry, UnknownNameListsKnownNames) {
    try {
        make_example("ex-9.9.9");
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("ex-6.1.1"), std::string::npos);
        EXPECT_NE(msg.find("bessel-4.3"), std::string::npos);
    }
}
