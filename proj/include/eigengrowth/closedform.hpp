#pragma once

#include "eigengrowth/eigenpair.hpp"
#include "eigengrowth/model.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace eigengrowth {

/// Correlated geometric Brownian motion on the orthant: c_ij(x) = x_i x_j A_ij.
struct GBMSpec {
    Eigen::MatrixXd A;
    Eigen::VectorXd A_hat;  ///< diagonal of A
    Eigen::VectorXd B_hat;  ///< ½ A⁻¹ Â

    static GBMSpec from_matrix(const Eigen::MatrixXd& A);
};

/// Relative capitalizations of the same model, on the open simplex in R^{d−1}.
struct SimplexSpec {
    Eigen::MatrixXd A;
    Eigen::MatrixXd reduced;      ///< 𝒜_ij = A_ij − A_id − A_jd + A_dd
    Eigen::VectorXd reduced_hat;  ///< diagonal of 𝒜
    Eigen::VectorXd B_hat;        ///< ½ 𝒜⁻¹ diag(𝒜)

    static SimplexSpec from_matrix(const Eigen::MatrixXd& A);
};

struct ClosedFormPair {
    Eigenpair pair;
    CovarianceField c;
    DomainSpec domain;
};

CovarianceField gbm_covariance(const GBMSpec& spec);
CovarianceField simplex_covariance(const SimplexSpec& spec);

/// η(x) = Π x_i^{B̂_i}, λ = ⅛ Â'A⁻¹Â.
ClosedFormPair gbm_eigenpair(const GBMSpec& spec, const Point& x0);
/// η(x) = Π x_i^{B̂_i} · (1−Σx_i)^{1−ΣB̂_i}, λ = ⅛ 𝒜̂'𝒜⁻¹𝒜̂.
ClosedFormPair simplex_eigenpair(const SimplexSpec& spec, const Point& x0);

/// max over the grid of |½Σ c_ij ∂_ij η + λη| / η with central differences of
/// step h (mixed partials by the 4-point stencil). Throws GeometryError when a
/// grid point lies within 2h of ∂E.
double pde_residual(const Eigenpair& pair, const CovarianceField& c, const DomainSpec& domain,
                    const std::vector<Point>& grid, double h);

/// q(x) = ½∇ℓ'c∇ℓ with ℓ = log η.
double hopf_q(const Eigenpair& pair, const CovarianceField& c, std::span<const double> x);

struct HopfStatistic {
    double inf = 0.0;
    double sup = 0.0;
    /// 1-D only: the same statistics restricted to the layer at α and at β.
    double inf_alpha = 0.0, sup_alpha = 0.0;
    double inf_beta = 0.0, sup_beta = 0.0;
    std::size_t samples = 0;
};

/// Estimates inf/sup of q over E \ E_n by dense sampling (geometric grid in 1-D,
/// Halton points otherwise).
HopfStatistic hopf_statistic(const Eigenpair& pair, const CovarianceField& c,
                             const DomainSpec& domain, int n, std::size_t sample);

/// Named example with a closed-form eigenpair.
struct ExampleEntry {
    std::string name;
    std::string description;
    DomainSpec domain;
    CovarianceField c;
    Eigenpair pair;
    double residual_threshold = 1e-5;
    double h = 1e-4;
    std::function<std::vector<Point>()> residual_grid;
};

std::vector<std::string> example_names();
/// Throws ConfigError listing the known names when `name` is unknown.
ExampleEntry make_example(const std::string& name);

/// The 3×3 matrix shipped with gbm-6.2.1 and simplex-6.2.1.
Eigen::MatrixXd reference_gbm_matrix();

}  // namespace eigengrowth
