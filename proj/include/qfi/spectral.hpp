#pragma once

#include <utility>
#include <variant>

#include "qfi/lanczos.hpp"
#include "qfi/operator_space.hpp"

namespace qfi {

/// Finite atomic measure {(lambda_j, mu_j)}, lambda strictly increasing,
/// weights positive and summing to 1.
struct SpectralMeasure {
    RealVector lambda;
    RealVector weight;
    int size() const { return static_cast<int>(lambda.size()); }
};

struct HankelMoments {
    RealVector mu;        ///< mu_0 .. mu_{2n-2}
    RealMatrix m;         ///< n x n Hankel matrix M_ij = mu_{i+j}
    double cond_estimate = 0.0;
};

struct QuadratureRule {
    RealVector nodes;
    RealVector weights;
    int size() const { return static_cast<int>(nodes.size()); }
};

struct GappedRegime {
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    double gamma = 0.0; ///< closed-form rate; +inf for single-atom support
};

struct HardEdgeRegime {
    double alpha_hat = 0.0;
    std::pair<double, double> fit_window{0.0, 0.0}; ///< lambda range used
    double fit_residual = 0.0;                      ///< RMS of the log-log fit
};

using RegimeClassification = std::variant<GappedRegime, HardEdgeRegime>;

struct ClassifyOptions {
    double gap_threshold = 1e-3; ///< relative to lambda_max
    double fit_decades = 1.5;    ///< extent of the low-lambda fit window
};

/// Scalar spectral measure of K_rho relative to the normalized seed v0:
/// one atom per distinct w_ab (merged at 1e-12 relative) carrying weight
/// sum w_ab |v0_ab|^2. Atoms below 1e-16 are dropped and the rest
/// renormalized. Throws NormalizationFailure when the raw mass deviates
/// from 1 by more than 1e-8.
SpectralMeasure spectral_measure(const WeightedSpace& ctx, const LiouvilleVector& v0);

/// Moments mu_k = sum_j mu_j lambda_j^k for k = 0..k_max.
RealVector moments(const SpectralMeasure& m, int k_max);

/// The n x n Hankel matrix of a moment sequence (needs mu_0..mu_{2n-2}).
HankelMoments build_hankel(const RealVector& mu, int n);

/// Recover Lanczos coefficients a_0..a_{n-1}, b_1..b_{n-1} from moments
/// mu_0..mu_{2n-1} via the Cholesky factorization of the Hankel matrix.
/// Refuses ill-conditioned inputs (pivot below 1e-13 mu_0, or n beyond
/// n_hankel_max) rather than returning garbage.
TridiagonalMatrix lanczos_from_moments(const RealVector& mu, int n, int n_hankel_max = 12);

/// Golub-Welsch rule: nodes are the eigenvalues of T, weights the squared
/// first components of its normalized eigenvectors.
QuadratureRule gauss_quadrature(const TridiagonalMatrix& t);

/// F^(n) = seed_norm^2 sum_k w_k / zeta_k^2. Equals the last entry of
/// fn_series for the same T. Throws NodeAtZero for nodes below 1e-14.
double qfi_by_quadrature(const QuadratureRule& rule, double seed_norm);

/// Two-regime classification. Gapped when lambda_min >= gap_threshold *
/// lambda_max, with the closed-form rate
///   gamma = ln[(1+sqrt(1-r^2))/(1-sqrt(1-r^2))], r = lambda_min/lambda_max;
/// otherwise HardEdge with alpha_hat from the least-squares slope of
/// log(cumulative mass) vs log(lambda) over the lowest fit_decades decades
/// (cumulative ~ lambda^(alpha+1)).
RegimeClassification classify_measure(const SpectralMeasure& m, const ClassifyOptions& opts = {});

} // namespace qfi
