#pragma once

#include "qfi/spectral.hpp"

namespace qfi {

enum class DecayModel { exponential, algebraic };

/// Least-squares decay fit of a positive series over a window of Krylov
/// levels. `value` is the rate (exponential, series ~ e^{-rate n}) or the
/// exponent (algebraic, series ~ n^{-exponent}); `residual` is the RMS of
/// the log-space fit.
struct DecayFit {
    DecayModel model = DecayModel::exponential;
    double value = 0.0;
    int n_lo = 0;
    int n_hi = 0;
    double residual = 0.0;
};

/// Atomic measure with density ~ lambda^alpha down to a hard edge at 0,
/// discretized on a geometric mesh lambda_j = lambda_max r^{M-j} with
/// bottom cutoff lambda_1 = bottom_cutoff * lambda_max. Atom masses are
/// exact cell integrals of lambda^alpha (first cell extends to 0), so the
/// discrete cumulative follows the lambda^{alpha+1} law exactly at the
/// atoms.
SpectralMeasure make_hard_edge_measure(double alpha, int atoms, double lambda_max,
                                       double bottom_cutoff = 1e-8);

/// Gapped measure: Chebyshev-Lobatto atoms of [lambda_min, lambda_max]
/// (endpoints included exactly) with arcsine-type weights.
SpectralMeasure make_gapped_measure(double lambda_min, double lambda_max, int atoms);

struct StieltjesResult {
    TridiagonalMatrix tridiag;
    RealMatrix poly_values; ///< n_max x M, P_k(lambda_j)
};

/// Measure-space Lanczos: orthonormal polynomials of the measure via the
/// three-term recurrence with one reorthogonalization pass.
StieltjesResult stieltjes_lanczos(const SpectralMeasure& m, int n_max);

struct CoefficientTail {
    RealVector ell;       ///< ell_k = sum_j mu_j P_k(lambda_j)/lambda_j (unit seed norm)
    RealVector rel_error; ///< rel_error(n), n = 1..n_max
    double f = 0.0;       ///< sum_j mu_j / lambda_j^2
};

/// Krylov coefficients of 1/lambda and the relative truncation error
/// 1 - (sum_{k<n} ell_k^2)/F, evaluated as exact tail sums (the remainder
/// beyond n_max is the weighted residual of the degree-(n_max-1)
/// projection, so deep tails stay accurate).
CoefficientTail coefficient_tail(const SpectralMeasure& m, int n_max);

/// Fit log(series) against n (exponential) or log n (algebraic) over
/// n in [n_lo, n_hi]; series[i] is the value at level n = i+1.
DecayFit fit_decay(const RealVector& series, DecayModel model, int n_lo, int n_hi);

/// Classical optimal rate for a gapped support: the rel-error sequence of
/// the 1/lambda^2 integral decays as exp(-2 gamma* n) with
/// gamma* = ln[(1+sqrt(r))/(1-sqrt(r))], r = lambda_min/lambda_max.
double gapped_error_rate(double ratio);

} // namespace qfi
