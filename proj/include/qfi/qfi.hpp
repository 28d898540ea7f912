#pragma once

#include "qfi/lanczos.hpp"
#include "qfi/operator_space.hpp"

namespace qfi {

/// Per-run QFI analysis. `f_series` is the coefficient partial-sum sequence
/// F * sum_{k<n} p_k (the orthogonal-projection values); the exact tail
/// identity rel_error(n) = sum_{k>=n} p_k and the D/n bound are stated for
/// this sequence. The Galerkin sequence from fn_series converges to the
/// same limit but differs level by level; it is reported separately where
/// needed.
struct QfiReport {
    double f_exact = 0.0;
    RealVector f_series;     ///< partial sums, length d0
    RealVector ell;          ///< signed Krylov coefficients of the SLD
    RealVector p;            ///< Krylov distribution, sums to 1
    double depth = 0.0;      ///< D = sum k p_k
    RealVector rel_error;    ///< rel_error(n) = sum_{k>=n} p_k, n = 1..d0
    RealVector bound_margin; ///< D/n - rel_error(n), >= -1e-10
};

/// Closed-form QFI, F = sum_ab (rho_a - rho_b)^2 |H_ab|^2 / w_ab.
/// This is the module's ground-truth oracle.
double exact_qfi(const WeightedSpace& ctx, const HermitianOperator& h);

/// Closed-form SLD, L_ab = i (rho_a - rho_b) H_ab / w_ab (rho eigenbasis).
LiouvilleVector exact_sld(const WeightedSpace& ctx, const HermitianOperator& h);

/// Krylov coefficients ell_k = seed_norm * (T_d0^{-1} e_0)_k from a run that
/// reached breakdown, where the Galerkin solution is exact.
/// Throws IncompleteKrylov when no breakdown was recorded.
RealVector krylov_coefficients(const KrylovResult& kres);

struct KrylovDistribution {
    RealVector p;
    double depth = 0.0;
};

/// Normalized weights p_k = ell_k^2 / sum ell^2 and mean level D.
KrylovDistribution krylov_distribution(const RealVector& ell);

/// Partial sums F^(n) = sum_{k<n} ell_k^2, n = 1..len(ell).
RealVector coefficient_partial_sums(const RealVector& ell);

/// Assemble the QfiReport, asserting the exact tail identity between the
/// supplied partial-sum series and the distribution tails (to 1e-9) and the
/// D/n bound (margin >= -1e-10). Throws IdentityViolation otherwise, which
/// indicates orthogonality loss upstream.
QfiReport error_report(const RealVector& f_series, const RealVector& ell, double f_exact);

} // namespace qfi
