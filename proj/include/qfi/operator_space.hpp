#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "qfi/errors.hpp"

namespace qfi {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Validated full-rank density matrix with cached eigendecomposition.
/// Eigenvalues are sorted descending; ties are broken deterministically by
/// lexicographic comparison of eigenvector columns.
struct DensityMatrix {
    ComplexMatrix matrix;       ///< symmetrized input, original basis
    RealVector eigenvalues;     ///< descending, all > rank_tol
    ComplexMatrix eigenvectors; ///< unitary, columns |a>

    int dim() const { return static_cast<int>(matrix.rows()); }
};

/// A Hermitian operator in the original (lab) basis.
struct HermitianOperator {
    ComplexMatrix matrix;
    int dim() const { return static_cast<int>(matrix.rows()); }
};

/// An operator viewed as a vector of Liouville space, stored in the rho
/// eigenbasis. Hermiticity is tracked as a flag, not enforced.
struct LiouvilleVector {
    ComplexMatrix matrix;
    bool hermitian = false;
    int dim() const { return static_cast<int>(matrix.rows()); }
};

/// The density-matrix-weighted geometry: rho plus the weight table
/// w_ab = (rho_a + rho_b)/2, which is also the spectrum of K_rho.
struct WeightedSpace {
    DensityMatrix rho;
    RealMatrix weights; ///< w_ab, symmetric positive

    int dim() const { return rho.dim(); }
};

/// Seed operator for the Krylov recursion together with its weighted norm.
struct Seed {
    LiouvilleVector op; ///< rho eigenbasis
    double norm = 0.0;  ///< sqrt(<O0,O0>_rho)
};

/// Result of differentiating a Kraus-parameterized channel.
struct KrausSeed {
    DensityMatrix rho_theta;
    LiouvilleVector op; ///< d(rho_theta)/d(theta), rho_theta eigenbasis
    double norm = 0.0;
};

/// Symmetrize `raw` and establish all DensityMatrix invariants.
/// Throws NotHermitian, NotUnitTrace, NotPositive, RankDeficient.
DensityMatrix validate_density_matrix(const ComplexMatrix& raw, double rank_tol = 1e-12);

/// Symmetrize and validate a Hermitian operator (same asymmetry policy as
/// validate_density_matrix: silent fix below 1e-8 relative, error above).
HermitianOperator make_hermitian_operator(const ComplexMatrix& raw);

WeightedSpace build_weighted_space(DensityMatrix rho);

/// Rotate an operator from the original basis into the rho eigenbasis.
LiouvilleVector to_liouville(const WeightedSpace& ctx, const HermitianOperator& op);

/// Weighted inner product <A,B>_rho = sum_ab w_ab conj(A_ab) B_ab
/// (equal to Tr[rho (A†B + B A†)]/2). Conjugate-linear in A.
Complex inner_product(const WeightedSpace& ctx, const LiouvilleVector& a, const LiouvilleVector& b);

double weighted_norm(const WeightedSpace& ctx, const LiouvilleVector& a);

/// Apply K_rho(Q) = {rho,Q}/2; entrywise w_ab Q_ab in the eigenbasis.
LiouvilleVector apply_k(const WeightedSpace& ctx, const LiouvilleVector& q);

/// Seed for unitary parameter encoding: O0 = i[rho,H], components
/// i(rho_a - rho_b) H_ab. Throws ZeroSeed when [rho,H] = 0 (QFI is 0).
Seed unitary_seed(const WeightedSpace& ctx, const HermitianOperator& h);

/// Seed for a parameter-dependent channel rho_theta = sum_k K_k rho0 K_k†:
/// evolves rho0, revalidates it, and differentiates through the Kraus list.
/// Throws NotTracePreserving, NonTracelessDerivative, ZeroSeed, plus
/// DensityMatrix validation errors on rho_theta.
KrausSeed kraus_seed(const DensityMatrix& rho0,
                     const std::vector<ComplexMatrix>& kraus,
                     const std::vector<ComplexMatrix>& dkraus,
                     double rank_tol = 1e-12);

} // namespace qfi
