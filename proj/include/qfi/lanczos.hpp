#pragma once

#include <optional>
#include <vector>

#include "qfi/operator_space.hpp"

namespace qfi {

/// Symmetric tridiagonal matrix in Lanczos-coefficient form: diagonal a_k
/// (k = 0..n-1) and off-diagonal b_k (k = 1..n-1, all positive).
struct TridiagonalMatrix {
    RealVector a;
    RealVector b;
    int size() const { return static_cast<int>(a.size()); }
};

enum class Reorth { full, none };

struct LanczosOptions {
    bool store_basis = false;
    double breakdown_rtol = 1e-10; ///< relative to max(|a_0|, b_1..b_k)
    Reorth reorth = Reorth::full;
};

struct KrylovResult {
    TridiagonalMatrix tridiag;
    std::vector<LiouvilleVector> basis; ///< v_0..v_{n-1}; empty unless stored
    std::optional<int> d0;              ///< breakdown index, present iff breakdown occurred
    double seed_norm = 0.0;             ///< |seed|_rho
    double orthogonality_defect = 0.0;  ///< max |<v_i,v_j>_rho - delta_ij|; 0 when unmeasured
};

/// Hermitian Lanczos recursion for K_rho acting on the seed.
///
/// The recursion is kept on the exact invariant manifold of entrywise
/// multiplication operators: every Krylov vector restricted to one
/// eigenvalue group of K_rho (components sharing a w_ab value, merged at
/// 1e-12 relative) is a real multiple of the seed's restriction. The
/// residual is projected onto that structure each step, which prevents
/// round-off from feeding ghost directions in the degenerate complement
/// and makes the breakdown at d0 sharp.
///
/// Throws ZeroSeed and, when full reorthogonalization cannot hold the
/// orthogonality defect below 1e-8, NonConvergedOrthogonality.
KrylovResult run_lanczos(const WeightedSpace& ctx, const LiouvilleVector& seed,
                         int max_n, const LanczosOptions& opts = {});

/// Solve T z = e_0 by LDL^T factorization. Throws SingularTridiagonal when a
/// pivot falls below 1e-14 * max|T|.
RealVector tridiag_solve_e0(const TridiagonalMatrix& t);

/// Galerkin value sequence F^(m) = seed_norm^2 |T_m^{-1} e_0|^2 for the
/// leading m-by-m blocks, m = 1..n. Non-decreasing, bounded by the exact
/// value reached at breakdown.
RealVector fn_series(const TridiagonalMatrix& t, double seed_norm);

} // namespace qfi
