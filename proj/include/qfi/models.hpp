#pragma once

#include <cstdint>

#include "qfi/operator_space.hpp"

namespace qfi {

/// Mixed-field Ising chain, open boundary:
///   H = -J sum_{i<L} sz_i sz_{i+1} - sum_i (g sx_i + h sz_i)
struct IsingParams {
    int length = 2;
    double coupling_j = 1.0;
    double field_g = 0.0;
    double field_h = 0.0;
};

constexpr int kDefaultMaxHilbertDim = 128; // 2^7

/// Dense 2^L x 2^L real-symmetric Hamiltonian via Pauli Kronecker products.
/// Throws DimensionTooLarge when 2^L exceeds max_dim.
HermitianOperator ising_hamiltonian(const IsingParams& p, int max_dim = kDefaultMaxHilbertDim);

/// Hilbert-Schmidt ensemble: rho = G G† / Tr(G G†) with G a matrix of
/// independent standard complex Gaussians from the seeded generator.
/// Deterministic given the seed; redraws once on a rank-tolerance failure.
DensityMatrix random_density_matrix(int dim, std::uint64_t rng_seed, double rank_tol = 1e-12);

/// SplitMix64 finalizer; used to derive independent member seeds.
std::uint64_t mix64(std::uint64_t x);

} // namespace qfi
