#pragma once

#include <random>

#include "qfi/models.hpp"
#include "qfi/operator_space.hpp"

namespace qfi::test {

inline ComplexMatrix random_complex(int n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = Complex(g(gen), g(gen));
    return m;
}

inline ComplexMatrix random_hermitian(int n, std::uint64_t seed) {
    ComplexMatrix m = random_complex(n, seed);
    return 0.5 * (m + m.adjoint());
}

inline WeightedSpace random_space(int n, std::uint64_t seed) {
    return build_weighted_space(random_density_matrix(n, seed));
}

/// Canonical basis operator E_ab as a Liouville vector (rho eigenbasis).
inline LiouvilleVector basis_op(int n, int a, int b) {
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    m(a, b) = 1.0;
    return LiouvilleVector{std::move(m), a == b};
}

} // namespace qfi::test
