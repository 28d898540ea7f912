#include "qfi/models.hpp"

#include <random>
#include <sstream>

namespace qfi {

namespace {

// Place a 2x2 block op at `site` of an L-site chain, identity elsewhere,
// accumulated directly into the dense matrix: the bit of the basis index at
// position (L-1-site) selects the spin state.
void add_single_site(ComplexMatrix& h, int length, int site, const Eigen::Matrix2cd& op, double prefactor) {
    const int dim = static_cast<int>(h.rows());
    const int bit = length - 1 - site;
    for (int col = 0; col < dim; ++col) {
        const int s = (col >> bit) & 1;
        for (int sp = 0; sp < 2; ++sp) {
            const Complex val = op(sp, s);
            if (val == Complex(0, 0)) continue;
            const int row = (col & ~(1 << bit)) | (sp << bit);
            h(row, col) += prefactor * val;
        }
    }
}

} // namespace

HermitianOperator ising_hamiltonian(const IsingParams& p, int max_dim) {
    if (p.length < 2)
        throw DimensionTooLarge("ising_hamiltonian: chain length must be at least 2");
    if (p.length >= 31 || (1 << p.length) > max_dim) {
        std::ostringstream os;
        os << "Hilbert dimension 2^" << p.length << " exceeds the cap " << max_dim;
        throw DimensionTooLarge(os.str());
    }
    const int dim = 1 << p.length;
    ComplexMatrix h = ComplexMatrix::Zero(dim, dim);

    Eigen::Matrix2cd sx, sz;
    sx << 0, 1, 1, 0;
    sz << 1, 0, 0, -1;

    // ZZ bonds are diagonal: accumulate them directly.
    for (int col = 0; col < dim; ++col) {
        double e = 0.0;
        for (int i = 0; i < p.length - 1; ++i) {
            const int zi = ((col >> (p.length - 1 - i)) & 1) ? -1 : 1;
            const int zj = ((col >> (p.length - 2 - i)) & 1) ? -1 : 1;
            e += -p.coupling_j * zi * zj;
        }
        h(col, col) += e;
    }
    for (int i = 0; i < p.length; ++i) {
        add_single_site(h, p.length, i, sx, -p.field_g);
        add_single_site(h, p.length, i, sz, -p.field_h);
    }
    return HermitianOperator{std::move(h)};
}

DensityMatrix random_density_matrix(int dim, std::uint64_t rng_seed, double rank_tol) {
    if (dim < 2)
        throw DimensionMismatch("random_density_matrix: dim must be >= 2");
    std::mt19937_64 gen(rng_seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int attempt = 0; attempt < 2; ++attempt) {
        ComplexMatrix g(dim, dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) {
                const double re = gauss(gen);
                const double im = gauss(gen);
                g(i, j) = Complex(re, im);
            }
        ComplexMatrix rho = g * g.adjoint();
        rho /= rho.trace().real();
        try {
            return validate_density_matrix(rho, rank_tol);
        } catch (const RankDeficient&) {
            if (attempt == 1) throw;
        }
    }
    throw RankDeficient("random_density_matrix: redraw failed"); // unreachable
}

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace qfi
