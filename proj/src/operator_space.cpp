#include "qfi/operator_space.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace qfi {

namespace {

// Asymmetry above this (relative to max|M|) is an error; below it the
// symmetrized matrix is used silently.
constexpr double kAsymmetryRtol = 1e-8;
constexpr double kTraceTol = 1e-12;
constexpr double kDiagonalizationRtol = 1e-10;
constexpr double kZeroSeedTol = 1e-14;

double max_abs(const ComplexMatrix& m) {
    return m.cwiseAbs().maxCoeff();
}

ComplexMatrix symmetrize_checked(const ComplexMatrix& raw, const char* who) {
    if (raw.rows() != raw.cols())
        throw DimensionMismatch(std::string(who) + ": matrix is not square");
    const double scale = std::max(max_abs(raw), 1e-300);
    const double asym = max_abs(ComplexMatrix(raw - raw.adjoint()));
    if (asym > kAsymmetryRtol * scale) {
        std::ostringstream os;
        os << who << ": asymmetry " << asym << " exceeds " << kAsymmetryRtol << " * max|M|";
        throw NotHermitian(os.str());
    }
    return 0.5 * (raw + raw.adjoint());
}

// Descending eigenvalue order with deterministic tie-breaking by
// lexicographic comparison of the eigenvector columns.
std::vector<int> sorted_indices(const RealVector& vals, const ComplexMatrix& vecs) {
    std::vector<int> idx(vals.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int i, int j) {
        if (vals[i] != vals[j]) return vals[i] > vals[j];
        for (int r = 0; r < vecs.rows(); ++r) {
            const Complex a = vecs(r, i), b = vecs(r, j);
            if (a.real() != b.real()) return a.real() < b.real();
            if (a.imag() != b.imag()) return a.imag() < b.imag();
        }
        return false;
    });
    return idx;
}

} // namespace

DensityMatrix validate_density_matrix(const ComplexMatrix& raw, double rank_tol) {
    ComplexMatrix m = symmetrize_checked(raw, "validate_density_matrix");
    const double tr = m.trace().real();
    if (std::abs(tr - 1.0) > kTraceTol) {
        std::ostringstream os;
        os << "trace " << tr << " deviates from 1 by more than " << kTraceTol;
        throw NotUnitTrace(os.str());
    }

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m);
    const std::vector<int> order = sorted_indices(es.eigenvalues(), es.eigenvectors());
    const int n = static_cast<int>(m.rows());
    RealVector vals(n);
    ComplexMatrix vecs(n, n);
    for (int k = 0; k < n; ++k) {
        vals[k] = es.eigenvalues()[order[k]];
        vecs.col(k) = es.eigenvectors().col(order[k]);
    }

    const double min_eig = vals[n - 1];
    if (min_eig < -rank_tol) {
        std::ostringstream os;
        os << "negative eigenvalue " << min_eig;
        throw NotPositive(os.str());
    }
    if (min_eig < rank_tol) {
        std::ostringstream os;
        os << "minimum eigenvalue " << min_eig << " below rank tolerance " << rank_tol
           << "; the full-rank QFI formula does not apply";
        throw RankDeficient(os.str());
    }

    // U† M U must be diagonal to 1e-10 relative.
    ComplexMatrix d = vecs.adjoint() * m * vecs;
    ComplexMatrix off = d;
    off.diagonal().setZero();
    if (max_abs(off) > kDiagonalizationRtol * vals[0])
        throw NotHermitian("eigendecomposition failed to diagonalize the input");

    return DensityMatrix{std::move(m), std::move(vals), std::move(vecs)};
}

HermitianOperator make_hermitian_operator(const ComplexMatrix& raw) {
    return HermitianOperator{symmetrize_checked(raw, "make_hermitian_operator")};
}

WeightedSpace build_weighted_space(DensityMatrix rho) {
    const int n = rho.dim();
    RealMatrix w(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            w(a, b) = 0.5 * (rho.eigenvalues[a] + rho.eigenvalues[b]);
    return WeightedSpace{std::move(rho), std::move(w)};
}

LiouvilleVector to_liouville(const WeightedSpace& ctx, const HermitianOperator& op) {
    if (op.dim() != ctx.dim())
        throw DimensionMismatch("to_liouville: operator and space dimensions differ");
    const ComplexMatrix& u = ctx.rho.eigenvectors;
    return LiouvilleVector{u.adjoint() * op.matrix * u, true};
}

Complex inner_product(const WeightedSpace& ctx, const LiouvilleVector& a, const LiouvilleVector& b) {
    if (a.dim() != ctx.dim() || b.dim() != ctx.dim())
        throw DimensionMismatch("inner_product: dimensions differ");
    return (ctx.weights.cast<Complex>().array() * a.matrix.conjugate().array() * b.matrix.array()).sum();
}

double weighted_norm(const WeightedSpace& ctx, const LiouvilleVector& a) {
    if (a.dim() != ctx.dim())
        throw DimensionMismatch("weighted_norm: dimensions differ");
    return std::sqrt((ctx.weights.array() * a.matrix.array().abs2()).sum());
}

LiouvilleVector apply_k(const WeightedSpace& ctx, const LiouvilleVector& q) {
    if (q.dim() != ctx.dim())
        throw DimensionMismatch("apply_k: dimensions differ");
    return LiouvilleVector{ctx.weights.cast<Complex>().cwiseProduct(q.matrix), q.hermitian};
}

Seed unitary_seed(const WeightedSpace& ctx, const HermitianOperator& h) {
    if (h.dim() != ctx.dim())
        throw DimensionMismatch("unitary_seed: dimensions differ");
    const LiouvilleVector h_eig = to_liouville(ctx, h);
    const int n = ctx.dim();
    ComplexMatrix o0(n, n);
    const Complex i_unit(0.0, 1.0);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            o0(a, b) = i_unit * (ctx.rho.eigenvalues[a] - ctx.rho.eigenvalues[b]) * h_eig.matrix(a, b);
    LiouvilleVector seed{std::move(o0), true};
    const double nrm = weighted_norm(ctx, seed);
    if (nrm < kZeroSeedTol)
        throw ZeroSeed("[rho,H] vanishes; the QFI is exactly 0");
    return Seed{std::move(seed), nrm};
}

KrausSeed kraus_seed(const DensityMatrix& rho0,
                     const std::vector<ComplexMatrix>& kraus,
                     const std::vector<ComplexMatrix>& dkraus,
                     double rank_tol) {
    if (kraus.size() != dkraus.size())
        throw DimensionMismatch("kraus_seed: kraus and dkraus lists differ in length");
    const int n = rho0.dim();
    ComplexMatrix completeness = ComplexMatrix::Zero(n, n);
    for (const auto& k : kraus) {
        if (k.rows() != n || k.cols() != n)
            throw DimensionMismatch("kraus_seed: Kraus operator dimension mismatch");
        completeness += k.adjoint() * k;
    }
    if ((completeness - ComplexMatrix::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-10)
        throw NotTracePreserving("sum K†K deviates from identity beyond 1e-10");

    ComplexMatrix rho_t = ComplexMatrix::Zero(n, n);
    for (const auto& k : kraus)
        rho_t += k * rho0.matrix * k.adjoint();
    DensityMatrix rho_theta = validate_density_matrix(rho_t, rank_tol);

    ComplexMatrix o0 = ComplexMatrix::Zero(n, n);
    for (std::size_t j = 0; j < kraus.size(); ++j) {
        if (dkraus[j].rows() != n || dkraus[j].cols() != n)
            throw DimensionMismatch("kraus_seed: dKraus operator dimension mismatch");
        o0 += dkraus[j] * rho0.matrix * kraus[j].adjoint();
        o0 += kraus[j] * rho0.matrix * dkraus[j].adjoint();
    }
    o0 = 0.5 * (o0 + o0.adjoint());
    if (std::abs(o0.trace()) > 1e-10)
        throw NonTracelessDerivative("Tr d(rho_theta)/d(theta) exceeds 1e-10; channel is not trace preserving");

    WeightedSpace ctx = build_weighted_space(rho_theta);
    const ComplexMatrix& u = ctx.rho.eigenvectors;
    LiouvilleVector seed{u.adjoint() * o0 * u, true};
    const double nrm = weighted_norm(ctx, seed);
    if (nrm < kZeroSeedTol)
        throw ZeroSeed("d(rho_theta)/d(theta) vanishes");
    return KrausSeed{std::move(ctx.rho), std::move(seed), nrm};
}

} // namespace qfi
