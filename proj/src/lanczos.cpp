#include "qfi/lanczos.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace qfi {

namespace {

constexpr double kZeroSeedTol = 1e-14;
constexpr double kGroupMergeRtol = 1e-12; // matches spectral-measure atom merging
constexpr double kDefectLimit = 1e-8;

// One eigenvalue group of K_rho restricted to the seed's support: flat
// component indices sharing a w value, the seed's restriction, and its
// squared weighted norm.
struct EigenGroup {
    std::vector<int> entries;
    std::vector<Complex> seed_dir;
    std::vector<double> w;
    double norm2 = 0.0;
};

std::vector<EigenGroup> build_groups(const WeightedSpace& ctx, const ComplexMatrix& seed) {
    const int n = ctx.dim();
    const double seed_scale = seed.cwiseAbs().maxCoeff();
    std::vector<int> active;
    active.reserve(n * n);
    for (int idx = 0; idx < n * n; ++idx)
        if (std::abs(seed(idx)) > 1e-15 * seed_scale) active.push_back(idx);
    std::sort(active.begin(), active.end(), [&](int i, int j) {
        return ctx.weights(i) < ctx.weights(j);
    });

    std::vector<EigenGroup> groups;
    for (int idx : active) {
        const double w = ctx.weights(idx);
        if (groups.empty() || w - groups.back().w.back() > kGroupMergeRtol * w)
            groups.emplace_back();
        EigenGroup& g = groups.back();
        g.entries.push_back(idx);
        g.seed_dir.push_back(seed(idx));
        g.w.push_back(w);
        g.norm2 += w * std::norm(seed(idx));
    }
    return groups;
}

// Project x onto the invariant structure: within each group, a real
// multiple of the seed's restriction; zero outside the seed support.
void project_structure(const std::vector<EigenGroup>& groups, ComplexMatrix& x) {
    ComplexMatrix out = ComplexMatrix::Zero(x.rows(), x.cols());
    for (const EigenGroup& g : groups) {
        double c = 0.0;
        for (std::size_t i = 0; i < g.entries.size(); ++i)
            c += g.w[i] * (std::conj(g.seed_dir[i]) * x(g.entries[i])).real();
        c /= g.norm2;
        for (std::size_t i = 0; i < g.entries.size(); ++i)
            out(g.entries[i]) = c * g.seed_dir[i];
    }
    x = std::move(out);
}

} // namespace

KrylovResult run_lanczos(const WeightedSpace& ctx, const LiouvilleVector& seed,
                         int max_n, const LanczosOptions& opts) {
    if (seed.dim() != ctx.dim())
        throw DimensionMismatch("run_lanczos: seed and space dimensions differ");
    if (max_n < 1)
        throw DimensionMismatch("run_lanczos: max_n must be >= 1");
    const double seed_norm = weighted_norm(ctx, seed);
    if (seed_norm < kZeroSeedTol)
        throw ZeroSeed("run_lanczos: seed norm below 1e-14");

    const std::vector<EigenGroup> groups = build_groups(ctx, seed.matrix);
    const bool keep_all = opts.store_basis || opts.reorth == Reorth::full;

    std::vector<ComplexMatrix> basis;
    ComplexMatrix v = seed.matrix / seed_norm;
    project_structure(groups, v);
    ComplexMatrix v_prev = ComplexMatrix::Zero(ctx.dim(), ctx.dim());

    std::vector<double> a_coeffs, b_coeffs;
    std::optional<int> d0;

    auto dot = [&ctx](const ComplexMatrix& x, const ComplexMatrix& y) -> Complex {
        return (ctx.weights.cast<Complex>().array() * x.conjugate().array() * y.array()).sum();
    };
    auto wnorm = [&ctx](const ComplexMatrix& x) -> double {
        return std::sqrt((ctx.weights.array() * x.array().abs2()).sum());
    };

    for (int k = 0; k < max_n; ++k) {
        if (keep_all) basis.push_back(v);
        ComplexMatrix kv = ctx.weights.cast<Complex>().cwiseProduct(v);
        const double a_k = dot(v, kv).real();
        a_coeffs.push_back(a_k);

        ComplexMatrix w = kv - a_k * v;
        if (k > 0) w -= b_coeffs.back() * v_prev;
        if (opts.reorth == Reorth::full) {
            for (int pass = 0; pass < 2; ++pass)
                for (const ComplexMatrix& u : basis) w -= dot(u, w) * u;
        }
        project_structure(groups, w);

        const double b_next = wnorm(w);
        double scale = std::abs(a_coeffs[0]);
        for (double b : b_coeffs) scale = std::max(scale, b);
        if (b_next < opts.breakdown_rtol * scale) {
            d0 = k + 1;
            break;
        }
        if (k + 1 == max_n) break;
        b_coeffs.push_back(b_next);
        v_prev = std::move(v);
        v = w / b_next;
    }

    const int n = static_cast<int>(a_coeffs.size());
    TridiagonalMatrix t;
    t.a.resize(n);
    for (int i = 0; i < n; ++i) t.a[i] = a_coeffs[i];
    t.b.resize(static_cast<int>(b_coeffs.size()));
    for (std::size_t i = 0; i < b_coeffs.size(); ++i) t.b[static_cast<int>(i)] = b_coeffs[i];

    double defect = 0.0;
    if (keep_all) {
        for (std::size_t i = 0; i < basis.size(); ++i)
            for (std::size_t j = i; j < basis.size(); ++j) {
                const Complex g = dot(basis[i], basis[j]);
                defect = std::max(defect, std::abs(g - (i == j ? 1.0 : 0.0)));
            }
        if (opts.reorth == Reorth::full && defect > kDefectLimit) {
            std::ostringstream os;
            os << "orthogonality defect " << defect << " above " << kDefectLimit
               << " despite full reorthogonalization";
            throw NonConvergedOrthogonality(os.str());
        }
    }

    KrylovResult res;
    res.tridiag = std::move(t);
    if (opts.store_basis) {
        res.basis.reserve(basis.size());
        for (auto& m : basis) res.basis.push_back(LiouvilleVector{std::move(m), seed.hermitian});
    }
    res.d0 = d0;
    res.seed_norm = seed_norm;
    res.orthogonality_defect = defect;
    return res;
}

namespace {

// LDL^T factorization of the leading m-by-m block; returns false on pivot
// failure. z receives the solution of T_m z = e_0.
bool solve_block_e0(const TridiagonalMatrix& t, int m, RealVector& z) {
    const double scale = std::max(t.a.cwiseAbs().maxCoeff(),
                                  t.b.size() > 0 ? t.b.cwiseAbs().maxCoeff() : 0.0);
    RealVector d(m), l(std::max(m - 1, 0));
    d[0] = t.a[0];
    if (std::abs(d[0]) <= 1e-14 * scale) return false;
    for (int k = 1; k < m; ++k) {
        l[k - 1] = t.b[k - 1] / d[k - 1];
        d[k] = t.a[k] - l[k - 1] * t.b[k - 1];
        if (std::abs(d[k]) <= 1e-14 * scale) return false;
    }
    // L y = e0, then D u = y, then L^T z = u
    z.resize(m);
    z[0] = 1.0;
    for (int k = 1; k < m; ++k) z[k] = -l[k - 1] * z[k - 1];
    for (int k = 0; k < m; ++k) z[k] /= d[k];
    for (int k = m - 2; k >= 0; --k) z[k] -= l[k] * z[k + 1];
    return true;
}

} // namespace

RealVector tridiag_solve_e0(const TridiagonalMatrix& t) {
    if (t.size() == 0)
        throw SingularTridiagonal("empty tridiagonal matrix");
    RealVector z;
    if (!solve_block_e0(t, t.size(), z))
        throw SingularTridiagonal("pivot below 1e-14 * max|T|");
    return z;
}

RealVector fn_series(const TridiagonalMatrix& t, double seed_norm) {
    const int n = t.size();
    RealVector out(n);
    RealVector z;
    for (int m = 1; m <= n; ++m) {
        if (!solve_block_e0(t, m, z)) {
            std::ostringstream os;
            os << "leading block of order " << m << " is numerically singular";
            throw SingularTridiagonal(os.str());
        }
        out[m - 1] = seed_norm * seed_norm * z.squaredNorm();
    }
    return out;
}

} // namespace qfi
