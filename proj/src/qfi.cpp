#include "qfi/qfi.hpp"

#include <cmath>
#include <sstream>

namespace qfi {

double exact_qfi(const WeightedSpace& ctx, const HermitianOperator& h) {
    const LiouvilleVector h_eig = to_liouville(ctx, h);
    const int n = ctx.dim();
    double f = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            const double delta = ctx.rho.eigenvalues[a] - ctx.rho.eigenvalues[b];
            if (delta == 0.0) continue;
            f += delta * delta * std::norm(h_eig.matrix(a, b)) / ctx.weights(a, b);
        }
    return f;
}

LiouvilleVector exact_sld(const WeightedSpace& ctx, const HermitianOperator& h) {
    const LiouvilleVector h_eig = to_liouville(ctx, h);
    const int n = ctx.dim();
    ComplexMatrix l(n, n);
    const Complex i_unit(0.0, 1.0);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            const double delta = ctx.rho.eigenvalues[a] - ctx.rho.eigenvalues[b];
            l(a, b) = i_unit * delta * h_eig.matrix(a, b) / ctx.weights(a, b);
        }
    return LiouvilleVector{std::move(l), true};
}

RealVector krylov_coefficients(const KrylovResult& kres) {
    if (!kres.d0)
        throw IncompleteKrylov(
            "Lanczos run did not reach breakdown; coefficients from a truncated "
            "solve would be approximate");
    RealVector z = tridiag_solve_e0(kres.tridiag);
    return kres.seed_norm * z;
}

KrylovDistribution krylov_distribution(const RealVector& ell) {
    const double total = ell.squaredNorm();
    if (total <= 0.0)
        throw ZeroVector("krylov_distribution: sum of squared coefficients is zero");
    KrylovDistribution out;
    out.p = ell.array().square() / total;
    out.depth = 0.0;
    for (int k = 0; k < ell.size(); ++k) out.depth += k * out.p[k];
    return out;
}

RealVector coefficient_partial_sums(const RealVector& ell) {
    RealVector out(ell.size());
    double acc = 0.0;
    for (int k = 0; k < ell.size(); ++k) {
        acc += ell[k] * ell[k];
        out[k] = acc;
    }
    return out;
}

QfiReport error_report(const RealVector& f_series, const RealVector& ell, double f_exact) {
    if (!(f_exact > 0.0))
        throw ZeroVector("error_report: f_exact must be positive");
    if (f_series.size() != ell.size())
        throw DimensionMismatch("error_report: f_series and ell lengths differ");

    const KrylovDistribution dist = krylov_distribution(ell);
    const int n_levels = static_cast<int>(ell.size());

    // Backward tail sums keep deep-tail values accurate far below the
    // round-off floor of 1 - F^(n)/F.
    RealVector rel(n_levels);
    double tail = 0.0;
    for (int n = n_levels; n >= 1; --n) {
        rel[n - 1] = tail; // sum_{k >= n} p_k
        tail += dist.p[n - 1];
    }

    RealVector margin(n_levels);
    for (int n = 1; n <= n_levels; ++n) {
        const double from_series = 1.0 - f_series[n - 1] / f_exact;
        if (std::abs(from_series - rel[n - 1]) > 1e-9) {
            std::ostringstream os;
            os << "tail identity violated at n = " << n << ": 1 - F^(n)/F = " << from_series
               << " vs tail weight " << rel[n - 1];
            throw IdentityViolation(os.str());
        }
        margin[n - 1] = dist.depth / n - rel[n - 1];
        if (margin[n - 1] < -1e-10) {
            std::ostringstream os;
            os << "D/n bound violated at n = " << n << " with margin " << margin[n - 1];
            throw IdentityViolation(os.str());
        }
    }

    QfiReport report;
    report.f_exact = f_exact;
    report.f_series = f_series;
    report.ell = ell;
    report.p = dist.p;
    report.depth = dist.depth;
    report.rel_error = std::move(rel);
    report.bound_margin = std::move(margin);
    return report;
}

} // namespace qfi
