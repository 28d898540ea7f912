#include "qfi/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace qfi {

SpectralMeasure make_hard_edge_measure(double alpha, int atoms, double lambda_max,
                                       double bottom_cutoff) {
    if (alpha <= -1.0) {
        std::ostringstream os;
        os << "alpha = " << alpha << " must exceed -1 for a normalizable density";
        throw BadAlpha(os.str());
    }
    if (atoms < 2 || lambda_max <= 0.0 || !(bottom_cutoff > 0.0) || !(bottom_cutoff < 1.0))
        throw BadInterval("make_hard_edge_measure: need atoms >= 2, lambda_max > 0, cutoff in (0,1)");

    const int m = atoms;
    const double ratio = std::pow(bottom_cutoff, 1.0 / (m - 1));
    RealVector lam(m);
    for (int j = 0; j < m; ++j) lam[j] = lambda_max * std::pow(ratio, m - 1 - j);

    // Geometric-midpoint cell edges; the first cell extends to 0 so the
    // cumulative matches the continuum lambda^{alpha+1} law at every atom.
    RealVector edges(m + 1);
    edges[0] = 0.0;
    for (int j = 1; j < m; ++j) edges[j] = std::sqrt(lam[j - 1] * lam[j]);
    edges[m] = lambda_max;

    RealVector w(m);
    double total = 0.0;
    for (int j = 0; j < m; ++j) {
        w[j] = std::pow(edges[j + 1], alpha + 1.0) - std::pow(edges[j], alpha + 1.0);
        total += w[j];
    }
    SpectralMeasure out;
    out.lambda = lam;
    out.weight = w / total;
    return out;
}

SpectralMeasure make_gapped_measure(double lambda_min, double lambda_max, int atoms) {
    if (!(lambda_min > 0.0) || !(lambda_min < lambda_max))
        throw BadInterval("make_gapped_measure: need 0 < lambda_min < lambda_max");
    if (atoms < 2)
        throw BadInterval("make_gapped_measure: need at least 2 atoms");

    const int m = atoms;
    const double mid = 0.5 * (lambda_max + lambda_min);
    const double half = 0.5 * (lambda_max - lambda_min);
    SpectralMeasure out;
    out.lambda.resize(m);
    out.weight.resize(m);
    // Chebyshev-Lobatto nodes, theta-uniform weights (discretized arcsine).
    for (int j = 0; j < m; ++j) {
        const double theta = std::numbers::pi * (m - 1 - j) / (m - 1);
        out.lambda[j] = mid + half * std::cos(theta);
        out.weight[j] = (j == 0 || j == m - 1) ? 0.5 : 1.0;
    }
    out.lambda[0] = lambda_min;
    out.lambda[m - 1] = lambda_max;
    out.weight /= out.weight.sum();
    return out;
}

StieltjesResult stieltjes_lanczos(const SpectralMeasure& m, int n_max) {
    const int atoms = m.size();
    if (n_max < 1 || n_max > atoms) {
        std::ostringstream os;
        os << "requested " << n_max << " levels from a measure with " << atoms << " atoms";
        throw Breakdown(os.str());
    }
    const double lam_scale = m.lambda[atoms - 1];

    RealMatrix p(n_max, atoms);
    RealVector a(n_max), b(std::max(n_max - 1, 0));
    const double mass = m.weight.sum();
    p.row(0).setConstant(1.0 / std::sqrt(mass));

    auto wdot = [&m](const Eigen::RowVectorXd& x, const Eigen::RowVectorXd& y) {
        return (m.weight.transpose().array() * x.array() * y.array()).sum();
    };

    Eigen::RowVectorXd work(atoms);
    for (int k = 0; k < n_max; ++k) {
        work = m.lambda.transpose().array() * p.row(k).array();
        a[k] = wdot(p.row(k), work);
        work -= a[k] * p.row(k);
        if (k > 0) work -= b[k - 1] * p.row(k - 1);
        for (int j = 0; j <= k; ++j) work -= wdot(p.row(j), work) * p.row(j);
        if (k + 1 == n_max) break;
        const double nb = std::sqrt(wdot(work, work));
        if (nb < 1e-12 * lam_scale) {
            std::ostringstream os;
            os << "recurrence exhausted the measure at level " << k + 1
               << " (fewer effective atoms than requested levels)";
            throw Breakdown(os.str());
        }
        b[k] = nb;
        p.row(k + 1) = work / nb;
    }

    StieltjesResult res;
    res.tridiag.a = std::move(a);
    res.tridiag.b = std::move(b);
    res.poly_values = std::move(p);
    return res;
}

CoefficientTail coefficient_tail(const SpectralMeasure& m, int n_max) {
    StieltjesResult st = stieltjes_lanczos(m, n_max);

    CoefficientTail out;
    out.ell.resize(n_max);
    Eigen::RowVectorXd inv_lam = m.lambda.transpose().cwiseInverse();
    for (int k = 0; k < n_max; ++k)
        out.ell[k] = (m.weight.transpose().array() * st.poly_values.row(k).array() * inv_lam.array()).sum();
    out.f = (m.weight.array() / m.lambda.array().square()).sum();

    // Remainder beyond level n_max, evaluated as the weighted residual of
    // the projection; keeps tail values accurate below 1 - ratio round-off.
    Eigen::RowVectorXd resid = inv_lam;
    for (int k = 0; k < n_max; ++k) resid -= out.ell[k] * st.poly_values.row(k);
    double tail = (m.weight.transpose().array() * resid.array().square()).sum();

    out.rel_error.resize(n_max);
    for (int n = n_max; n >= 1; --n) {
        out.rel_error[n - 1] = tail / out.f;
        tail += out.ell[n - 1] * out.ell[n - 1];
    }
    return out;
}

DecayFit fit_decay(const RealVector& series, DecayModel model, int n_lo, int n_hi) {
    if (n_lo < 1 || n_hi > series.size() || n_hi - n_lo + 1 < 5) {
        std::ostringstream os;
        os << "fit window [" << n_lo << ", " << n_hi << "] too short for a series of length "
           << series.size() << " (need at least 5 levels)";
        throw WindowTooShort(os.str());
    }
    for (int n = n_lo; n <= n_hi; ++n)
        if (!(series[n - 1] > 0.0)) {
            std::ostringstream os;
            os << "series value " << series[n - 1] << " at level " << n << " is not positive";
            throw NonPositiveSeries(os.str());
        }

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int count = n_hi - n_lo + 1;
    for (int n = n_lo; n <= n_hi; ++n) {
        const double x = model == DecayModel::exponential ? n : std::log(n);
        const double y = std::log(series[n - 1]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / count;
    double rss = 0.0;
    for (int n = n_lo; n <= n_hi; ++n) {
        const double x = model == DecayModel::exponential ? n : std::log(n);
        const double e = std::log(series[n - 1]) - (slope * x + intercept);
        rss += e * e;
    }

    DecayFit fit;
    fit.model = model;
    fit.value = -slope;
    fit.n_lo = n_lo;
    fit.n_hi = n_hi;
    fit.residual = std::sqrt(rss / count);
    return fit;
}

double gapped_error_rate(double ratio) {
    const double s = std::sqrt(ratio);
    return 2.0 * std::log((1.0 + s) / (1.0 - s));
}

} // namespace qfi
