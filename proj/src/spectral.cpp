#include "qfi/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <vector>

namespace qfi {

namespace {

constexpr double kAtomMergeRtol = 1e-12;
constexpr double kAtomDropTol = 1e-16;

SpectralMeasure measure_from_atoms(std::vector<std::pair<double, double>> atoms) {
    std::sort(atoms.begin(), atoms.end());
    std::vector<double> lam, mu;
    for (const auto& [l, w] : atoms) {
        if (!lam.empty() && l - lam.back() <= kAtomMergeRtol * l) {
            mu.back() += w;
        } else {
            lam.push_back(l);
            mu.push_back(w);
        }
    }
    double total = 0.0;
    std::vector<double> lam2, mu2;
    for (std::size_t j = 0; j < lam.size(); ++j) {
        if (mu[j] <= kAtomDropTol) continue;
        lam2.push_back(lam[j]);
        mu2.push_back(mu[j]);
        total += mu[j];
    }
    SpectralMeasure out;
    out.lambda.resize(static_cast<int>(lam2.size()));
    out.weight.resize(static_cast<int>(mu2.size()));
    for (std::size_t j = 0; j < lam2.size(); ++j) {
        out.lambda[static_cast<int>(j)] = lam2[j];
        out.weight[static_cast<int>(j)] = mu2[j] / total;
    }
    return out;
}

} // namespace

SpectralMeasure spectral_measure(const WeightedSpace& ctx, const LiouvilleVector& v0) {
    if (v0.dim() != ctx.dim())
        throw DimensionMismatch("spectral_measure: dimensions differ");
    const double nrm = weighted_norm(ctx, v0);
    if (std::abs(nrm - 1.0) > 1e-12) {
        std::ostringstream os;
        os << "spectral_measure: seed norm " << nrm << " is not 1 to 1e-12";
        throw NormalizationFailure(os.str());
    }

    const int n = ctx.dim();
    std::vector<std::pair<double, double>> atoms;
    atoms.reserve(n * n);
    double raw_total = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            const double wt = ctx.weights(a, b) * std::norm(v0.matrix(a, b));
            if (wt > 0.0) {
                atoms.emplace_back(ctx.weights(a, b), wt);
                raw_total += wt;
            }
        }
    if (std::abs(raw_total - 1.0) > 1e-8) {
        std::ostringstream os;
        os << "raw spectral mass " << raw_total << " deviates from 1 beyond 1e-8";
        throw NormalizationFailure(os.str());
    }
    return measure_from_atoms(std::move(atoms));
}

RealVector moments(const SpectralMeasure& m, int k_max) {
    RealVector out(k_max + 1);
    RealVector pw = RealVector::Ones(m.size());
    for (int k = 0; k <= k_max; ++k) {
        out[k] = (m.weight.array() * pw.array()).sum();
        pw = pw.cwiseProduct(m.lambda);
    }
    return out;
}

HankelMoments build_hankel(const RealVector& mu, int n) {
    if (mu.size() < 2 * n - 1)
        throw DimensionMismatch("build_hankel: need moments mu_0..mu_{2n-2}");
    HankelMoments h;
    h.mu = mu.head(2 * n - 1);
    h.m.resize(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) h.m(i, j) = mu[i + j];
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(h.m, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff(), hi = es.eigenvalues().maxCoeff();
    h.cond_estimate = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
    return h;
}

TridiagonalMatrix lanczos_from_moments(const RealVector& mu, int n, int n_hankel_max) {
    if (n < 1) throw DimensionMismatch("lanczos_from_moments: n must be >= 1");
    if (n > n_hankel_max) {
        std::ostringstream os;
        os << "n = " << n << " exceeds the Hankel conditioning cap " << n_hankel_max;
        throw HankelIllConditioned(os.str());
    }
    if (mu.size() < 2 * n)
        throw DimensionMismatch("lanczos_from_moments: need moments mu_0..mu_{2n-1}");

    // Partial Cholesky of the n x (n+1) Hankel block: rows 0..n-1 must have
    // positive pivots, column n is used only for the last a coefficient.
    // Hankel conditioning grows exponentially with n; extended precision in
    // the factorization is what makes the n <= 12 cap serviceable.
    using ext = long double;
    Eigen::Matrix<ext, Eigen::Dynamic, Eigen::Dynamic> r(n, n + 1);
    r.setZero();
    ext pivot_min = std::numeric_limits<ext>::infinity();
    ext pivot_max = 0.0L;
    for (int i = 0; i < n; ++i) {
        ext pivot = mu[2 * i];
        for (int k = 0; k < i; ++k) pivot -= r(k, i) * r(k, i);
        if (pivot <= 1e-13L * static_cast<ext>(mu[0])) {
            std::ostringstream os;
            os << "Hankel pivot " << static_cast<double>(pivot) << " at row " << i
               << " below 1e-13 mu_0 (pivot ratio so far "
               << static_cast<double>(pivot_max / std::max(pivot, ext(1e-300))) << "); moment route refused";
            throw HankelIllConditioned(os.str());
        }
        pivot_min = std::min(pivot_min, pivot);
        pivot_max = std::max(pivot_max, pivot);
        r(i, i) = std::sqrt(pivot);
        for (int j = i + 1; j <= n; ++j) {
            ext s = mu[i + j];
            for (int k = 0; k < i; ++k) s -= r(k, i) * r(k, j);
            r(i, j) = s / r(i, i);
        }
    }

    TridiagonalMatrix t;
    t.a.resize(n);
    t.b.resize(n - 1);
    for (int j = 0; j < n; ++j) {
        ext a_j = r(j, j + 1) / r(j, j);
        if (j > 0) {
            a_j -= r(j - 1, j) / r(j - 1, j - 1);
            t.b[j - 1] = static_cast<double>(r(j, j) / r(j - 1, j - 1));
        }
        t.a[j] = static_cast<double>(a_j);
    }
    return t;
}

QuadratureRule gauss_quadrature(const TridiagonalMatrix& t) {
    Eigen::SelfAdjointEigenSolver<RealMatrix> es;
    es.computeFromTridiagonal(t.a, t.b);
    QuadratureRule rule;
    rule.nodes = es.eigenvalues();
    rule.weights = es.eigenvectors().row(0).array().square();
    return rule;
}

double qfi_by_quadrature(const QuadratureRule& rule, double seed_norm) {
    double f = 0.0;
    for (int k = 0; k < rule.size(); ++k) {
        if (rule.nodes[k] < 1e-14) {
            std::ostringstream os;
            os << "quadrature node " << rule.nodes[k] << " touches the pole at 0";
            throw NodeAtZero(os.str());
        }
        f += rule.weights[k] / (rule.nodes[k] * rule.nodes[k]);
    }
    return seed_norm * seed_norm * f;
}

RegimeClassification classify_measure(const SpectralMeasure& m, const ClassifyOptions& opts) {
    if (m.size() == 0)
        throw InsufficientAtoms("classify_measure: empty measure");
    const double lam_min = m.lambda[0];
    const double lam_max = m.lambda[m.size() - 1];

    if (m.size() == 1)
        return GappedRegime{lam_min, lam_max, std::numeric_limits<double>::infinity()};

    if (lam_min >= opts.gap_threshold * lam_max) {
        const double r = lam_min / lam_max;
        const double s = std::sqrt(1.0 - r * r);
        const double gamma = std::log((1.0 + s) / (1.0 - s));
        return GappedRegime{lam_min, lam_max, gamma};
    }

    if (m.size() < 10)
        throw InsufficientAtoms("classify_measure: hard-edge fit needs at least 10 atoms");

    // Cumulative mass grows like lambda^(alpha+1) near a hard edge; fit its
    // log-log slope over the lowest fit_decades decades.
    const double lam_hi = lam_min * std::pow(10.0, opts.fit_decades);
    std::vector<double> xs, ys;
    double cum = 0.0;
    for (int j = 0; j < m.size(); ++j) {
        cum += m.weight[j];
        if (m.lambda[j] <= lam_hi) {
            xs.push_back(std::log(m.lambda[j]));
            ys.push_back(std::log(cum));
        }
    }
    // Degenerate window: fall back to the five lowest atoms.
    if (xs.size() < 5) {
        xs.clear();
        ys.clear();
        cum = 0.0;
        for (int j = 0; j < std::min(m.size(), 5); ++j) {
            cum += m.weight[j];
            xs.push_back(std::log(m.lambda[j]));
            ys.push_back(std::log(cum));
        }
    }

    const auto n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / n;
    double rss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double e = ys[i] - (slope * xs[i] + intercept);
        rss += e * e;
    }
    HardEdgeRegime he;
    he.alpha_hat = slope - 1.0;
    he.fit_window = {std::exp(xs.front()), std::exp(xs.back())};
    he.fit_residual = std::sqrt(rss / n);
    return he;
}

} // namespace qfi
