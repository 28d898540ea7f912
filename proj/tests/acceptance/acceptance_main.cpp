// Acceptance suite: runs every criterion at its stated tolerance and prints
// one pass/fail line each. Exit code is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "qfi/experiment.hpp"

using namespace qfi;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& details) {
    std::printf("[%s] criterion %2d: %s\n", pass ? "PASS" : "FAIL", criterion, details.c_str());
    if (!pass) ++g_failures;
}

void supplementary(bool pass, const std::string& details) {
    std::printf("[%s] supplementary: %s\n", pass ? "PASS" : "FAIL", details.c_str());
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ComplexMatrix gue_hamiltonian(int n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = Complex(g(gen), g(gen));
    ComplexMatrix h = 0.5 * (m + m.adjoint());
    return h / h.norm(); // Frobenius normalization keeps F = O(1)
}

struct SuiteRun {
    double f_exact;
    double f_sld;
    double f_measure;
    double f_krylov;
    RealVector fn;          // Galerkin series
    RealVector partial;     // coefficient partial sums
    RealVector rel;         // tail curve
    RealVector margin;      // D/n - rel
    double identity_worst;  // |(1 - partial/F) - tail|
};

SuiteRun run_member(int n, std::uint64_t seed) {
    const WeightedSpace ctx = build_weighted_space(random_density_matrix(n, mix64(seed)));
    const HermitianOperator h{gue_hamiltonian(n, mix64(seed + 0x9e37))};
    const Seed s = unitary_seed(ctx, h);
    const KrylovResult kres = run_lanczos(ctx, s.op, n * n + 5);
    if (!kres.d0) throw IncompleteKrylov("suite member failed to reach breakdown");

    SuiteRun r;
    r.f_exact = exact_qfi(ctx, h);
    const LiouvilleVector l = exact_sld(ctx, h);
    r.f_sld = inner_product(ctx, l, l).real();
    const LiouvilleVector v0{s.op.matrix / s.norm, true};
    const SpectralMeasure mu = spectral_measure(ctx, v0);
    r.f_measure = s.norm * s.norm * (mu.weight.array() / mu.lambda.array().square()).sum();
    r.fn = fn_series(kres.tridiag, kres.seed_norm);
    r.f_krylov = r.fn[r.fn.size() - 1];

    const RealVector ell = krylov_coefficients(kres);
    r.partial = coefficient_partial_sums(ell);
    const QfiReport rep = error_report(r.partial, ell, r.f_exact);
    r.rel = rep.rel_error;
    r.margin = rep.bound_margin;
    r.identity_worst = 0.0;
    for (int k = 0; k < r.partial.size(); ++k)
        r.identity_worst = std::max(
            r.identity_worst, std::abs((1.0 - r.partial[k] / r.f_exact) - r.rel[k]));
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(f), {});
}

} // namespace

int main() {
    // ---- criteria 1-4 share one random-(rho,H) suite --------------------
    const auto t_suite = std::chrono::steady_clock::now();
    std::vector<SuiteRun> suite;
    for (int n : {2, 4, 8})
        for (int i = 0; i < 50; ++i)
            suite.push_back(run_member(n, 1000 * n + i));
    const double suite_time = seconds_since(t_suite);

    {
        double worst = 0.0;
        for (const auto& r : suite)
            worst = std::max(worst, std::abs(r.f_krylov - r.f_exact) / r.f_exact);
        const bool pass = worst <= 1e-9 && suite_time < 5.0;
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "oracle equivalence F^(d0) vs closed form: worst rel %.2e (tol 1e-9), "
                      "%zu runs in %.2f s (< 5 s)",
                      worst, suite.size(), suite_time);
        report(1, pass, buf);
    }
    {
        double worst = 0.0;
        for (const auto& r : suite) {
            worst = std::max(worst, std::abs(r.f_sld - r.f_exact) / r.f_exact);
            worst = std::max(worst, std::abs(r.f_measure - r.f_exact) / r.f_exact);
        }
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "triangle identity exact = <L,L> = seed^2 int 1/lambda^2: worst rel %.2e "
                      "(tol 1e-9)",
                      worst);
        report(2, worst <= 1e-9, buf);
    }
    {
        double worst_step = 0.0, worst_over = -1.0;
        for (const auto& r : suite) {
            for (int k = 0; k + 1 < r.fn.size(); ++k)
                worst_step = std::min(worst_step, r.fn[k + 1] - r.fn[k]);
            for (int k = 0; k < r.fn.size(); ++k)
                worst_over = std::max(worst_over, r.fn[k] - r.f_exact);
            for (int k = 0; k < r.partial.size(); ++k)
                worst_over = std::max(worst_over, r.partial[k] - r.f_exact);
        }
        const bool pass = worst_step >= -1e-12 && worst_over <= 1e-12;
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "monotone lower bounds: worst step %.2e (>= -1e-12), worst overshoot %.2e "
                      "(<= 1e-12)",
                      worst_step, worst_over);
        report(3, pass, buf);
    }
    {
        double worst_id = 0.0, worst_margin = 0.0;
        for (const auto& r : suite) {
            worst_id = std::max(worst_id, r.identity_worst);
            worst_margin = std::min(worst_margin, r.margin.minCoeff());
        }
        const bool pass = worst_id <= 1e-9 && worst_margin >= -1e-10;
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "tail identity and D/n bound: worst identity dev %.2e (tol 1e-9), worst "
                      "margin %.2e (>= -1e-10)",
                      worst_id, worst_margin);
        report(4, pass, buf);
    }

    // ---- criterion 5: route equivalence at N = 4 ------------------------
    {
        // The moment route is a conditioned cross-check: compare it at the
        // largest depth whose Hankel condition estimate still supports 1e-7
        // in doubles (~1e9); deeper depths are the route's designed refusal
        // territory, not a disagreement.
        double worst_quad = 0.0, worst_hankel = 0.0;
        int hankel_depth_min = 99;
        for (int i = 0; i < 10; ++i) {
            const WeightedSpace ctx = build_weighted_space(random_density_matrix(4, mix64(7000 + i)));
            const HermitianOperator h{gue_hamiltonian(4, mix64(7100 + i))};
            const Seed s = unitary_seed(ctx, h);
            const KrylovResult kres = run_lanczos(ctx, s.op, 20);
            const RealVector fn = fn_series(kres.tridiag, kres.seed_norm);
            const int n_cap = std::min<int>(8, kres.tridiag.size());
            for (int n = 1; n <= n_cap; ++n) {
                TridiagonalMatrix tn;
                tn.a = kres.tridiag.a.head(n);
                tn.b = kres.tridiag.b.head(n - 1);
                const double via_quad = qfi_by_quadrature(gauss_quadrature(tn), kres.seed_norm);
                worst_quad = std::max(worst_quad, std::abs(via_quad - fn[n - 1]) / fn[n - 1]);
            }
            const LiouvilleVector v0{s.op.matrix / s.norm, true};
            const SpectralMeasure mu = spectral_measure(ctx, v0);
            const RealVector mom = moments(mu, 2 * n_cap - 1);
            int n_h = n_cap;
            while (n_h > 1 && build_hankel(mom, n_h).cond_estimate > 1e9) --n_h;
            hankel_depth_min = std::min(hankel_depth_min, n_h);
            const TridiagonalMatrix tm = lanczos_from_moments(mom, n_h);
            for (int k = 0; k < n_h; ++k)
                worst_hankel = std::max(worst_hankel, std::abs(tm.a[k] - kres.tridiag.a[k]));
            for (int k = 0; k + 1 < n_h; ++k)
                worst_hankel = std::max(worst_hankel, std::abs(tm.b[k] - kres.tridiag.b[k]));
        }
        const bool pass = worst_quad <= 1e-10 && worst_hankel <= 1e-7 && hankel_depth_min >= 3;
        char buf[200];
        std::snprintf(buf, sizeof buf,
                      "route equivalence: quadrature dev %.2e (tol 1e-10), Hankel-Cholesky dev "
                      "%.2e (tol 1e-7, depth >= %d)",
                      worst_quad, worst_hankel, hankel_depth_min);
        report(5, pass, buf);
    }

    // ---- criterion 6: gapped regime --------------------------------------
    {
        const auto t0 = std::chrono::steady_clock::now();
        const SpectralMeasure m = make_gapped_measure(0.25, 0.75, 500);
        const CoefficientTail tail = coefficient_tail(m, 45);
        const DecayFit fit = fit_decay(tail.rel_error, DecayModel::exponential, 5, 25);
        const double r = 1.0 / 3.0;
        const double s = std::sqrt(1.0 - r * r);
        const double gamma_ref = std::log((1.0 + s) / (1.0 - s));
        const double elapsed = seconds_since(t0);
        const bool pass =
            std::abs(fit.value - 2.0 * gamma_ref) <= 0.2 * (2.0 * gamma_ref) && elapsed < 10.0;
        char buf[200];
        std::snprintf(buf, sizeof buf,
                      "gapped regime: fitted rate %.4f vs 2*gamma = %.4f (tol 20%%), %.2f s "
                      "(< 10 s)",
                      fit.value, 2.0 * gamma_ref, elapsed);
        report(6, pass, buf);

        const double classical = gapped_error_rate(r);
        char buf2[200];
        std::snprintf(buf2, sizeof buf2,
                      "gapped fit %.4f matches the classical optimal rate 2*ln[(1+sqrt(r))/"
                      "(1-sqrt(r))] = %.4f within 20%%",
                      fit.value, classical);
        supplementary(std::abs(fit.value - classical) <= 0.2 * classical, buf2);
    }

    // ---- criterion 7: hard-edge regime ------------------------------------
    {
        const auto t0 = std::chrono::steady_clock::now();
        const SpectralMeasure m = make_hard_edge_measure(2.0, 2000, 1.0);
        const CoefficientTail tail = coefficient_tail(m, 60);
        const DecayFit fit = fit_decay(tail.rel_error, DecayModel::algebraic, 8, 40);
        const double elapsed = seconds_since(t0);
        const bool pass = std::abs(fit.value - 5.0) <= 0.15 * 5.0 && elapsed < 30.0;
        char buf[200];
        std::snprintf(buf, sizeof buf,
                      "hard-edge regime: fitted exponent %.4f vs 2*alpha+1 = 5 (tol 15%%), "
                      "%.2f s (< 30 s)",
                      fit.value, elapsed);
        report(7, pass, buf);

        char buf2[200];
        std::snprintf(buf2, sizeof buf2,
                      "hard-edge fit %.4f matches the singular-integrand law 2*(alpha-1) = 2 "
                      "within 15%%",
                      fit.value);
        supplementary(std::abs(fit.value - 2.0) <= 0.15 * 2.0, buf2);
    }

    // ---- criterion 8: Ising desk-scale reproduction -----------------------
    {
        const auto t0 = std::chrono::steady_clock::now();
        ExperimentConfig cfg;
        cfg.experiment = ExperimentKind::ising;
        cfg.ising = {4, 1.0, -1.05, 0.5};
        cfg.ensemble_size = 20;
        cfg.rng_seed = 20250811;
        cfg.max_n = 150;
        const ExperimentReport rep = run_ising_experiment(cfg);

        bool monotone = true;
        for (int n = 1; n < rep.mean_rel_error.size(); ++n)
            monotone = monotone && rep.mean_rel_error[n] <= rep.mean_rel_error[n - 1] + 1e-12;

        bool d0_ok = true;
        int hard_edge_count = 0;
        for (const auto& mem : rep.members) {
            d0_ok = d0_ok && mem.d0 >= 1 && mem.d0 <= 120;
            hard_edge_count += mem.hard_edge ? 1 : 0;
        }

        // Fig. 1 qualitative claim, checked member by member.
        bool ab_ok = true;
        const HermitianOperator h = ising_hamiltonian(cfg.ising);
        for (int i = 0; i < cfg.ensemble_size; ++i) {
            const WeightedSpace ctx = build_weighted_space(
                random_density_matrix(16, mix64(cfg.rng_seed ^ static_cast<std::uint64_t>(i))));
            const Seed s = unitary_seed(ctx, h);
            const KrylovResult kres = run_lanczos(ctx, s.op, cfg.max_n);
            ab_ok = ab_ok && kres.tridiag.a.mean() > kres.tridiag.b.mean();
        }
        const double elapsed = seconds_since(t0);
        const bool pass = monotone && d0_ok && ab_ok && hard_edge_count >= 18 && elapsed < 120.0;
        char buf[220];
        std::snprintf(buf, sizeof buf,
                      "Ising L=4 ensemble: monotone=%d, d0<=120 all=%d, mean a > mean b all=%d, "
                      "hard-edge %d/20 (>= 18), %.1f s (< 2 min)",
                      monotone, d0_ok, ab_ok, hard_edge_count, elapsed);
        report(8, pass, buf);

        if (std::getenv("QFI_RUN_EXTENDED")) {
            const HermitianOperator h5 = ising_hamiltonian({5, 1.0, -1.05, 0.5});
            const WeightedSpace ctx = build_weighted_space(random_density_matrix(32, mix64(1)));
            const Seed s = unitary_seed(ctx, h5);
            const KrylovResult kres = run_lanczos(ctx, s.op, 520);
            std::printf("[info] extended L=5 run: measured d0 = %d (bound 496 = 32*31/2; "
                        "measured, not asserted)\n",
                        kres.d0 ? *kres.d0 : -1);
        }
    }

    // ---- criterion 9: Kraus-seed consistency -------------------------------
    {
        ComplexMatrix sx(2, 2), sz(2, 2);
        sx << 0, 1, 1, 0;
        sz << 1, 0, 0, -1;
        const ComplexMatrix rho0m = 0.5 * (ComplexMatrix::Identity(2, 2) + 0.8 * sx);
        const DensityMatrix rho0 = validate_density_matrix(rho0m);
        const double theta = 0.3, delta = 1e-6;
        const std::vector<ComplexMatrix> kraus{std::sqrt(1 - theta) * ComplexMatrix::Identity(2, 2),
                                               std::sqrt(theta) * sz};
        const std::vector<ComplexMatrix> dkraus{
            -0.5 / std::sqrt(1 - theta) * ComplexMatrix::Identity(2, 2),
            0.5 / std::sqrt(theta) * sz};
        const KrausSeed ks = kraus_seed(rho0, kraus, dkraus);
        auto channel = [&](double th) {
            return ComplexMatrix((1 - th) * rho0m + th * sz * rho0m * sz);
        };
        const ComplexMatrix fd = (channel(theta + delta) - channel(theta - delta)) / (2 * delta);
        const ComplexMatrix back =
            ks.rho_theta.eigenvectors * ks.op.matrix * ks.rho_theta.eigenvectors.adjoint();
        const double fd_dev = (back - fd).cwiseAbs().maxCoeff();

        const ComplexMatrix h = gue_hamiltonian(2, 99);
        const DensityMatrix rho1 = random_density_matrix(2, 991);
        const KrausSeed unitary_ks = kraus_seed(rho1, {ComplexMatrix::Identity(2, 2)},
                                                {Complex(0, -1) * h});
        const WeightedSpace ctx1 = build_weighted_space(rho1);
        const Seed direct = unitary_seed(ctx1, HermitianOperator{h});
        const ComplexMatrix back_k = unitary_ks.rho_theta.eigenvectors * unitary_ks.op.matrix *
                                     unitary_ks.rho_theta.eigenvectors.adjoint();
        const ComplexMatrix back_u =
            ctx1.rho.eigenvectors * direct.op.matrix * ctx1.rho.eigenvectors.adjoint();
        const double unitary_dev = (back_k - back_u).cwiseAbs().maxCoeff();

        const bool pass = fd_dev <= 1e-8 && unitary_dev <= 1e-12;
        char buf[180];
        std::snprintf(buf, sizeof buf,
                      "Kraus seeds: dephasing vs finite differences %.2e (tol 1e-8), unitary "
                      "reduction %.2e (tol 1e-12)",
                      fd_dev, unitary_dev);
        report(9, pass, buf);
    }

    // ---- criterion 10: determinism -----------------------------------------
    {
        ExperimentConfig cfg;
        cfg.experiment = ExperimentKind::ising;
        cfg.ising = {3, 1.0, -1.05, 0.5};
        cfg.ensemble_size = 5;
        cfg.rng_seed = 777;
        cfg.max_n = 40;
        const fs::path d1 = fs::temp_directory_path() / "qfi_acc_det_1";
        const fs::path d2 = fs::temp_directory_path() / "qfi_acc_det_2";
        fs::remove_all(d1);
        fs::remove_all(d2);
        export_report(run_ising_experiment(cfg), d1.string(), {"csv"});
        export_report(run_ising_experiment(cfg), d2.string(), {"csv"});
        bool identical = true;
        for (const char* name :
             {"error_curve.csv", "lanczos.csv", "measure.csv", "distribution.csv"})
            identical = identical && slurp(d1 / name) == slurp(d2 / name);
        fs::remove_all(d1);
        fs::remove_all(d2);
        report(10, identical, "determinism: repeated runs give byte-identical CSV outputs");
    }

    std::printf("%d/10 criteria passed\n", 10 - g_failures);
    return g_failures;
}
