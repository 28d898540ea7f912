#include "qfi/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

namespace qfi {

namespace {

constexpr const char* kVersion = "1.0.0";

// Random-rho spectra at desk scales put lambda_min/lambda_max around
// 1e-3..1e-2; the hard-edge accumulation is still the operative regime
// there, so the ising runner classifies with a looser relative cut than
// the synthetic-study default.
constexpr double kIsingGapThreshold = 0.05;

std::string now_iso8601() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&t, &tm_utc);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

struct MemberAnalysis {
    MemberSummary summary;
    KrylovResult kres;
    RealVector fn_galerkin;
    RealVector distribution_p;
    SpectralMeasure measure;
    RegimeClassification classification = GappedRegime{};
};

MemberAnalysis analyze_member(const WeightedSpace& ctx, const HermitianOperator& h,
                              int max_n, double gap_threshold) {
    MemberAnalysis out;
    const Seed seed = unitary_seed(ctx, h);
    out.kres = run_lanczos(ctx, seed.op, max_n);
    out.summary.seed_norm = out.kres.seed_norm;
    out.summary.orthogonality_defect = out.kres.orthogonality_defect;
    out.summary.f_exact = exact_qfi(ctx, h);
    out.fn_galerkin = fn_series(out.kres.tridiag, out.kres.seed_norm);

    if (out.kres.d0) {
        out.summary.d0 = *out.kres.d0;
        const RealVector ell = krylov_coefficients(out.kres);
        const QfiReport rep = error_report(coefficient_partial_sums(ell), ell, out.summary.f_exact);
        out.summary.depth = rep.depth;
        out.summary.rel_error = rep.rel_error;
        out.distribution_p = rep.p;
    } else {
        // Truncated run: fall back to the Galerkin curve.
        out.summary.rel_error.resize(out.fn_galerkin.size());
        for (int n = 0; n < out.fn_galerkin.size(); ++n)
            out.summary.rel_error[n] = 1.0 - out.fn_galerkin[n] / out.summary.f_exact;
    }

    LiouvilleVector v0{seed.op.matrix / seed.norm, seed.op.hermitian};
    out.measure = spectral_measure(ctx, v0);
    ClassifyOptions copts;
    copts.gap_threshold = gap_threshold;
    out.classification = classify_measure(out.measure, copts);
    out.summary.hard_edge = std::holds_alternative<HardEdgeRegime>(out.classification);
    return out;
}

void aggregate_curves(ExperimentReport& report) {
    int n_max = 0;
    for (const auto& m : report.members)
        n_max = std::max(n_max, static_cast<int>(m.rel_error.size()));
    report.mean_rel_error.setZero(n_max);
    report.min_rel_error.setZero(n_max);
    report.max_rel_error.setZero(n_max);
    for (int n = 0; n < n_max; ++n) {
        double mn = 0.0, lo = 0.0, hi = 0.0;
        for (std::size_t i = 0; i < report.members.size(); ++i) {
            // Members past breakdown contribute exactly 0 (tail identity).
            const RealVector& rel = report.members[i].rel_error;
            const double v = n < rel.size() ? rel[n] : 0.0;
            mn += v;
            lo = i == 0 ? v : std::min(lo, v);
            hi = i == 0 ? v : std::max(hi, v);
        }
        report.mean_rel_error[n] = mn / static_cast<double>(report.members.size());
        report.min_rel_error[n] = lo;
        report.max_rel_error[n] = hi;
    }
}

} // namespace

ExperimentReport run_ising_experiment(const ExperimentConfig& cfg) {
    if (cfg.ensemble_size < 1) throw ConfigError("ensemble_size must be >= 1");
    if (cfg.max_n < 1) throw ConfigError("max_n must be >= 1");
    const auto t0 = std::chrono::steady_clock::now();

    const HermitianOperator h = ising_hamiltonian(cfg.ising, cfg.max_hilbert_dim);
    const int dim = h.dim();

    ExperimentReport report;
    report.config = cfg;
    for (int i = 0; i < cfg.ensemble_size; ++i) {
        const std::uint64_t member_seed = mix64(cfg.rng_seed ^ static_cast<std::uint64_t>(i));
        try {
            const WeightedSpace ctx = build_weighted_space(random_density_matrix(dim, member_seed));
            MemberAnalysis mem = analyze_member(ctx, h, cfg.max_n, kIsingGapThreshold);
            mem.summary.member_seed = member_seed;
            if (i == 0) {
                report.trace_a = mem.kres.tridiag.a;
                report.trace_b = mem.kres.tridiag.b;
                report.fn_galerkin = std::move(mem.fn_galerkin);
                report.distribution_p = std::move(mem.distribution_p);
                report.measure = std::move(mem.measure);
                report.classification = mem.classification;
            }
            report.members.push_back(std::move(mem.summary));
        } catch (const Error& e) {
            throw Error(e.kind(), "ensemble member " + std::to_string(i) + ": " + e.what());
        }
    }
    aggregate_curves(report);

    report.provenance.version = kVersion;
    report.provenance.rng_seed = cfg.rng_seed;
    report.provenance.timestamp = now_iso8601();
    report.provenance.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

ExperimentReport run_synthetic_experiment(const ExperimentConfig& cfg) {
    if (cfg.max_n < 1) throw ConfigError("max_n must be >= 1");
    const auto t0 = std::chrono::steady_clock::now();
    const SyntheticParams& sp = cfg.synthetic;

    ExperimentReport report;
    report.config = cfg;

    const bool gapped = sp.regime == SyntheticRegime::gapped;
    report.measure = gapped
        ? make_gapped_measure(sp.lambda_min, sp.lambda_max, sp.atoms)
        : make_hard_edge_measure(sp.alpha, sp.atoms, sp.lambda_max);

    const int n_max = std::min(cfg.max_n, report.measure.size());
    const CoefficientTail tail = coefficient_tail(report.measure, n_max);

    const StieltjesResult st = stieltjes_lanczos(report.measure, n_max);
    report.trace_a = st.tridiag.a;
    report.trace_b = st.tridiag.b;
    report.fn_galerkin = fn_series(st.tridiag, 1.0);
    const KrylovDistribution dist = krylov_distribution(tail.ell);
    report.distribution_p = dist.p;
    report.classification = classify_measure(report.measure);

    MemberSummary member;
    member.f_exact = tail.f;
    member.seed_norm = 1.0; // synthetic runs use the unit-seed convention
    member.d0 = -1;
    member.depth = dist.depth;
    member.rel_error = tail.rel_error;
    member.hard_edge = std::holds_alternative<HardEdgeRegime>(report.classification);
    report.members.push_back(std::move(member));
    aggregate_curves(report);

    const int n_lo = sp.fit_lo > 0 ? sp.fit_lo : (gapped ? 5 : 8);
    const int n_hi = sp.fit_hi > 0 ? sp.fit_hi : (gapped ? 25 : 40);
    DecaySummary decay;
    decay.fit = fit_decay(tail.rel_error, gapped ? DecayModel::exponential : DecayModel::algebraic,
                          std::max(1, n_lo), std::min(n_hi, n_max));
    if (gapped) {
        const double r = sp.lambda_min / sp.lambda_max;
        const double s = std::sqrt(1.0 - r * r);
        decay.reference = std::log((1.0 + s) / (1.0 - s));
    } else {
        decay.reference = 2.0 * sp.alpha + 1.0;
    }
    decay.regime_unresolved = decay.fit.residual > 0.5;
    report.decay = decay;

    report.provenance.version = kVersion;
    report.provenance.rng_seed = cfg.rng_seed;
    report.provenance.timestamp = now_iso8601();
    report.provenance.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

ExperimentReport run_custom_experiment(const ExperimentConfig& cfg) {
    if (cfg.max_n < 1) throw ConfigError("max_n must be >= 1");
    if (cfg.rho_file.empty() || cfg.hamiltonian_file.empty())
        throw ConfigError("custom experiment needs --rho and --hamiltonian files");
    const auto t0 = std::chrono::steady_clock::now();

    const DensityMatrix rho = validate_density_matrix(read_matrix_json(cfg.rho_file));
    const HermitianOperator h = make_hermitian_operator(read_matrix_json(cfg.hamiltonian_file));
    const WeightedSpace ctx = build_weighted_space(rho);

    ExperimentReport report;
    report.config = cfg;
    MemberAnalysis mem = analyze_member(ctx, h, cfg.max_n, ClassifyOptions{}.gap_threshold);
    report.trace_a = mem.kres.tridiag.a;
    report.trace_b = mem.kres.tridiag.b;
    report.fn_galerkin = std::move(mem.fn_galerkin);
    report.distribution_p = std::move(mem.distribution_p);
    report.measure = std::move(mem.measure);
    report.classification = mem.classification;
    report.members.push_back(std::move(mem.summary));
    aggregate_curves(report);

    report.provenance.version = kVersion;
    report.provenance.rng_seed = cfg.rng_seed;
    report.provenance.timestamp = now_iso8601();
    report.provenance.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

// ---------------------------------------------------------------------------
// serialization

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void dump_value(const nlohmann::ordered_json& j, std::string& out) {
    using value_t = nlohmann::ordered_json::value_t;
    switch (j.type()) {
        case value_t::object: {
            out += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ',';
                first = false;
                out += nlohmann::json(it.key()).dump();
                out += ':';
                dump_value(it.value(), out);
            }
            out += '}';
            break;
        }
        case value_t::array: {
            out += '[';
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out += ',';
                dump_value(j[i], out);
            }
            out += ']';
            break;
        }
        case value_t::number_float:
            out += fmt17(j.get<double>());
            break;
        default:
            out += j.dump();
            break;
    }
}

nlohmann::ordered_json to_json_array(const RealVector& v) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (int i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

RealVector from_json_array(const nlohmann::ordered_json& arr) {
    RealVector v(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) v[static_cast<int>(i)] = arr[i].get<double>();
    return v;
}

nlohmann::ordered_json config_to_json(const ExperimentConfig& c) {
    nlohmann::ordered_json j;
    switch (c.experiment) {
        case ExperimentKind::ising: j["experiment"] = "ising"; break;
        case ExperimentKind::synthetic: j["experiment"] = "synthetic"; break;
        case ExperimentKind::custom_seed: j["experiment"] = "custom-seed"; break;
    }
    j["ising"] = {{"length", c.ising.length},
                  {"J", c.ising.coupling_j},
                  {"g", c.ising.field_g},
                  {"h", c.ising.field_h}};
    j["synthetic"] = {{"regime", c.synthetic.regime == SyntheticRegime::gapped ? "gapped" : "hard-edge"},
                      {"alpha", c.synthetic.alpha},
                      {"lambda_min", c.synthetic.lambda_min},
                      {"lambda_max", c.synthetic.lambda_max},
                      {"atoms", c.synthetic.atoms},
                      {"fit_lo", c.synthetic.fit_lo},
                      {"fit_hi", c.synthetic.fit_hi}};
    j["rho_file"] = c.rho_file;
    j["hamiltonian_file"] = c.hamiltonian_file;
    j["ensemble_size"] = c.ensemble_size;
    j["rng_seed"] = c.rng_seed;
    j["max_n"] = c.max_n;
    j["output_dir"] = c.output_dir;
    j["formats"] = c.formats;
    j["max_hilbert_dim"] = c.max_hilbert_dim;
    return j;
}

ExperimentConfig config_from_json(const nlohmann::ordered_json& j) {
    ExperimentConfig c;
    const std::string kind = j.at("experiment").get<std::string>();
    if (kind == "ising") c.experiment = ExperimentKind::ising;
    else if (kind == "synthetic") c.experiment = ExperimentKind::synthetic;
    else if (kind == "custom-seed") c.experiment = ExperimentKind::custom_seed;
    else throw ConfigError("unknown experiment kind '" + kind + "'");
    c.ising.length = j.at("ising").at("length").get<int>();
    c.ising.coupling_j = j.at("ising").at("J").get<double>();
    c.ising.field_g = j.at("ising").at("g").get<double>();
    c.ising.field_h = j.at("ising").at("h").get<double>();
    const auto& s = j.at("synthetic");
    c.synthetic.regime = s.at("regime").get<std::string>() == "gapped" ? SyntheticRegime::gapped
                                                                       : SyntheticRegime::hard_edge;
    c.synthetic.alpha = s.at("alpha").get<double>();
    c.synthetic.lambda_min = s.at("lambda_min").get<double>();
    c.synthetic.lambda_max = s.at("lambda_max").get<double>();
    c.synthetic.atoms = s.at("atoms").get<int>();
    c.synthetic.fit_lo = s.at("fit_lo").get<int>();
    c.synthetic.fit_hi = s.at("fit_hi").get<int>();
    c.rho_file = j.at("rho_file").get<std::string>();
    c.hamiltonian_file = j.at("hamiltonian_file").get<std::string>();
    c.ensemble_size = j.at("ensemble_size").get<int>();
    c.rng_seed = j.at("rng_seed").get<std::uint64_t>();
    c.max_n = j.at("max_n").get<int>();
    c.output_dir = j.at("output_dir").get<std::string>();
    c.formats = j.at("formats").get<std::vector<std::string>>();
    c.max_hilbert_dim = j.at("max_hilbert_dim").get<int>();
    return c;
}

nlohmann::ordered_json classification_to_json(const RegimeClassification& c) {
    nlohmann::ordered_json j;
    if (const auto* g = std::get_if<GappedRegime>(&c)) {
        j["kind"] = "gapped";
        j["lambda_min"] = g->lambda_min;
        j["lambda_max"] = g->lambda_max;
        j["gamma"] = std::isinf(g->gamma) ? nlohmann::ordered_json("inf") : nlohmann::ordered_json(g->gamma);
    } else {
        const auto& he = std::get<HardEdgeRegime>(c);
        j["kind"] = "hard-edge";
        j["alpha_hat"] = he.alpha_hat;
        j["fit_window"] = {he.fit_window.first, he.fit_window.second};
        j["fit_residual"] = he.fit_residual;
    }
    return j;
}

RegimeClassification classification_from_json(const nlohmann::ordered_json& j) {
    if (j.at("kind").get<std::string>() == "gapped") {
        GappedRegime g;
        g.lambda_min = j.at("lambda_min").get<double>();
        g.lambda_max = j.at("lambda_max").get<double>();
        g.gamma = j.at("gamma").is_string() ? std::numeric_limits<double>::infinity()
                                            : j.at("gamma").get<double>();
        return g;
    }
    HardEdgeRegime he;
    he.alpha_hat = j.at("alpha_hat").get<double>();
    he.fit_window = {j.at("fit_window")[0].get<double>(), j.at("fit_window")[1].get<double>()};
    he.fit_residual = j.at("fit_residual").get<double>();
    return he;
}

} // namespace

std::string dump_json_17(const nlohmann::ordered_json& j) {
    std::string out;
    dump_value(j, out);
    return out;
}

nlohmann::ordered_json report_to_json(const ExperimentReport& report) {
    nlohmann::ordered_json j;
    j["schema"] = report.provenance.schema;
    j["config"] = config_to_json(report.config);

    nlohmann::ordered_json members = nlohmann::ordered_json::array();
    for (const auto& m : report.members) {
        nlohmann::ordered_json mj;
        mj["member_seed"] = m.member_seed;
        mj["f_exact"] = m.f_exact;
        mj["seed_norm"] = m.seed_norm;
        mj["d0"] = m.d0;
        mj["depth"] = m.depth;
        mj["orthogonality_defect"] = m.orthogonality_defect;
        mj["hard_edge"] = m.hard_edge;
        mj["rel_error"] = to_json_array(m.rel_error);
        members.push_back(std::move(mj));
    }
    j["members"] = std::move(members);
    j["mean_rel_error"] = to_json_array(report.mean_rel_error);
    j["min_rel_error"] = to_json_array(report.min_rel_error);
    j["max_rel_error"] = to_json_array(report.max_rel_error);
    j["lanczos"] = {{"a", to_json_array(report.trace_a)}, {"b", to_json_array(report.trace_b)}};
    j["fn_galerkin"] = to_json_array(report.fn_galerkin);
    j["distribution"] = to_json_array(report.distribution_p);
    j["measure"] = {{"lambda", to_json_array(report.measure.lambda)},
                    {"weight", to_json_array(report.measure.weight)}};
    j["classification"] = classification_to_json(report.classification);
    if (report.decay) {
        j["decay"] = {
            {"model", report.decay->fit.model == DecayModel::exponential ? "exponential" : "algebraic"},
            {"value", report.decay->fit.value},
            {"window", {report.decay->fit.n_lo, report.decay->fit.n_hi}},
            {"residual", report.decay->fit.residual},
            {"reference", report.decay->reference},
            {"regime_unresolved", report.decay->regime_unresolved},
        };
    }
    j["provenance"] = {{"version", report.provenance.version},
                       {"rng_seed", report.provenance.rng_seed},
                       {"timestamp", report.provenance.timestamp},
                       {"wall_time_ms", report.provenance.wall_time_ms}};
    return j;
}

ExperimentReport report_from_json(const nlohmann::ordered_json& j) {
    ExperimentReport r;
    r.provenance.schema = j.at("schema").get<std::string>();
    r.config = config_from_json(j.at("config"));
    for (const auto& mj : j.at("members")) {
        MemberSummary m;
        m.member_seed = mj.at("member_seed").get<std::uint64_t>();
        m.f_exact = mj.at("f_exact").get<double>();
        m.seed_norm = mj.at("seed_norm").get<double>();
        m.d0 = mj.at("d0").get<int>();
        m.depth = mj.at("depth").get<double>();
        m.orthogonality_defect = mj.at("orthogonality_defect").get<double>();
        m.hard_edge = mj.at("hard_edge").get<bool>();
        m.rel_error = from_json_array(mj.at("rel_error"));
        r.members.push_back(std::move(m));
    }
    r.mean_rel_error = from_json_array(j.at("mean_rel_error"));
    r.min_rel_error = from_json_array(j.at("min_rel_error"));
    r.max_rel_error = from_json_array(j.at("max_rel_error"));
    r.trace_a = from_json_array(j.at("lanczos").at("a"));
    r.trace_b = from_json_array(j.at("lanczos").at("b"));
    r.fn_galerkin = from_json_array(j.at("fn_galerkin"));
    r.distribution_p = from_json_array(j.at("distribution"));
    r.measure.lambda = from_json_array(j.at("measure").at("lambda"));
    r.measure.weight = from_json_array(j.at("measure").at("weight"));
    r.classification = classification_from_json(j.at("classification"));
    if (j.contains("decay")) {
        DecaySummary d;
        d.fit.model = j.at("decay").at("model").get<std::string>() == "exponential"
                          ? DecayModel::exponential
                          : DecayModel::algebraic;
        d.fit.value = j.at("decay").at("value").get<double>();
        d.fit.n_lo = j.at("decay").at("window")[0].get<int>();
        d.fit.n_hi = j.at("decay").at("window")[1].get<int>();
        d.fit.residual = j.at("decay").at("residual").get<double>();
        d.reference = j.at("decay").at("reference").get<double>();
        d.regime_unresolved = j.at("decay").at("regime_unresolved").get<bool>();
        r.decay = d;
    }
    r.provenance.version = j.at("provenance").at("version").get<std::string>();
    r.provenance.rng_seed = j.at("provenance").at("rng_seed").get<std::uint64_t>();
    r.provenance.timestamp = j.at("provenance").at("timestamp").get<std::string>();
    r.provenance.wall_time_ms = j.at("provenance").at("wall_time_ms").get<double>();
    return r;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path.string() + " for writing");
    f << content;
    if (!f) throw IoError("write failed for " + path.string());
}

} // namespace

void export_report(const ExperimentReport& report, const std::string& dir,
                   const std::vector<std::string>& formats) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory " + dir + ": " + ec.message());

    const bool want_json =
        std::find(formats.begin(), formats.end(), "json") != formats.end();
    const bool want_csv =
        std::find(formats.begin(), formats.end(), "csv") != formats.end();

    if (want_json)
        write_file(fs::path(dir) / "report.json", dump_json_17(report_to_json(report)) + "\n");

    if (!want_csv) return;

    std::string ec_csv = "n,mean_rel_error,min_rel_error,max_rel_error\n";
    for (int n = 0; n < report.mean_rel_error.size(); ++n) {
        ec_csv += std::to_string(n + 1) + ',' + fmt17(report.mean_rel_error[n]) + ',' +
                  fmt17(report.min_rel_error[n]) + ',' + fmt17(report.max_rel_error[n]) + '\n';
    }
    write_file(fs::path(dir) / "error_curve.csv", ec_csv);

    std::string lz = "k,a_k,b_k\n";
    for (int k = 0; k < report.trace_a.size(); ++k) {
        lz += std::to_string(k) + ',' + fmt17(report.trace_a[k]) + ',';
        if (k >= 1) lz += fmt17(report.trace_b[k - 1]);
        lz += '\n';
    }
    write_file(fs::path(dir) / "lanczos.csv", lz);

    std::string ms = "lambda,weight\n";
    for (int i = 0; i < report.measure.size(); ++i)
        ms += fmt17(report.measure.lambda[i]) + ',' + fmt17(report.measure.weight[i]) + '\n';
    write_file(fs::path(dir) / "measure.csv", ms);

    std::string ds = "k,p_k\n";
    for (int k = 0; k < report.distribution_p.size(); ++k)
        ds += std::to_string(k) + ',' + fmt17(report.distribution_p[k]) + '\n';
    write_file(fs::path(dir) / "distribution.csv", ds);
}

ComplexMatrix read_matrix_json(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open " + path);
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("invalid JSON in " + path + ": " + e.what());
    }
    const auto& re = j.at("re");
    const auto& im = j.at("im");
    if (re.size() != im.size()) throw ConfigError(path + ": re/im length mismatch");
    const int dim = j.contains("dim") ? j.at("dim").get<int>()
                                      : static_cast<int>(std::lround(std::sqrt(double(re.size()))));
    if (static_cast<std::size_t>(dim) * dim != re.size())
        throw ConfigError(path + ": matrix is not square");
    ComplexMatrix m(dim, dim);
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c)
            m(r, c) = Complex(re[r * dim + c].get<double>(), im[r * dim + c].get<double>());
    return m;
}

} // namespace qfi
