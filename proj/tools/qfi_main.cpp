#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qfi/experiment.hpp"

namespace {

// Exit codes: 0 success, 2 config error, 3 numeric failure, 4 I/O.
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitIo = 4;

void apply_config_file(qfi::ExperimentConfig& cfg, const std::string& path) {
    std::ifstream f(path);
    if (!f) throw qfi::IoError("cannot open config file " + path);
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        throw qfi::ConfigError(std::string("invalid config JSON: ") + e.what());
    }
    // Config file values override flags.
    if (j.contains("experiment")) {
        const std::string k = j["experiment"].get<std::string>();
        if (k == "ising") cfg.experiment = qfi::ExperimentKind::ising;
        else if (k == "synthetic") cfg.experiment = qfi::ExperimentKind::synthetic;
        else if (k == "custom-seed" || k == "custom") cfg.experiment = qfi::ExperimentKind::custom_seed;
        else throw qfi::ConfigError("unknown experiment '" + k + "'");
    }
    if (j.contains("length")) cfg.ising.length = j["length"].get<int>();
    if (j.contains("J")) cfg.ising.coupling_j = j["J"].get<double>();
    if (j.contains("g")) cfg.ising.field_g = j["g"].get<double>();
    if (j.contains("h")) cfg.ising.field_h = j["h"].get<double>();
    if (j.contains("regime")) {
        const std::string r = j["regime"].get<std::string>();
        if (r == "gapped") cfg.synthetic.regime = qfi::SyntheticRegime::gapped;
        else if (r == "hard-edge") cfg.synthetic.regime = qfi::SyntheticRegime::hard_edge;
        else throw qfi::ConfigError("unknown regime '" + r + "'");
    }
    if (j.contains("alpha")) cfg.synthetic.alpha = j["alpha"].get<double>();
    if (j.contains("lmin")) cfg.synthetic.lambda_min = j["lmin"].get<double>();
    if (j.contains("lmax")) cfg.synthetic.lambda_max = j["lmax"].get<double>();
    if (j.contains("atoms")) cfg.synthetic.atoms = j["atoms"].get<int>();
    if (j.contains("fit_lo")) cfg.synthetic.fit_lo = j["fit_lo"].get<int>();
    if (j.contains("fit_hi")) cfg.synthetic.fit_hi = j["fit_hi"].get<int>();
    if (j.contains("rho")) cfg.rho_file = j["rho"].get<std::string>();
    if (j.contains("hamiltonian")) cfg.hamiltonian_file = j["hamiltonian"].get<std::string>();
    if (j.contains("ensemble")) cfg.ensemble_size = j["ensemble"].get<int>();
    if (j.contains("seed")) cfg.rng_seed = j["seed"].get<std::uint64_t>();
    if (j.contains("max_n")) cfg.max_n = j["max_n"].get<int>();
    if (j.contains("out")) cfg.output_dir = j["out"].get<std::string>();
    if (j.contains("formats")) cfg.formats = j["formats"].get<std::vector<std::string>>();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Krylov-subspace quantum Fisher information"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "print help"); // frees -h / --h for the longitudinal field

    qfi::ExperimentConfig cfg;
    std::string config_file;
    std::string formats_csv = "json,csv";
    std::string regime = "gapped";

    if (const char* cap = std::getenv("QFI_MAX_HILBERT_DIM"))
        cfg.max_hilbert_dim = std::atoi(cap);

    auto* ising = app.add_subcommand("ising", "random-rho ensemble over the mixed-field Ising chain");
    ising->set_help_flag("--help", "print help");
    ising->add_option("--length", cfg.ising.length, "chain length L")->required();
    ising->add_option("--J", cfg.ising.coupling_j, "ZZ coupling");
    ising->add_option("--g", cfg.ising.field_g, "transverse field");
    ising->add_option("--h", cfg.ising.field_h, "longitudinal field");
    ising->add_option("--ensemble", cfg.ensemble_size, "ensemble size");
    ising->add_option("--seed", cfg.rng_seed, "RNG seed");
    ising->add_option("--max-n", cfg.max_n, "maximum Krylov depth");
    ising->add_option("--out", cfg.output_dir, "output directory")->required();
    ising->add_option("--formats", formats_csv, "comma-separated subset of json,csv");
    ising->add_option("--config", config_file, "JSON config file; overrides flags");

    auto* synth = app.add_subcommand("synthetic", "synthetic spectral-measure regime study");
    synth->add_option("--regime", regime, "gapped | hard-edge")->required();
    synth->add_option("--alpha", cfg.synthetic.alpha, "hard-edge density exponent");
    synth->add_option("--lmin", cfg.synthetic.lambda_min, "gapped support lower edge");
    synth->add_option("--lmax", cfg.synthetic.lambda_max, "support upper edge");
    synth->add_option("--atoms", cfg.synthetic.atoms, "number of atoms");
    synth->add_option("--max-n", cfg.max_n, "maximum Krylov depth");
    synth->add_option("--fit-lo", cfg.synthetic.fit_lo, "decay-fit window start");
    synth->add_option("--fit-hi", cfg.synthetic.fit_hi, "decay-fit window end");
    synth->add_option("--out", cfg.output_dir, "output directory")->required();
    synth->add_option("--formats", formats_csv, "comma-separated subset of json,csv");
    synth->add_option("--config", config_file, "JSON config file; overrides flags");

    auto* custom = app.add_subcommand("custom", "single run on rho/H from JSON matrix files");
    custom->add_option("--rho", cfg.rho_file, "density matrix JSON file")->required();
    custom->add_option("--hamiltonian", cfg.hamiltonian_file, "Hamiltonian JSON file")->required();
    custom->add_option("--max-n", cfg.max_n, "maximum Krylov depth");
    custom->add_option("--seed", cfg.rng_seed, "RNG seed (provenance only)");
    custom->add_option("--out", cfg.output_dir, "output directory")->required();
    custom->add_option("--formats", formats_csv, "comma-separated subset of json,csv");
    custom->add_option("--config", config_file, "JSON config file; overrides flags");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    try {
        if (ising->parsed()) cfg.experiment = qfi::ExperimentKind::ising;
        if (synth->parsed()) {
            cfg.experiment = qfi::ExperimentKind::synthetic;
            if (regime == "gapped") cfg.synthetic.regime = qfi::SyntheticRegime::gapped;
            else if (regime == "hard-edge") cfg.synthetic.regime = qfi::SyntheticRegime::hard_edge;
            else throw qfi::ConfigError("unknown regime '" + regime + "'");
        }
        if (custom->parsed()) cfg.experiment = qfi::ExperimentKind::custom_seed;

        cfg.formats.clear();
        std::string tok;
        for (char c : formats_csv + ",") {
            if (c == ',') {
                if (!tok.empty()) cfg.formats.push_back(tok);
                tok.clear();
            } else {
                tok += c;
            }
        }
        for (const auto& f : cfg.formats)
            if (f != "json" && f != "csv") throw qfi::ConfigError("unknown format '" + f + "'");
        if (cfg.formats.empty()) throw qfi::ConfigError("no output formats selected");
        if (!config_file.empty()) apply_config_file(cfg, config_file);
        if (cfg.ensemble_size < 1) throw qfi::ConfigError("ensemble size must be >= 1");
        if (cfg.max_n < 1) throw qfi::ConfigError("max-n must be >= 1");

        qfi::ExperimentReport report;
        switch (cfg.experiment) {
            case qfi::ExperimentKind::ising: report = qfi::run_ising_experiment(cfg); break;
            case qfi::ExperimentKind::synthetic: report = qfi::run_synthetic_experiment(cfg); break;
            case qfi::ExperimentKind::custom_seed: report = qfi::run_custom_experiment(cfg); break;
        }
        qfi::export_report(report, cfg.output_dir, cfg.formats);

        std::cout << "wrote " << cfg.output_dir << " (";
        if (report.members.size() == 1)
            std::cout << "F = " << report.members[0].f_exact;
        else
            std::cout << report.members.size() << " members";
        std::cout << ", levels = " << report.mean_rel_error.size() << ")\n";
        return 0;
    } catch (const qfi::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const qfi::IoError& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return kExitIo;
    } catch (const qfi::Error& e) {
        std::cerr << "numeric failure [" << e.kind() << "]: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumeric;
    }
}
