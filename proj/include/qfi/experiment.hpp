#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "qfi/models.hpp"
#include "qfi/qfi.hpp"
#include "qfi/spectral.hpp"
#include "qfi/synthetic.hpp"

namespace qfi {

enum class ExperimentKind { ising, synthetic, custom_seed };
enum class SyntheticRegime { gapped, hard_edge };

struct SyntheticParams {
    SyntheticRegime regime = SyntheticRegime::gapped;
    double alpha = 2.0;        // hard edge
    double lambda_min = 0.25;  // gapped
    double lambda_max = 1.0;
    int atoms = 500;
    int fit_lo = 0; ///< 0 = regime default (5 gapped, 8 hard edge)
    int fit_hi = 0; ///< 0 = regime default (25 gapped, 40 hard edge)
};

struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::ising;
    IsingParams ising;
    SyntheticParams synthetic;
    std::string rho_file;         // custom-seed
    std::string hamiltonian_file; // custom-seed
    int ensemble_size = 1;
    std::uint64_t rng_seed = 0;
    int max_n = 100;
    std::string output_dir = ".";
    std::vector<std::string> formats{"json", "csv"};
    int max_hilbert_dim = kDefaultMaxHilbertDim;
};

struct MemberSummary {
    std::uint64_t member_seed = 0;
    double f_exact = 0.0;
    double seed_norm = 0.0;
    int d0 = -1; ///< -1 when breakdown was not reached within max_n
    double depth = 0.0;
    double orthogonality_defect = 0.0;
    bool hard_edge = false;
    RealVector rel_error; ///< tail curve when d0 reached, Galerkin curve otherwise
};

struct Provenance {
    std::string schema = "krylov-qfi/1";
    std::string version;
    std::uint64_t rng_seed = 0;
    std::string timestamp;
    double wall_time_ms = 0.0;
};

struct DecaySummary {
    DecayFit fit;
    double reference = 0.0; ///< gamma closed form (gapped) or 2 alpha + 1 (hard edge)
    bool regime_unresolved = false;
};

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<MemberSummary> members;
    RealVector mean_rel_error;
    RealVector min_rel_error;
    RealVector max_rel_error;
    RealVector trace_a; ///< designated member (index 0)
    RealVector trace_b;
    RealVector fn_galerkin;
    RealVector distribution_p;
    SpectralMeasure measure;
    RegimeClassification classification = GappedRegime{};
    std::optional<DecaySummary> decay;
    Provenance provenance;
};

/// Random-rho ensemble over the Ising Hamiltonian of the config; member i
/// uses seed mix64(rng_seed ^ i). A failing member aborts the run with its
/// index attached.
ExperimentReport run_ising_experiment(const ExperimentConfig& cfg);

ExperimentReport run_synthetic_experiment(const ExperimentConfig& cfg);

/// Single run on rho / Hamiltonian read from JSON matrix files
/// ({"dim": N, "re": [...], "im": [...]}, row-major).
ExperimentReport run_custom_experiment(const ExperimentConfig& cfg);

/// Write report.json / error_curve.csv / lanczos.csv / measure.csv /
/// distribution.csv into `dir` (json and csv selectable via formats).
/// All floats carry 17 significant digits. Throws IoError.
void export_report(const ExperimentReport& report, const std::string& dir,
                   const std::vector<std::string>& formats);

nlohmann::ordered_json report_to_json(const ExperimentReport& report);
ExperimentReport report_from_json(const nlohmann::ordered_json& j);

/// JSON text with every float rendered at 17 significant digits.
std::string dump_json_17(const nlohmann::ordered_json& j);

/// Read a complex matrix from the CLI JSON matrix format.
ComplexMatrix read_matrix_json(const std::string& path);

} // namespace qfi
