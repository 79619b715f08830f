#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "polyloc/dynamics.hpp"
#include "polyloc/hamiltonian.hpp"
#include "polyloc/msa.hpp"
#include "polyloc/params.hpp"

namespace polyloc {

enum class ExperimentKind { spectrum, sule, dynamics, msa_prob, goodbad, params_check };

std::string kind_name(ExperimentKind k);

struct DynamicsPlan {
    bool delta = true;
    Site site;          // delta location
    double theta = 2.0; // power-law exponent
    bool normalize = true;
    double q = 2.0;
    double s = 1.0;
    std::vector<double> times;
};

struct GoodbadPlan {
    int L = 4;
    std::vector<double> energies;
    std::vector<Site> centers;
};

struct MsaPlan {
    std::vector<int> L_list;
    long long n_samples = 100;
    EnergyGrid grid;
    bool grid_eta_auto = true;
};

struct SulePlan {
    double gamma = 2.0;
    double eps_prime = 1.0 / 3.0;
};

// Fully resolved run description (defaults materialized, preset expanded).
struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::spectrum;
    int d = 1;
    int radius = 8;
    OperatorSpec op;
    Params params;
    std::uint64_t seed_base = 0;
    int seed_count = 1;
    std::optional<std::string> output_dir;

    bool fit_decay = true;  // spectrum
    SulePlan sule;
    DynamicsPlan dynamics;
    MsaPlan msa;
    GoodbadPlan goodbad;

    nlohmann::json resolved_json() const;
};

// Strict parse: unknown keys anywhere -> ConfigError with the JSON path.
ExperimentConfig parse_experiment_config(const nlohmann::json& j);
ExperimentConfig load_experiment_config(const std::string& path);

std::uint64_t fnv1a64(const std::string& bytes);
std::string config_hash(const ExperimentConfig& cfg);

struct RunOptions {
    std::optional<std::uint64_t> seed_override;
    int jobs = 1;
    std::optional<std::string> out_dir_override;  // wins over config and environment
};

struct RunResult {
    std::string out_dir;
    std::vector<std::string> csv_files;  // relative names
    nlohmann::json summary;
};

// Executes the run, writes one CSV per result table plus summary.json.
// Identical config + seed produce byte-identical CSV output for any job
// count. Numeric failures carry the offending seed in the message.
RunResult run_experiment(const ExperimentConfig& cfg, const RunOptions& opt);

std::vector<std::string> preset_names();

}  // namespace polyloc
