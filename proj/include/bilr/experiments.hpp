#ifndef BILR_EXPERIMENTS_HPP
#define BILR_EXPERIMENTS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "bilr/recovery.hpp"

namespace bilr {

// Raised for file problems (missing config, unwritable output); the CLI maps
// it to exit code 2 while validation errors map to exit code 1.
struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Scheme { pbp, multistep };

std::string to_string(Scheme scheme);

// Declarative description of one Monte-Carlo sweep. Parsed strictly: unknown
// keys are rejected, m_grid must be strictly increasing, and p is required
// for multistep and rejected for pbp.
struct ExperimentConfig {
    Scheme scheme = Scheme::pbp;
    int n = 0;
    int s = 0;
    int r = 0;
    std::vector<int> m_grid;
    int p = 0;  // multistep only
    int trials_per_m = 0;
    std::uint64_t master_seed = 0;
    std::string output_path;           // optional; CLI --out overrides
    std::string error_mode = "both";   // "raw" | "unit-normalized" | "both"
    bool allow_heuristic_projection = false;
};

ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig load_config(const std::string& path);  // io_error if unreadable

// One trial's outcome. wall_time_ms is zero unless timing was requested, so
// that serialized output is a pure function of the config.
struct ExperimentRecord {
    int m = 0;
    int trial = 0;
    std::uint64_t seed = 0;
    double error_raw = 0.0;
    double error_unit = 0.0;
    double hamming_consistency_frac = 0.0;
    double wall_time_ms = 0.0;
    bool structure_ok = true;  // in-memory only, never serialized
};

struct RunOptions {
    bool timing = false;  // record wall clock per trial (breaks byte determinism)
};

// Runs the sweep: for every (m, trial) a child seed is derived as
// seed_mix({master_seed, m, trial}), the signal and ensemble are generated
// from it, and the configured scheme is applied. Trials run in parallel;
// records are returned sorted by (m, trial) and are bit-reproducible from the
// config alone.
std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& config,
                                             const RunOptions& options = {});

// CSV with the fixed header
// m,trial,seed,error_raw,error_unit,hamming_consistency_frac,wall_time_ms
// and floats at 17 significant digits, LF line endings.
std::string to_csv(const std::vector<ExperimentRecord>& records);
std::vector<ExperimentRecord> records_from_csv(const std::string& text);

std::string to_json_records(const std::vector<ExperimentRecord>& records);

struct DecayFit {
    double slope = 0.0;
    double intercept = 0.0;
};

// Least-squares fit of log(per-m statistic of the chosen error column)
// against log(m). statistic is "median" or "mean"; column is "error_unit" or
// "error_raw". Requires at least two distinct m values and positive
// statistics.
DecayFit fit_decay_slope(const std::vector<ExperimentRecord>& records,
                         const std::string& statistic = "median",
                         const std::string& column = "error_unit");

double median(std::vector<double> values);

void write_file(const std::string& path, const std::string& content);  // io_error on failure
std::string read_file(const std::string& path);                        // io_error on failure

}  // namespace bilr

#endif  // BILR_EXPERIMENTS_HPP
