#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "satoff/agents/evaluate.hpp"
#include "satoff/agents/policy.hpp"
#include "satoff/agents/training.hpp"
#include "satoff/config.hpp"

namespace satoff::harness {

inline constexpr int kSchemaVersion = 1;
inline constexpr std::string_view kCsvHeader =
    "experiment,sweep_value,policy,seed,episode,cost,dropped,breached,energy_j";

/// Results file does not have the expected layout.
class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A summary selection matched no rows.
class NoDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class SweepVariable { JobRate, NetworkCondition, RiskLevel, DataSize, Formation };

std::string_view to_string(SweepVariable v);
SweepVariable sweep_variable_from_string(std::string_view name);

/// Returns `base` with the swept parameter set to `value` (a number, or a
/// formation name). Throws ConfigError on values the variable cannot take.
ScenarioConfig apply_sweep(const ScenarioConfig& base, SweepVariable v, const std::string& value);

struct ExperimentSpec {
    std::string experiment = "experiment";
    SweepVariable sweep_variable = SweepVariable::JobRate;
    std::vector<std::string> sweep_values;  // canonical text, as written to the CSV
    std::vector<agents::PolicyKind> policies;
    int n_seeds = 10;
    std::uint64_t base_seed = 1;
    ScenarioConfig scenario;
    /// Train learned policies separately for every sweep value instead of
    /// loading the checkpoints trained on the base scenario.
    bool retrain = false;
    agents::TrainingConfig training;
    std::uint64_t training_seed = 7;

    /// Evaluation seeds, shared by every sweep value and policy.
    std::vector<std::uint64_t> seeds() const;
    void validate() const;

    nlohmann::json to_json() const;
    static ExperimentSpec from_json(const nlohmann::json& j);
    static ExperimentSpec load(const std::filesystem::path& path);
};

/// Named sweeps: job_rate, network, risk, data_size, formation_low, formation_high.
ExperimentSpec preset(std::string_view name);
std::vector<std::string> preset_names();

struct ResultRow {
    std::string experiment;
    std::string sweep_value;
    agents::PolicyKind policy = agents::PolicyKind::LO;
    std::uint64_t seed = 0;
    int episode = 0;
    double cost = 0.0;
    std::size_t dropped = 0;
    std::size_t breached = 0;
    double energy_j = 0.0;
};

std::string format_row(const ResultRow& row);

struct RunOptions {
    std::filesystem::path out_dir = "results";
    std::filesystem::path checkpoint_dir = "checkpoints";
    unsigned workers = 0;  // 0 selects the hardware concurrency
};

/// Evaluates every (sweep value, policy, seed) and writes `<experiment>.csv`
/// plus `<experiment>.json` into the output directory. Learned policies are
/// loaded before any simulation starts (agents::MissingCheckpointError if
/// absent). Rows are ordered by sweep value, then policy, then seed, so the
/// output does not depend on the worker count. Returns the CSV path.
std::filesystem::path run_experiment(const ExperimentSpec& spec, const RunOptions& options);

/// Rows in memory, same order as the CSV.
std::vector<ResultRow> collect_rows(const ExperimentSpec& spec, const RunOptions& options);

/// Trains each learned policy in `kinds` on `scenario` and writes
/// `<dir>/<kind>/` checkpoints and `<dir>/<kind>_curve.csv`. Returns the
/// checkpoint directories.
std::map<agents::PolicyKind, std::filesystem::path> train_all(const ScenarioConfig& scenario,
                                                             const std::vector<agents::PolicyKind>& kinds,
                                                             const agents::TrainingConfig& training,
                                                             std::uint64_t seed,
                                                             const std::filesystem::path& checkpoint_dir);

std::filesystem::path checkpoint_path(const std::filesystem::path& checkpoint_dir, agents::PolicyKind kind);

struct SummaryRow {
    std::string experiment;
    std::string sweep_value;
    std::string policy;
    agents::MetricSummary metrics;
};

struct SummaryFilter {
    std::optional<std::string> policy;
    std::optional<std::string> sweep_value;
};

std::vector<ResultRow> read_results(const std::filesystem::path& csv);

/// Mean and standard error per (experiment, sweep value, policy). Groups are
/// sorted and each group's values are reduced in seed order, so the result
/// does not depend on row order. Throws NoDataError when nothing matches.
std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows, const SummaryFilter& filter = {});

inline constexpr std::string_view kSummaryHeader =
    "experiment,sweep_value,policy,n,cost_mean,cost_se,dropped_mean,dropped_se,breached_mean,breached_se,"
    "energy_j_mean,energy_j_se";

void write_summary(const std::vector<SummaryRow>& rows, const std::filesystem::path& csv);

/// Writes `contents` to a sibling temporary file and renames it into place.
void write_atomically(const std::filesystem::path& path, std::string_view contents);

}  // namespace satoff::harness
