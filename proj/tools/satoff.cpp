// Command-line front end: train learned policies, run sweeps, summarize results.

#include <cstdio>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "satoff/agents/persistence.hpp"
#include "satoff/harness.hpp"

namespace {

using namespace satoff;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitCheckpoint = 3;
constexpr int kExitDivergence = 4;

struct Common {
    std::string spec_file;
    std::string preset;
    std::optional<int> seeds;
    std::string checkpoint_dir = "checkpoints";
};

harness::ExperimentSpec resolve_spec(const Common& c) {
    if (!c.spec_file.empty() && !c.preset.empty()) throw ConfigError("use either --spec or --preset, not both");
    harness::ExperimentSpec spec;
    if (!c.spec_file.empty()) {
        spec = harness::ExperimentSpec::load(c.spec_file);
    } else if (!c.preset.empty()) {
        spec = harness::preset(c.preset);
    } else {
        spec.sweep_values = {"3"};
        spec.policies = {agents::PolicyKind::LO, agents::PolicyKind::SONS, agents::PolicyKind::SOMS,
                         agents::PolicyKind::DQN, agents::PolicyKind::DDPG};
    }
    if (c.seeds) spec.n_seeds = *c.seeds;
    return spec;
}

std::vector<agents::PolicyKind> parse_policies(const std::vector<std::string>& names) {
    std::vector<agents::PolicyKind> out;
    try {
        for (const auto& n : names) out.push_back(agents::policy_kind_from_string(n));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return out;
}

void print_summary(const std::vector<harness::SummaryRow>& rows) {
    std::printf("%-16s %-14s %-6s %4s %22s %18s %18s %20s\n", "experiment", "sweep_value", "policy", "n", "cost",
                "dropped", "breached", "energy_j");
    for (const auto& r : rows) {
        const auto& m = r.metrics;
        std::printf("%-16s %-14s %-6s %4zu %12.3f +- %6.3f %9.3f +- %5.3f %9.3f +- %5.3f %10.3f +- %6.3f\n",
                    r.experiment.c_str(), r.sweep_value.c_str(), r.policy.c_str(), m.episodes, m.cost.mean,
                    m.cost.stderr_, m.dropped.mean, m.dropped.stderr_, m.breached.mean, m.breached.stderr_,
                    m.energy_joules.mean, m.energy_joules.stderr_);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Satellite computation-offloading simulator and policy trainer"};
    app.require_subcommand(1);

    Common common;
    auto add_common = [&common](CLI::App* cmd) {
        cmd->add_option("--spec", common.spec_file, "Experiment spec (JSON)")->check(CLI::ExistingFile);
        cmd->add_option("--preset", common.preset, "Named sweep: job_rate, network, risk, data_size, formation_low, formation_high");
        cmd->add_option("--checkpoint-dir", common.checkpoint_dir, "Directory holding trained policies")
            ->capture_default_str();
    };

    auto* train = app.add_subcommand("train", "Train the learned policies on the experiment's base scenario");
    add_common(train);
    std::vector<std::string> train_policies{"DDPG", "DQN"};
    std::optional<int> episodes;
    std::optional<std::uint64_t> train_seed;
    train->add_option("--policies", train_policies, "Learned policies to train")->capture_default_str();
    train->add_option("--episodes", episodes, "Override the number of training episodes");
    train->add_option("--seed", train_seed, "Override the training seed");

    auto* run = app.add_subcommand("run", "Evaluate every policy across a sweep");
    add_common(run);
    std::string out_dir = "results";
    unsigned workers = 0;
    run->add_option("--seeds", common.seeds, "Evaluation seeds per (sweep value, policy)")->check(CLI::PositiveNumber);
    run->add_option("--out", out_dir, "Output directory for the CSV and JSON sidecar")->capture_default_str();
    run->add_option("--workers", workers, "Parallel evaluation workers (0 = hardware concurrency)");

    auto* summarize = app.add_subcommand("summarize", "Mean and standard error per sweep value and policy");
    std::string results_file;
    std::string summary_out;
    harness::SummaryFilter filter;
    summarize->add_option("results", results_file, "Results CSV written by 'run'")->required()->check(CLI::ExistingFile);
    summarize->add_option("--out", summary_out, "Write the summary as CSV to this path");
    summarize->add_option("--policy", filter.policy, "Only this policy");
    summarize->add_option("--sweep-value", filter.sweep_value, "Only this sweep value");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*train) {
            harness::ExperimentSpec spec = resolve_spec(common);
            agents::TrainingConfig training = spec.training;
            if (episodes) training.episodes = *episodes;
            training.validate();
            const std::uint64_t seed = train_seed.value_or(spec.training_seed);
            const auto paths = harness::train_all(spec.scenario, parse_policies(train_policies), training, seed,
                                                  common.checkpoint_dir);
            for (const auto& [kind, path] : paths) {
                std::cout << agents::to_string(kind) << " -> " << path.string() << '\n';
            }
        } else if (*run) {
            const harness::ExperimentSpec spec = resolve_spec(common);
            harness::RunOptions options{out_dir, common.checkpoint_dir, workers};
            std::cout << harness::run_experiment(spec, options).string() << '\n';
        } else if (*summarize) {
            const auto rows = harness::summarize(harness::read_results(results_file), filter);
            print_summary(rows);
            if (!summary_out.empty()) harness::write_summary(rows, summary_out);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const agents::MissingCheckpointError& e) {
        std::cerr << "missing checkpoint: " << e.what() << '\n';
        return kExitCheckpoint;
    } catch (const nn::CheckpointError& e) {
        std::cerr << "checkpoint error: " << e.what() << '\n';
        return kExitCheckpoint;
    } catch (const agents::DivergenceError& e) {
        std::cerr << "training diverged: " << e.what() << '\n';
        return kExitDivergence;
    } catch (const harness::SchemaError& e) {
        std::cerr << "schema error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const harness::NoDataError& e) {
        std::cerr << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitOk;
}
