#include "satoff/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include <nlohmann/json.hpp>

#include "satoff/agents/ddpg.hpp"
#include "satoff/agents/dqn.hpp"
#include "satoff/agents/persistence.hpp"

namespace satoff::harness {

namespace fs = std::filesystem;
using nlohmann::json;
using agents::PolicyKind;

namespace {

std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::optional<double> parse_number(const std::string& s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

double require_number(SweepVariable var, const std::string& value) {
    const auto v = parse_number(value);
    if (!v) throw ConfigError("sweep value '" + value + "' is not a number (" + std::string(to_string(var)) + ")");
    return *v;
}

// Canonical text for a sweep value given either as a JSON number or string.
std::string canonical_value(SweepVariable var, const json& j) {
    if (var == SweepVariable::Formation) {
        if (!j.is_string()) throw ConfigError("formation sweep values must be names");
        try {
            return std::string(to_string(formation_from_string(j.get<std::string>())));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }
    if (j.is_number()) return format_number(j.get<double>());
    if (j.is_string()) return format_number(require_number(var, j.get<std::string>()));
    throw ConfigError("sweep values must be numbers or strings");
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

}  // namespace

void write_atomically(const fs::path& path, std::string_view contents) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        out.close();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw std::runtime_error("failed writing '" + tmp.string() + "'");
        }
    }
    fs::rename(tmp, path);
}

std::string_view to_string(SweepVariable v) {
    switch (v) {
        case SweepVariable::JobRate: return "job_rate";
        case SweepVariable::NetworkCondition: return "network_condition";
        case SweepVariable::RiskLevel: return "risk_level";
        case SweepVariable::DataSize: return "data_size";
        case SweepVariable::Formation: return "formation";
    }
    return "?";
}

SweepVariable sweep_variable_from_string(std::string_view name) {
    for (auto v : {SweepVariable::JobRate, SweepVariable::NetworkCondition, SweepVariable::RiskLevel,
                   SweepVariable::DataSize, SweepVariable::Formation}) {
        if (name == to_string(v)) return v;
    }
    throw ConfigError("unknown sweep_variable '" + std::string(name) + "'");
}

ScenarioConfig apply_sweep(const ScenarioConfig& base, SweepVariable v, const std::string& value) {
    ScenarioConfig s = base;
    switch (v) {
        case SweepVariable::JobRate: s.job_rate = require_number(v, value); break;
        case SweepVariable::NetworkCondition: {
            const double level = require_number(v, value);
            if (level != 1.0 && level != 2.0 && level != 3.0) throw ConfigError("network_condition must be 1, 2 or 3");
            s.network_condition = static_cast<NetworkLevel>(static_cast<int>(level));
            break;
        }
        case SweepVariable::RiskLevel: s.security_demand = require_number(v, value); break;
        case SweepVariable::DataSize: s.data_size_multiplier = require_number(v, value); break;
        case SweepVariable::Formation:
            try {
                s.formation = formation_from_string(value);
            } catch (const std::invalid_argument& e) {
                throw ConfigError(e.what());
            }
            break;
    }
    s.validate();
    return s;
}

std::vector<std::uint64_t> ExperimentSpec::seeds() const {
    std::vector<std::uint64_t> out;
    for (int i = 0; i < n_seeds; ++i) out.push_back(derive_seed(base_seed, static_cast<std::uint64_t>(i)));
    return out;
}

void ExperimentSpec::validate() const {
    if (experiment.empty() || experiment.find_first_of(",/\\\n\"") != std::string::npos) {
        throw ConfigError("experiment name must be non-empty and free of , / \\ \" and newlines");
    }
    if (sweep_values.empty()) throw ConfigError("sweep_values must not be empty");
    if (policies.empty()) throw ConfigError("policies must not be empty");
    if (n_seeds < 1) throw ConfigError("n_seeds must be >= 1");
    scenario.validate();
    for (const auto& v : sweep_values) (void)apply_sweep(scenario, sweep_variable, v);
}

json ExperimentSpec::to_json() const {
    json pols = json::array();
    for (auto p : policies) pols.push_back(agents::to_string(p));
    json values = json::array();
    for (const auto& v : sweep_values) {
        if (auto num = parse_number(v)) {
            values.push_back(*num);
        } else {
            values.push_back(v);
        }
    }
    return {{"experiment", experiment},
            {"sweep_variable", to_string(sweep_variable)},
            {"sweep_values", values},
            {"policies", pols},
            {"n_seeds", n_seeds},
            {"base_seed", base_seed},
            {"scenario", scenario.to_json()},
            {"retrain", retrain},
            {"training", training.to_json()},
            {"training_seed", training_seed}};
}

ExperimentSpec ExperimentSpec::from_json(const json& j) {
    static const std::set<std::string> allowed{"experiment", "sweep_variable", "sweep_values", "policies",
                                               "n_seeds",    "base_seed",      "scenario",     "retrain",
                                               "training",   "training_seed"};
    if (!j.is_object()) throw ConfigError("experiment spec: expected a JSON object");
    for (const auto& [key, _] : j.items()) {
        if (!allowed.contains(key)) throw ConfigError("experiment spec: unknown key '" + key + "'");
    }
    ExperimentSpec s;
    try {
        if (j.contains("experiment")) s.experiment = j.at("experiment").get<std::string>();
        if (j.contains("sweep_variable")) s.sweep_variable = sweep_variable_from_string(j.at("sweep_variable").get<std::string>());
        if (j.contains("scenario")) s.scenario = ScenarioConfig::from_json(j.at("scenario"));
        if (j.contains("training")) s.training = agents::TrainingConfig::from_json(j.at("training"));
        for (const auto& v : j.at("sweep_values")) s.sweep_values.push_back(canonical_value(s.sweep_variable, v));
        for (const auto& p : j.at("policies")) s.policies.push_back(agents::policy_kind_from_string(p.get<std::string>()));
        if (j.contains("n_seeds")) s.n_seeds = j.at("n_seeds").get<int>();
        if (j.contains("base_seed")) s.base_seed = j.at("base_seed").get<std::uint64_t>();
        if (j.contains("retrain")) s.retrain = j.at("retrain").get<bool>();
        if (j.contains("training_seed")) s.training_seed = j.at("training_seed").get<std::uint64_t>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("experiment spec: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("experiment spec: ") + e.what());
    }
    s.validate();
    return s;
}

ExperimentSpec ExperimentSpec::load(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open experiment spec '" + path.string() + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("experiment spec '" + path.string() + "': " + e.what());
    }
    return from_json(j);
}

std::vector<std::string> preset_names() {
    return {"job_rate", "network", "risk", "data_size", "formation_low", "formation_high"};
}

ExperimentSpec preset(std::string_view name) {
    ExperimentSpec s;
    s.experiment = std::string(name);
    s.policies = {PolicyKind::LO, PolicyKind::SONS, PolicyKind::SOMS, PolicyKind::DQN, PolicyKind::DDPG};
    if (name == "job_rate") {
        s.sweep_variable = SweepVariable::JobRate;
        s.sweep_values = {"3", "4", "5", "6", "7"};
    } else if (name == "network") {
        s.sweep_variable = SweepVariable::NetworkCondition;
        s.sweep_values = {"1", "2", "3"};
    } else if (name == "risk") {
        s.sweep_variable = SweepVariable::RiskLevel;
        s.sweep_values = {"0.1", "0.2", "0.3", "0.4", "0.5", "0.6", "0.7", "0.8", "0.9"};
    } else if (name == "data_size") {
        s.sweep_variable = SweepVariable::DataSize;
        s.sweep_values = {"1", "2", "3"};
    } else if (name == "formation_low" || name == "formation_high") {
        s.sweep_variable = SweepVariable::Formation;
        s.sweep_values = {"Trailing", "Cluster", "Constellation"};
        s.scenario.job_rate = name == "formation_low" ? 3.0 : 7.0;
    } else {
        throw ConfigError("unknown preset '" + std::string(name) + "'");
    }
    return s;
}

std::string format_row(const ResultRow& r) {
    std::ostringstream out;
    out << r.experiment << ',' << r.sweep_value << ',' << agents::to_string(r.policy) << ',' << r.seed << ','
        << r.episode << ',' << format_number(r.cost) << ',' << r.dropped << ',' << r.breached << ','
        << format_number(r.energy_j);
    return out.str();
}

fs::path checkpoint_path(const fs::path& checkpoint_dir, PolicyKind kind) {
    return checkpoint_dir / lower(agents::to_string(kind));
}

namespace {

std::unique_ptr<agents::Policy> train_policy(PolicyKind kind, const ScenarioConfig& scenario,
                                             const agents::TrainingConfig& training, std::uint64_t seed) {
    OffloadEnv env(scenario);
    if (kind == PolicyKind::DDPG) {
        return std::make_unique<agents::DdpgAgent>(agents::ddpg_train(env, training, seed).agent);
    }
    agents::ActionGrid grid(scenario.confidentiality, scenario.integrity);
    return std::make_unique<agents::DqnAgent>(agents::dqn_train(env, grid, training, seed).agent);
}

}  // namespace

std::vector<ResultRow> collect_rows(const ExperimentSpec& spec, const RunOptions& options) {
    spec.validate();
    const auto seeds = spec.seeds();
    const std::size_t n_values = spec.sweep_values.size();
    const std::size_t n_policies = spec.policies.size();

    // policies[v][p]; shared across sweep values unless retraining.
    std::vector<std::vector<std::shared_ptr<const agents::Policy>>> policies(n_values);
    std::map<PolicyKind, std::shared_ptr<const agents::Policy>> loaded;
    for (auto kind : spec.policies) {
        if (!agents::is_learned(kind) || spec.retrain || loaded.contains(kind)) continue;
        loaded[kind] = agents::load_policy(checkpoint_path(options.checkpoint_dir, kind));
    }
    std::vector<ScenarioConfig> scenarios;
    for (std::size_t v = 0; v < n_values; ++v) {
        scenarios.push_back(apply_sweep(spec.scenario, spec.sweep_variable, spec.sweep_values[v]));
        for (auto kind : spec.policies) {
            if (!agents::is_learned(kind)) {
                policies[v].push_back(std::make_shared<agents::StaticPolicy>(kind));
            } else if (spec.retrain) {
                policies[v].push_back(train_policy(kind, scenarios.back(), spec.training, spec.training_seed));
            } else {
                policies[v].push_back(loaded.at(kind));
            }
        }
    }

    const std::size_t total = n_values * n_policies * seeds.size();
    std::vector<ResultRow> rows(total);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (std::size_t i = next++; i < total; i = next++) {
            const std::size_t s = i % seeds.size();
            const std::size_t p = (i / seeds.size()) % n_policies;
            const std::size_t v = i / (seeds.size() * n_policies);
            try {
                const EpisodeMetrics m = agents::run_episode(*policies[v][p], scenarios[v], seeds[s]);
                rows[i] = {spec.experiment, spec.sweep_values[v], spec.policies[p], seeds[s], 0,
                           m.total_cost, m.jobs_dropped, m.jobs_breached, m.energy_joules};
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    unsigned workers = options.workers ? options.workers : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, total));
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    pool.clear();
    if (failure) std::rethrow_exception(failure);
    return rows;
}

fs::path run_experiment(const ExperimentSpec& spec, const RunOptions& options) {
    const auto rows = collect_rows(spec, options);
    std::string csv(kCsvHeader);
    csv += '\n';
    for (const auto& r : rows) {
        csv += format_row(r);
        csv += '\n';
    }
    const fs::path csv_path = options.out_dir / (spec.experiment + ".csv");
    json sidecar{{"schema_version", kSchemaVersion},
                 {"csv_header", kCsvHeader},
                 {"rows", rows.size()},
                 {"seeds", spec.seeds()},
                 {"spec", spec.to_json()},
                 {"checkpoint_dir", options.checkpoint_dir.string()}};
    write_atomically(options.out_dir / (spec.experiment + ".json"), sidecar.dump(2) + "\n");
    write_atomically(csv_path, csv);
    return csv_path;
}

std::map<PolicyKind, fs::path> train_all(const ScenarioConfig& scenario, const std::vector<PolicyKind>& kinds,
                                         const agents::TrainingConfig& training, std::uint64_t seed,
                                         const fs::path& checkpoint_dir) {
    scenario.validate();
    std::map<PolicyKind, fs::path> out;
    for (auto kind : kinds) {
        if (!agents::is_learned(kind) || out.contains(kind)) continue;
        OffloadEnv env(scenario);
        agents::TrainResult result;
        const fs::path dir = checkpoint_path(checkpoint_dir, kind);
        if (kind == PolicyKind::DDPG) {
            auto trained = agents::ddpg_train(env, training, seed);
            agents::save_policy(trained.agent, dir);
            result = std::move(trained.result);
        } else {
            agents::ActionGrid grid(scenario.confidentiality, scenario.integrity);
            auto trained = agents::dqn_train(env, grid, training, seed);
            agents::save_policy(trained.agent, dir);
            result = std::move(trained.result);
        }
        std::string curve = "episode,cost,epsilon,loss\n";
        for (std::size_t i = 0; i < result.episode_costs.size(); ++i) {
            curve += std::to_string(i) + ',' + format_number(result.episode_costs[i]) + ',' +
                     format_number(result.episode_epsilons[i]) + ',' + format_number(result.mean_losses[i]) + '\n';
        }
        write_atomically(checkpoint_dir / (lower(agents::to_string(kind)) + "_curve.csv"), curve);
        json meta{{"schema_version", kSchemaVersion},
                  {"policy", agents::to_string(kind)},
                  {"seed", seed},
                  {"scenario", scenario.to_json()},
                  {"training", training.to_json()}};
        write_atomically(dir / "training.json", meta.dump(2) + "\n");
        out[kind] = dir;
    }
    return out;
}

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

template <typename T>
T parse_field(const std::string& s, const char* name, std::size_t line_no) {
    T v{};
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw SchemaError("line " + std::to_string(line_no) + ": bad " + name + " '" + s + "'");
    }
    return v;
}

// Numbers compare numerically, anything else lexically after all numbers.
bool value_less(const std::string& a, const std::string& b) {
    const auto na = parse_number(a);
    const auto nb = parse_number(b);
    if (na && nb) return *na < *nb;
    if (na != nb) return na.has_value();
    if (!na && !nb) {
        try {
            return formation_from_string(a) < formation_from_string(b);
        } catch (const std::invalid_argument&) {
        }
    }
    return a < b;
}

}  // namespace

std::vector<ResultRow> read_results(const fs::path& csv) {
    std::ifstream in(csv);
    if (!in) throw std::runtime_error("cannot open results file '" + csv.string() + "'");
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) {
        throw SchemaError("'" + csv.string() + "': header does not match " + std::string(kCsvHeader));
    }
    std::vector<ResultRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto f = split(line);
        if (f.size() != 9) throw SchemaError("line " + std::to_string(line_no) + ": expected 9 fields");
        ResultRow r;
        r.experiment = f[0];
        r.sweep_value = f[1];
        try {
            r.policy = agents::policy_kind_from_string(f[2]);
        } catch (const std::invalid_argument& e) {
            throw SchemaError("line " + std::to_string(line_no) + ": " + e.what());
        }
        r.seed = parse_field<std::uint64_t>(f[3], "seed", line_no);
        r.episode = parse_field<int>(f[4], "episode", line_no);
        r.cost = parse_field<double>(f[5], "cost", line_no);
        r.dropped = parse_field<std::size_t>(f[6], "dropped", line_no);
        r.breached = parse_field<std::size_t>(f[7], "breached", line_no);
        r.energy_j = parse_field<double>(f[8], "energy_j", line_no);
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows, const SummaryFilter& filter) {
    std::vector<const ResultRow*> selected;
    for (const auto& r : rows) {
        if (filter.policy && lower(agents::to_string(r.policy)) != lower(*filter.policy)) continue;
        if (filter.sweep_value && r.sweep_value != *filter.sweep_value) continue;
        selected.push_back(&r);
    }
    if (selected.empty()) throw NoDataError("no data: no result rows match the selection");

    auto key_less = [](const ResultRow* a, const ResultRow* b) {
        if (a->experiment != b->experiment) return a->experiment < b->experiment;
        if (a->sweep_value != b->sweep_value) return value_less(a->sweep_value, b->sweep_value);
        if (a->policy != b->policy) return a->policy < b->policy;
        if (a->seed != b->seed) return a->seed < b->seed;
        return a->episode < b->episode;
    };
    std::sort(selected.begin(), selected.end(), key_less);

    std::vector<SummaryRow> out;
    std::size_t i = 0;
    while (i < selected.size()) {
        std::size_t j = i;
        std::vector<double> cost, dropped, breached, energy;
        while (j < selected.size() && selected[j]->experiment == selected[i]->experiment &&
               selected[j]->sweep_value == selected[i]->sweep_value && selected[j]->policy == selected[i]->policy) {
            cost.push_back(selected[j]->cost);
            dropped.push_back(static_cast<double>(selected[j]->dropped));
            breached.push_back(static_cast<double>(selected[j]->breached));
            energy.push_back(selected[j]->energy_j);
            ++j;
        }
        SummaryRow s{selected[i]->experiment, selected[i]->sweep_value, std::string(agents::to_string(selected[i]->policy)), {}};
        s.metrics.episodes = j - i;
        s.metrics.cost = agents::mean_se(cost);
        s.metrics.dropped = agents::mean_se(dropped);
        s.metrics.breached = agents::mean_se(breached);
        s.metrics.energy_joules = agents::mean_se(energy);
        out.push_back(std::move(s));
        i = j;
    }
    return out;
}

void write_summary(const std::vector<SummaryRow>& rows, const fs::path& csv) {
    std::string text(kSummaryHeader);
    text += '\n';
    for (const auto& r : rows) {
        const auto& m = r.metrics;
        text += r.experiment + ',' + r.sweep_value + ',' + r.policy + ',' + std::to_string(m.episodes);
        for (const auto* ms : {&m.cost, &m.dropped, &m.breached, &m.energy_joules}) {
            text += ',' + format_number(ms->mean) + ',' + format_number(ms->stderr_);
        }
        text += '\n';
    }
    write_atomically(csv, text);
}

}  // namespace satoff::harness
