#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "satoff/agents/persistence.hpp"
#include "satoff/harness.hpp"

using namespace satoff;
using namespace satoff::harness;
using agents::PolicyKind;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path temp_dir(const char* name) {
    const auto dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

ExperimentSpec lo_spec() {
    ExperimentSpec s;
    s.experiment = "lo_only";
    s.sweep_variable = SweepVariable::JobRate;
    s.sweep_values = {"3"};
    s.policies = {PolicyKind::LO};
    s.n_seeds = 10;
    return s;
}

}  // namespace

TEST_CASE("local-only sweep writes one risk-free row per seed") {
    const auto dir = temp_dir("satoff_harness_lo");
    const auto csv = run_experiment(lo_spec(), {dir, dir / "ck", 2});
    const auto rows = read_results(csv);
    REQUIRE(rows.size() == 10);
    for (const auto& r : rows) {
        CHECK(r.breached == 0);
        CHECK(r.policy == PolicyKind::LO);
        CHECK(r.sweep_value == "3");
    }
    std::ifstream in(csv);
    std::string header;
    std::getline(in, header);
    CHECK(header == "experiment,sweep_value,policy,seed,episode,cost,dropped,breached,energy_j");

    const json side = json::parse(slurp(dir / "lo_only.json"));
    CHECK(side.at("schema_version") == kSchemaVersion);
    CHECK(side.at("seeds").size() == 10);
    CHECK(side.at("spec").at("scenario").at("job_rate") == 3.0);
    for (const auto& e : fs::directory_iterator(dir)) CHECK(e.path().extension() != ".tmp");
    fs::remove_all(dir);
}

TEST_CASE("reruns are byte-identical regardless of worker count") {
    const auto dir = temp_dir("satoff_harness_det");
    ExperimentSpec spec = lo_spec();
    spec.policies = {PolicyKind::LO, PolicyKind::SONS, PolicyKind::SOMS};
    spec.sweep_values = {"3", "5"};
    spec.n_seeds = 4;
    const auto a = slurp(run_experiment(spec, {dir / "a", dir, 1}));
    const auto b = slurp(run_experiment(spec, {dir / "b", dir, 3}));
    CHECK(a == b);
    CHECK(std::count(a.begin(), a.end(), '\n') == 1 + 2 * 3 * 4);
    fs::remove_all(dir);
}

TEST_CASE("missing checkpoints fail before any output is written") {
    const auto dir = temp_dir("satoff_harness_missing");
    ExperimentSpec spec = lo_spec();
    spec.policies = {PolicyKind::LO, PolicyKind::DDPG};
    CHECK_THROWS_AS(run_experiment(spec, {dir / "out", dir / "nowhere", 1}), agents::MissingCheckpointError);
    CHECK_FALSE(fs::exists(dir / "out"));
    fs::remove_all(dir);
}

TEST_CASE("train_all writes checkpoints and a capped learning curve") {
    const auto dir = temp_dir("satoff_harness_train");
    agents::TrainingConfig cfg;
    cfg.episodes = 20;
    cfg.warmup_transitions = 100;
    const auto paths = train_all(ScenarioConfig{}, {PolicyKind::DDPG, PolicyKind::DQN, PolicyKind::LO}, cfg, 5, dir);
    CHECK(paths.size() == 2);
    CHECK(agents::has_manifest(dir / "ddpg"));
    CHECK(agents::has_manifest(dir / "dqn"));
    const auto curve = slurp(dir / "ddpg_curve.csv");
    CHECK(std::count(curve.begin(), curve.end(), '\n') == 21);
    CHECK(curve.rfind("episode,cost,epsilon,loss\n", 0) == 0);

    // Same seed, same curve.
    const auto dir2 = temp_dir("satoff_harness_train2");
    train_all(ScenarioConfig{}, {PolicyKind::DDPG}, cfg, 5, dir2);
    CHECK(slurp(dir2 / "ddpg_curve.csv") == curve);

    // Trained policies plug into the sweep runner.
    ExperimentSpec spec = lo_spec();
    spec.policies = {PolicyKind::DQN, PolicyKind::DDPG};
    spec.n_seeds = 2;
    CHECK(read_results(run_experiment(spec, {dir / "out", dir, 1})).size() == 4);
    fs::remove_all(dir);
    fs::remove_all(dir2);
}

TEST_CASE("summaries: identical rows, empty selections, row order") {
    std::vector<ResultRow> rows;
    for (std::uint64_t s = 0; s < 10; ++s) rows.push_back({"e", "3", PolicyKind::LO, s, 0, 6.0, 0, 0, 1.5});
    const auto sum = summarize(rows);
    REQUIRE(sum.size() == 1);
    CHECK(sum[0].metrics.episodes == 10);
    CHECK(sum[0].metrics.cost.mean == 6.0);
    CHECK(sum[0].metrics.cost.stderr_ == 0.0);
    CHECK_THROWS_AS(summarize({}), NoDataError);
    CHECK_THROWS_AS(summarize(rows, {std::string("SOMS"), std::nullopt}), NoDataError);

    std::vector<ResultRow> mixed;
    std::mt19937 gen(3);
    std::uniform_real_distribution<double> u(0.0, 100.0);
    for (const char* v : {"10", "3", "7"}) {
        for (auto p : {PolicyKind::SOMS, PolicyKind::LO}) {
            for (std::uint64_t s = 0; s < 6; ++s) mixed.push_back({"e", v, p, s, 0, u(gen), s % 3, s % 2, u(gen)});
        }
    }
    const auto ref = summarize(mixed);
    REQUIRE(ref.size() == 6);
    CHECK(ref[0].sweep_value == "3");
    CHECK(ref[0].policy == "LO");
    CHECK(ref[5].sweep_value == "10");
    for (int k = 0; k < 5; ++k) {
        std::shuffle(mixed.begin(), mixed.end(), gen);
        const auto again = summarize(mixed);
        for (std::size_t i = 0; i < ref.size(); ++i) {
            CHECK(again[i].metrics.cost.mean == ref[i].metrics.cost.mean);
            CHECK(again[i].metrics.cost.stderr_ == ref[i].metrics.cost.stderr_);
            CHECK(again[i].metrics.energy_joules.mean == ref[i].metrics.energy_joules.mean);
        }
    }
}

TEST_CASE("results files with the wrong schema are rejected") {
    const auto dir = temp_dir("satoff_harness_schema");
    std::ofstream(dir / "bad.csv") << "experiment,value,policy\nx,1,LO\n";
    CHECK_THROWS_AS(read_results(dir / "bad.csv"), SchemaError);
    std::ofstream(dir / "short.csv") << kCsvHeader << "\nx,1,LO,1,0,2.0\n";
    CHECK_THROWS_AS(read_results(dir / "short.csv"), SchemaError);
    std::ofstream(dir / "nan.csv") << kCsvHeader << "\nx,1,LO,1,0,abc,0,0,1\n";
    CHECK_THROWS_AS(read_results(dir / "nan.csv"), SchemaError);
    fs::remove_all(dir);
}

TEST_CASE("local-only summaries match across network conditions") {
    const auto dir = temp_dir("satoff_harness_network");
    ExperimentSpec spec = preset("network");
    spec.policies = {PolicyKind::LO};
    spec.n_seeds = 5;
    const auto sum = summarize(read_results(run_experiment(spec, {dir, dir, 2})));
    REQUIRE(sum.size() == 3);
    CHECK(sum[0].metrics.cost.mean == sum[1].metrics.cost.mean);
    CHECK(sum[1].metrics.cost.mean == sum[2].metrics.cost.mean);
    CHECK(sum[0].metrics.energy_joules.mean == sum[2].metrics.energy_joules.mean);
    fs::remove_all(dir);
}

TEST_CASE("experiment specs parse, validate and round-trip") {
    const auto j = json::parse(R"({
        "experiment": "rates", "sweep_variable": "job_rate", "sweep_values": [3, "4", 5.5],
        "policies": ["lo", "SOMS"], "n_seeds": 3, "base_seed": 9, "scenario": {"formation": "Trailing"}})");
    const auto s = ExperimentSpec::from_json(j);
    CHECK(s.sweep_values == std::vector<std::string>{"3", "4", "5.5"});
    CHECK(s.policies.size() == 2);
    CHECK(s.scenario.formation == Formation::Trailing);
    CHECK(s.seeds().size() == 3);
    const auto back = ExperimentSpec::from_json(s.to_json());
    CHECK(back.to_json() == s.to_json());

    CHECK_THROWS_AS(ExperimentSpec::from_json(json::parse(R"({"sweep_values": [1], "policies": ["LO"], "extra": 1})")), ConfigError);
    CHECK_THROWS_AS(ExperimentSpec::from_json(json::parse(R"({"sweep_variable": "network_condition", "sweep_values": [4], "policies": ["LO"]})")), ConfigError);
    CHECK_THROWS_AS(ExperimentSpec::from_json(json::parse(R"({"sweep_values": [3], "policies": ["PPO"]})")), ConfigError);
    CHECK_THROWS_AS(ExperimentSpec::from_json(json::parse(R"({"sweep_values": [3], "policies": ["LO"], "n_seeds": 0})")), ConfigError);
}

TEST_CASE("presets cover the named sweeps") {
    CHECK(preset("job_rate").sweep_values.size() == 5);
    CHECK(preset("network").sweep_values.size() == 3);
    CHECK(preset("risk").sweep_values.size() == 9);
    CHECK(preset("data_size").sweep_values.size() == 3);
    CHECK(preset("formation_low").scenario.job_rate == 3.0);
    CHECK(preset("formation_high").scenario.job_rate == 7.0);
    CHECK(preset("formation_high").sweep_values == std::vector<std::string>{"Trailing", "Cluster", "Constellation"});
    for (const auto& name : preset_names()) CHECK_NOTHROW(preset(name).validate());
    CHECK_THROWS_AS(preset("bogus"), ConfigError);
    CHECK(apply_sweep(ScenarioConfig{}, SweepVariable::DataSize, "2").data_bits() == 3.2e6);
    CHECK(apply_sweep(ScenarioConfig{}, SweepVariable::RiskLevel, "0.4").security_demand == 0.4);
}
