#include "satoff/config.hpp"

#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

namespace satoff {

using nlohmann::json;

Job ScenarioConfig::make_job(Seconds arrival) const {
    Job job;
    job.gamma = gamma;
    job.data_bits = data_bits();
    job.deadline = deadline;
    job.security_demand = security_demand;
    job.arrival_time = arrival;
    return job;
}

void ScenarioConfig::validate() const {
    auto fail = [](const std::string& msg) { throw ConfigError("invalid scenario: " + msg); };
    if (!(job_rate >= 0.0)) fail("job_rate must be >= 0");
    if (!(data_size_multiplier > 0.0)) fail("data_size_multiplier must be > 0");
    if (!(base_data_bits > 0.0)) fail("base_data_bits must be > 0");
    if (!(gamma > 0.0)) fail("gamma must be > 0");
    if (!(deadline > 0.0)) fail("deadline must be > 0");
    if (!(security_demand >= 0.0 && security_demand <= 1.0)) fail("security_demand must lie in [0, 1]");
    if (weights.w_t < 0 || weights.w_e < 0 || weights.w_r < 0 || weights.w_d < 0) fail("weights must be >= 0");
    if (episode_slots < 1) fail("episode_slots must be >= 1");
    if (!(slot_length > 0.0)) fail("slot_length must be > 0");
    if (!(channel.r_max > 0.0)) fail("channel.r_max must be > 0");
    if (!(channel.alpha >= 0.0)) fail("channel.alpha must be >= 0");
    if (risk.lambda_conf < 0 || risk.lambda_int < 0) fail("risk lambdas must be >= 0");
    try {
        satellite.validate();
        server.validate();
        regimes.validate();
    } catch (const std::invalid_argument& e) {
        fail(e.what());
    }
}

namespace {

json device_json(const DeviceParams& d) {
    return {{"mips", d.mips}, {"cores", d.cores}, {"p_idle", d.p_idle}, {"p_max", d.p_max}};
}

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + ": expected a JSON object");
    for (const auto& [key, _] : j.items()) {
        if (!allowed.contains(key)) throw ConfigError(where + ": unknown key '" + key + "'");
    }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

DeviceParams device_from(const json& j, DeviceParams d, const std::string& where) {
    check_keys(j, {"mips", "cores", "p_idle", "p_max"}, where);
    read(j, "mips", d.mips);
    read(j, "cores", d.cores);
    read(j, "p_idle", d.p_idle);
    read(j, "p_max", d.p_max);
    return d;
}

SecurityTable table_from(const json& j) {
    if (j.is_string()) return SecurityTable::load(j.get<std::string>());
    return SecurityTable::from_json(j);
}

}  // namespace

json ScenarioConfig::to_json() const {
    json regimes_json = json::array();
    for (const auto& r : regimes.ranges) regimes_json.push_back({r.low, r.high});
    return {
        {"job_rate", job_rate},
        {"data_size_multiplier", data_size_multiplier},
        {"base_data_bits", base_data_bits},
        {"gamma", gamma},
        {"deadline", deadline},
        {"network_condition", static_cast<int>(network_condition)},
        {"security_demand", security_demand},
        {"formation", std::string(to_string(formation))},
        {"weights", {{"w_t", weights.w_t}, {"w_e", weights.w_e}, {"w_r", weights.w_r}, {"w_d", weights.w_d}}},
        {"buffers", {{"cpu", buffers.cpu}, {"transmit", buffers.transmit}, {"server", buffers.server}}},
        {"satellite", device_json(satellite)},
        {"server", device_json(server)},
        {"channel", {{"r_max", channel.r_max}, {"alpha", channel.alpha}}},
        {"network_regimes", regimes_json},
        {"risk", {{"lambda_conf", risk.lambda_conf}, {"lambda_int", risk.lambda_int}}},
        {"confidentiality_table", confidentiality.to_json()},
        {"integrity_table", integrity.to_json()},
        {"episode_slots", episode_slots},
        {"slot_length", slot_length},
        {"deterministic_service", deterministic_service},
        {"expected_risk_cost", expected_risk_cost},
    };
}

ScenarioConfig ScenarioConfig::from_json(const json& j) {
    ScenarioConfig c;
    try {
        check_keys(j,
                   {"job_rate", "data_size_multiplier", "base_data_bits", "gamma", "deadline", "network_condition",
                    "security_demand", "formation", "weights", "buffers", "satellite", "server", "channel",
                    "network_regimes", "risk", "confidentiality_table", "integrity_table", "episode_slots",
                    "slot_length", "deterministic_service", "expected_risk_cost"},
                   "scenario");
        read(j, "job_rate", c.job_rate);
        read(j, "data_size_multiplier", c.data_size_multiplier);
        read(j, "base_data_bits", c.base_data_bits);
        read(j, "gamma", c.gamma);
        read(j, "deadline", c.deadline);
        if (j.contains("network_condition")) {
            const int level = j.at("network_condition").get<int>();
            if (level < 1 || level > 3) throw ConfigError("scenario: network_condition must be 1, 2 or 3");
            c.network_condition = static_cast<NetworkLevel>(level);
        }
        read(j, "security_demand", c.security_demand);
        if (j.contains("formation")) c.formation = formation_from_string(j.at("formation").get<std::string>());
        if (j.contains("weights")) {
            const auto& w = j.at("weights");
            check_keys(w, {"w_t", "w_e", "w_r", "w_d"}, "scenario.weights");
            read(w, "w_t", c.weights.w_t);
            read(w, "w_e", c.weights.w_e);
            read(w, "w_r", c.weights.w_r);
            read(w, "w_d", c.weights.w_d);
        }
        if (j.contains("buffers")) {
            const auto& b = j.at("buffers");
            check_keys(b, {"cpu", "transmit", "server"}, "scenario.buffers");
            read(b, "cpu", c.buffers.cpu);
            read(b, "transmit", c.buffers.transmit);
            read(b, "server", c.buffers.server);
        }
        if (j.contains("satellite")) c.satellite = device_from(j.at("satellite"), c.satellite, "scenario.satellite");
        if (j.contains("server")) c.server = device_from(j.at("server"), c.server, "scenario.server");
        if (j.contains("channel")) {
            const auto& ch = j.at("channel");
            check_keys(ch, {"r_max", "alpha"}, "scenario.channel");
            read(ch, "r_max", c.channel.r_max);
            read(ch, "alpha", c.channel.alpha);
        }
        if (j.contains("network_regimes")) {
            const auto& r = j.at("network_regimes");
            if (!r.is_array() || r.size() != 3) throw ConfigError("scenario.network_regimes: expected 3 [low, high] pairs");
            for (std::size_t i = 0; i < 3; ++i) {
                c.regimes.ranges[i] = UserRange{r[i].at(0).get<std::int64_t>(), r[i].at(1).get<std::int64_t>()};
            }
        }
        if (j.contains("risk")) {
            const auto& r = j.at("risk");
            check_keys(r, {"lambda_conf", "lambda_int"}, "scenario.risk");
            read(r, "lambda_conf", c.risk.lambda_conf);
            read(r, "lambda_int", c.risk.lambda_int);
        }
        if (j.contains("confidentiality_table")) c.confidentiality = table_from(j.at("confidentiality_table"));
        if (j.contains("integrity_table")) c.integrity = table_from(j.at("integrity_table"));
        read(j, "episode_slots", c.episode_slots);
        read(j, "slot_length", c.slot_length);
        read(j, "deterministic_service", c.deterministic_service);
        read(j, "expected_risk_cost", c.expected_risk_cost);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("scenario: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("scenario: ") + e.what());
    }
    c.validate();
    return c;
}

ScenarioConfig ScenarioConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file '" + path.string() + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("scenario file '" + path.string() + "': " + e.what());
    }
    return from_json(j);
}

}  // namespace satoff
