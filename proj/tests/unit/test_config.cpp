#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "satoff/config.hpp"

using namespace satoff;
using nlohmann::json;

TEST_CASE("default scenario validates and round-trips") {
    ScenarioConfig c;
    CHECK_NOTHROW(c.validate());
    const auto back = ScenarioConfig::from_json(c.to_json());
    CHECK(back.to_json() == c.to_json());
    CHECK(c.data_bits() == 1.6e6);
    CHECK(c.make_job(2.5).arrival_time == 2.5);
}

TEST_CASE("partial JSON keeps defaults") {
    const auto c = ScenarioConfig::from_json(json::parse(R"({"job_rate": 7, "formation": "Trailing", "network_condition": 3})"));
    CHECK(c.job_rate == 7.0);
    CHECK(c.formation == Formation::Trailing);
    CHECK(c.network_condition == NetworkLevel::Poor);
    CHECK(c.deadline == 5.0);
}

TEST_CASE("invalid scenarios are rejected") {
    CHECK_THROWS_AS(ScenarioConfig::from_json(json::parse(R"({"jobrate": 3})")), ConfigError);
    CHECK_THROWS_AS(ScenarioConfig::from_json(json::parse(R"({"job_rate": -1})")), ConfigError);
    CHECK_THROWS_AS(ScenarioConfig::from_json(json::parse(R"({"security_demand": 2})")), ConfigError);
    CHECK_THROWS_AS(ScenarioConfig::from_json(json::parse(R"({"network_condition": 4})")), ConfigError);
    CHECK_THROWS_AS(ScenarioConfig::from_json(json::parse(R"({"job_rate": "fast"})")), ConfigError);
    CHECK_THROWS_AS(ScenarioConfig::load("/nonexistent/scenario.json"), ConfigError);
}

TEST_CASE("security tables may be loaded from a file") {
    const auto dir = std::filesystem::temp_directory_path() / "satoff_config_test";
    std::filesystem::create_directories(dir);
    const auto table = dir / "conf.json";
    std::ofstream(table) << R"([{"name":"X","level":0.5,"rate_mbps":10},{"name":"Y","level":1.0,"rate_mbps":5}])";
    json j;
    j["confidentiality_table"] = table.string();
    const auto c = ScenarioConfig::from_json(j);
    REQUIRE(c.confidentiality.size() == 2);
    CHECK(c.confidentiality.quantize(0.2).name == "X");
    std::filesystem::remove_all(dir);
}
