#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "satoff/security.hpp"

using namespace satoff;

TEST_CASE("confidentiality and integrity tables") {
    const auto conf = SecurityTable::confidentiality();
    REQUIRE(conf.size() == 5);
    CHECK(conf.entries().front().name == "RC4");
    CHECK(conf.entries().back().name == "IDEA");
    CHECK(conf.entries().back().rate_mbps == 11.76);
    const auto integ = SecurityTable::integrity();
    REQUIRE(integ.size() == 5);
    CHECK(integ.entries().front().name == "MD5");
    CHECK(integ.entries().back().name == "TIGER");
    for (std::size_t i = 1; i < conf.size(); ++i) {
        CHECK(conf.entries()[i].level > conf.entries()[i - 1].level);
        CHECK(conf.entries()[i].rate_mbps < conf.entries()[i - 1].rate_mbps);
    }
}

TEST_CASE("quantization picks the smallest level at or above the raw value") {
    const auto conf = SecurityTable::confidentiality();
    const auto top = conf.quantize(1.0);
    CHECK(top.level == 1.0);
    CHECK(top.rate_mbps == 11.76);
    const auto mid = conf.quantize(0.5);
    CHECK(mid.level == 0.53);
    CHECK(mid.rate_mbps == 22.03);
    const auto none = conf.quantize(0.0);
    CHECK(none.is_none());
    CHECK(none.level == 0.0);
    CHECK(std::isinf(none.rate_mbps));
    CHECK(conf.quantize(1e-9).name == "RC4");
    CHECK_THROWS(conf.quantize(1.5));
    CHECK_THROWS(conf.quantize(-0.1));
}

TEST_CASE("security time") {
    const auto conf = SecurityTable::confidentiality();
    const auto integ = SecurityTable::integrity();
    CHECK(security_time(1.6e6, conf.quantize(1.0), integ.quantize(1.0)) ==
          doctest::Approx(1.6 / 11.76 + 1.6 / 75.76));
    CHECK(security_time(1.6e6, conf.quantize(1.0), integ.quantize(1.0)) == doctest::Approx(0.1572).epsilon(1e-3));
    CHECK(security_time(1.6e6, SecurityLevel::none(), SecurityLevel::none()) == 0.0);
    CHECK(security_time(1.6e6, 37.17, 172.41) == doctest::Approx(0.0523).epsilon(1e-3));
    CHECK(security_time(1.6e6, conf.quantize(1e-6), integ.quantize(1e-6)) == doctest::Approx(1.6 / 37.17 + 1.6 / 172.41));
}

TEST_CASE("breach probability") {
    CHECK(breach_probability(0.5, 0.5, 3.0) == 0.0);
    CHECK(breach_probability(0.1, 1.0, 3.0) == 0.0);
    CHECK(breach_probability(1.0, 0.53, 3.0) == doctest::Approx(1.0 - std::exp(-1.41)));
    CHECK(breach_probability(1.0, 0.53, 3.0) == doctest::Approx(0.7558).epsilon(2e-4));
    CHECK(breach_probability(1.0, 0.0, 3.0) == doctest::Approx(1.0 - std::exp(-3.0)));
    CHECK(breach_probability(1.0, 0.0, 50.0) > 0.999999);
}

TEST_CASE("combined risk") {
    CHECK(combined_risk(0.0, 0.0) == 0.0);
    CHECK(combined_risk(1.0, 0.3) == 1.0);
    CHECK(combined_risk(0.5, 0.5) == doctest::Approx(0.75));
}

TEST_CASE("breach sampling") {
    RngStream r(8, StreamId::Breach);
    for (int i = 0; i < 1000; ++i) {
        CHECK(sample_breach(0.0, r) == BreachOutcome::Safe);
        CHECK(sample_breach(1.0, r) == BreachOutcome::Breached);
    }
    const double p = breach_probability(1.0, 0.53, 3.0);
    int hits = 0;
    for (int i = 0; i < 10000; ++i) hits += sample_breach(p, r) == BreachOutcome::Breached;
    CHECK(std::abs(hits / 10000.0 - 0.7558) < 0.013);
}

TEST_CASE("tables round-trip through JSON and validate ordering") {
    const auto conf = SecurityTable::confidentiality();
    const auto back = SecurityTable::from_json(conf.to_json());
    REQUIRE(back.size() == conf.size());
    for (std::size_t i = 0; i < conf.size(); ++i) {
        CHECK(back.entries()[i].name == conf.entries()[i].name);
        CHECK(back.entries()[i].level == conf.entries()[i].level);
        CHECK(back.entries()[i].rate_mbps == conf.entries()[i].rate_mbps);
    }
    const auto bad = nlohmann::json::parse(R"([{"name":"a","level":0.2,"rate_mbps":10},{"name":"b","level":0.5,"rate_mbps":20}])");
    CHECK_THROWS(SecurityTable::from_json(bad));
}
