#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "satoff/channel.hpp"
#include "satoff/cost_models.hpp"

using namespace satoff;

TEST_CASE("local execution time") {
    Job job;
    DeviceParams sat;
    CHECK(job.instructions() == doctest::Approx(2.5e9));
    CHECK(local_exec_time(job, sat) == doctest::Approx(1.0));
    DeviceParams server{5e9, 16, 0.1, 5.0};
    CHECK(local_exec_time(job, server) == doctest::Approx(0.5));
    Job big = job;
    big.data_bits *= 2;
    CHECK(local_exec_time(big, sat) == doctest::Approx(2.0));
}

TEST_CASE("cpu power interpolates idle and maximum") {
    DeviceParams d;
    CHECK(cpu_power(0.0, d) == doctest::Approx(0.1));
    CHECK(cpu_power(1.0, d) == doctest::Approx(5.0));
    CHECK(cpu_power(0.5, d) == doctest::Approx(2.55));
    CHECK_THROWS(cpu_power(1.5, d));
    CHECK_THROWS(cpu_power(-0.1, d));
}

TEST_CASE("local energy") {
    DeviceParams d;
    CHECK(local_energy(1.0, 1.0, d) == doctest::Approx(5.0));
    CHECK(local_energy(0.0, 1.0, d) == 0.0);
    CHECK(local_energy(1.0, 0.25, d) == doctest::Approx(1.325));
}

TEST_CASE("communication time") {
    CHECK(comm_time(1.6e6, 20e6) == doctest::Approx(0.08));
    CHECK(comm_time(0.0, 20e6) == 0.0);
    CHECK_THROWS_AS(comm_time(1.0, 0.0), std::domain_error);
}

TEST_CASE("shannon rate") {
    const std::vector<Watts> p1{1.0};
    const std::vector<double> g1{1.0};
    CHECK(shannon_rate(0, p1, g1, 1.0, 1.0) == doctest::Approx(1.0));
    const std::vector<Watts> p2{1.0, 1.0};
    const std::vector<double> g2{1.0, 1.0};
    CHECK(shannon_rate(0, p2, g2, 1.0, 1.0) == doctest::Approx(std::log2(1.5)));
    const std::vector<Watts> p0{0.0, 1.0};
    CHECK(shannon_rate(0, p0, g2, 1.0, 1.0) == 0.0);
}

TEST_CASE("remote time and offload energy") {
    CHECK(remote_total_time(0.157, 0.08, 0.5) == doctest::Approx(0.737));
    CHECK(remote_total_time(0, 0, 0) == 0.0);
    const auto cluster = FormationParams::preset(Formation::Cluster);
    DeviceParams sat;
    CHECK(offload_energy(0.08, 0.157, cluster, sat) == doctest::Approx(0.865));
    CHECK(offload_energy(0.0, 0.0, cluster, sat) == 0.0);
}

TEST_CASE("formation presets and names") {
    CHECK(FormationParams::preset(Formation::Trailing).comm_power == 0.5);
    CHECK(FormationParams::preset(Formation::Trailing).max_satellites == 20);
    CHECK(FormationParams::preset(Formation::Cluster).comm_power == 1.0);
    CHECK(FormationParams::preset(Formation::Cluster).max_satellites == 50);
    CHECK(FormationParams::preset(Formation::Constellation).comm_power == 2.0);
    CHECK(FormationParams::preset(Formation::Constellation).max_satellites == 100);
    CHECK(formation_from_string("trailing") == Formation::Trailing);
    CHECK(formation_from_string("Swarm") == Formation::Cluster);
    CHECK_THROWS(formation_from_string("blob"));
}

TEST_CASE("user-count rate curve") {
    RateCurve c;
    CHECK(user_count_rate(1, c) == doctest::Approx(20e6));
    CHECK(user_count_rate(11, c) / 20e6 == doctest::Approx(std::exp(-1.5)));
    CHECK(user_count_rate(11, c) / 20e6 == doctest::Approx(0.2231).epsilon(1e-3));
    CHECK_THROWS(user_count_rate(0, c));
}

TEST_CASE("active users are uniform within the regime") {
    NetworkRegimes regimes;
    RngStream r(3, StreamId::ChannelUsers);
    std::vector<std::size_t> counts(5, 0);
    const auto cluster = FormationParams::preset(Formation::Cluster);
    for (int i = 0; i < 100000; ++i) {
        const auto n = sample_active_users(regimes.condition(NetworkLevel::Best), cluster, r);
        REQUIRE(n >= 1);
        REQUIRE(n <= 5);
        ++counts[static_cast<std::size_t>(n - 1)];
    }
    for (auto c : counts) CHECK(std::abs(static_cast<double>(c) / 100000.0 - 0.2) < 0.01);
}

TEST_CASE("active users are capped by the formation") {
    NetworkRegimes regimes;
    RngStream r(4, StreamId::ChannelUsers);
    const auto trailing = FormationParams::preset(Formation::Trailing);
    for (int i = 0; i < 10000; ++i) {
        const auto n = sample_active_users(regimes.condition(NetworkLevel::Poor), trailing, r);
        REQUIRE(n >= 16);
        REQUIRE(n <= 20);
    }
    NetworkCondition fixed{NetworkLevel::Best, UserRange{3, 3}};
    for (int i = 0; i < 100; ++i) CHECK(sample_active_users(fixed, trailing, r) == 3);
}
