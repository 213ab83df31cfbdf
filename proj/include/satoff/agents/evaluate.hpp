#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "satoff/agents/policy.hpp"
#include "satoff/config.hpp"

namespace satoff::agents {

/// One greedy episode per seed.
std::vector<EpisodeMetrics> evaluate(const Policy& policy, const ScenarioConfig& scenario,
                                     std::span<const std::uint64_t> seeds);

EpisodeMetrics run_episode(const Policy& policy, const ScenarioConfig& scenario, std::uint64_t seed);

struct MeanSe {
    double mean = 0.0;
    double stderr_ = 0.0;
};

/// Sample mean and standard error (0 for fewer than two values).
MeanSe mean_se(std::span<const double> values);

struct MetricSummary {
    std::size_t episodes = 0;
    MeanSe cost;
    MeanSe dropped;
    MeanSe breached;
    MeanSe energy_joules;
};

MetricSummary summarize(std::span<const EpisodeMetrics> episodes);

}  // namespace satoff::agents
