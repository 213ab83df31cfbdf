#include "satoff/agents/evaluate.hpp"

#include <cmath>

namespace satoff::agents {

EpisodeMetrics run_episode(const Policy& policy, const ScenarioConfig& scenario, std::uint64_t seed) {
    OffloadEnv env(scenario);
    RngStream rng(seed, StreamId::Exploration);  // unused by greedy policies
    Observation obs = env.reset(seed);
    while (!env.done()) obs = env.step(policy.act(obs, false, rng)).observation;
    return env.metrics();
}

std::vector<EpisodeMetrics> evaluate(const Policy& policy, const ScenarioConfig& scenario,
                                     std::span<const std::uint64_t> seeds) {
    std::vector<EpisodeMetrics> out;
    out.reserve(seeds.size());
    for (auto seed : seeds) out.push_back(run_episode(policy, scenario, seed));
    return out;
}

MeanSe mean_se(std::span<const double> values) {
    MeanSe r;
    if (values.empty()) return r;
    const auto n = static_cast<double>(values.size());
    double sum = 0.0;
    for (double v : values) sum += v;
    r.mean = sum / n;
    if (values.size() < 2) return r;
    double ss = 0.0;
    for (double v : values) ss += (v - r.mean) * (v - r.mean);
    r.stderr_ = std::sqrt(ss / (n - 1.0) / n);
    return r;
}

MetricSummary summarize(std::span<const EpisodeMetrics> episodes) {
    MetricSummary s;
    s.episodes = episodes.size();
    std::vector<double> cost, dropped, breached, energy;
    for (const auto& e : episodes) {
        cost.push_back(e.total_cost);
        dropped.push_back(static_cast<double>(e.jobs_dropped));
        breached.push_back(static_cast<double>(e.jobs_breached));
        energy.push_back(e.energy_joules);
    }
    s.cost = mean_se(cost);
    s.dropped = mean_se(dropped);
    s.breached = mean_se(breached);
    s.energy_joules = mean_se(energy);
    return s;
}

}  // namespace satoff::agents
