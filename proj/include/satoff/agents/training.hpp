#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "satoff/agents/replay.hpp"
#include "satoff/nn.hpp"

namespace satoff::agents {

/// Critic (or Q-network) loss exceeded the configured threshold.
class DivergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kMaxEpisodes = 1000;

/// Hyperparameters shared by both learners; the value-based agent uses
/// `critic_hidden` and `critic_lr` for its Q-network.
struct TrainingConfig {
    std::vector<std::size_t> actor_hidden{64, 64};
    std::vector<std::size_t> critic_hidden{64, 64};
    double actor_lr = 1e-4;
    double critic_lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double tau_soft = 0.005;
    double discount = 0.99;
    /// Rewards are multiplied by this before entering the Bellman target.
    double reward_scale = 0.01;
    std::size_t batch_size = 64;
    std::size_t replay_capacity = 100000;
    std::size_t warmup_transitions = 1000;
    std::size_t updates_per_step = 1;
    int episodes = 1000;
    ExplorationSchedule exploration;
    double divergence_threshold = 1e6;

    nn::AdamConfig actor_adam() const { return {actor_lr, beta1, beta2, 1e-8}; }
    nn::AdamConfig critic_adam() const { return {critic_lr, beta1, beta2, 1e-8}; }

    /// Throws ConfigError; episodes are capped at kMaxEpisodes.
    void validate() const;

    nlohmann::json to_json() const;
    static TrainingConfig from_json(const nlohmann::json& j);
};

struct TrainResult {
    std::vector<double> episode_costs;
    std::vector<double> episode_epsilons;
    std::vector<double> mean_losses;  // critic / Q loss averaged over the episode's updates
};

/// Throws DivergenceError when `loss` is non-finite or above `threshold`.
void check_divergence(double loss, double threshold, int episode, const char* network);

using EpisodeCallback = std::function<void(int episode, double cost)>;

}  // namespace satoff::agents
