#pragma once

#include <cstdint>

#include "satoff/agents/policy.hpp"
#include "satoff/agents/training.hpp"

namespace satoff::agents {

/// Actor-critic agent for the continuous action [p_off, sl_conf, sl_int].
///
/// The actor ends in a sigmoid so every component lies in (0, 1). The critic
/// estimates the discounted scaled reward of (state, action). While exploring,
/// the agent replaces the actor's output by a uniform random action with
/// probability epsilon.
class DdpgAgent final : public Policy {
public:
    DdpgAgent(ObservationScale scale, const TrainingConfig& config, RngStream& init_rng);
    DdpgAgent(ObservationScale scale, nn::Mlp actor, nn::Mlp critic);

    PolicyKind kind() const override { return PolicyKind::DDPG; }
    ActionVector act(const Observation& obs, bool explore, RngStream& rng) const override;
    ActionVector greedy(const Observation& obs) const;
    double q_value(const Observation& obs, const ActionVector& action) const;

    void set_epsilon(double epsilon) { epsilon_ = epsilon; }
    double epsilon() const { return epsilon_; }

    const nn::Mlp& actor() const { return actor_; }
    const nn::Mlp& critic() const { return critic_; }
    const ObservationScale& scale() const { return scale_; }

    /// One critic step, one actor step and the soft target updates on a
    /// uniformly sampled batch. Returns the critic's mean squared TD error.
    double update(const ReplayBuffer& buffer, RngStream& rng);

private:
    nn::Vector features(const Observation& obs) const;
    void init_training(const TrainingConfig& config);

    ObservationScale scale_;
    TrainingConfig config_;
    nn::Mlp actor_;
    nn::Mlp critic_;
    nn::Mlp target_actor_;
    nn::Mlp target_critic_;
    nn::Adam actor_opt_;
    nn::Adam critic_opt_;
    double epsilon_ = 0.0;
};

struct TrainedDdpg {
    DdpgAgent agent;
    TrainResult result;
};

/// Runs `config.episodes` episodes on `env`; episode i resets with
/// derive_seed(seed, i). Throws DivergenceError when the critic loss exceeds
/// the configured threshold.
TrainedDdpg ddpg_train(Environment& env, const TrainingConfig& config, std::uint64_t seed,
                       const EpisodeCallback& on_episode = {});

}  // namespace satoff::agents
