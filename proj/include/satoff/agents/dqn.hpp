#pragma once

#include <cstdint>

#include "satoff/agents/policy.hpp"
#include "satoff/agents/training.hpp"

namespace satoff::agents {

/// Q-learning over an ActionGrid with a soft-updated target network.
class DqnAgent final : public Policy {
public:
    DqnAgent(ObservationScale scale, ActionGrid grid, const TrainingConfig& config, RngStream& init_rng);
    DqnAgent(ObservationScale scale, ActionGrid grid, nn::Mlp q_net);

    PolicyKind kind() const override { return PolicyKind::DQN; }
    ActionVector act(const Observation& obs, bool explore, RngStream& rng) const override;

    /// Grid index chosen for `obs`: argmax Q (first on ties), or a uniform
    /// random index with probability epsilon when exploring.
    std::size_t select(const Observation& obs, bool explore, RngStream& rng) const;
    std::size_t greedy_index(const Observation& obs) const;
    nn::Vector q_values(const Observation& obs) const;

    void set_epsilon(double epsilon) { epsilon_ = epsilon; }
    double epsilon() const { return epsilon_; }

    const ActionGrid& grid() const { return grid_; }
    const nn::Mlp& q_net() const { return q_; }
    nn::Mlp& q_net() { return q_; }
    const ObservationScale& scale() const { return scale_; }

    double update(const ReplayBuffer& buffer, RngStream& rng);

private:
    nn::Vector features(const Observation& obs) const;

    ObservationScale scale_;
    ActionGrid grid_;
    TrainingConfig config_;
    nn::Mlp q_;
    nn::Mlp target_q_;
    nn::Adam opt_;
    double epsilon_ = 0.0;
};

struct TrainedDqn {
    DqnAgent agent;
    TrainResult result;
};

TrainedDqn dqn_train(Environment& env, const ActionGrid& grid, const TrainingConfig& config, std::uint64_t seed,
                     const EpisodeCallback& on_episode = {});

}  // namespace satoff::agents
