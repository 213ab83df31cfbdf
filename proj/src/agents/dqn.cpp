#include "satoff/agents/dqn.hpp"

#include <algorithm>

namespace satoff::agents {

namespace {

constexpr std::size_t kObsDim = 4;

nn::Mlp make_q(const std::vector<std::size_t>& hidden, std::size_t actions) {
    std::vector<std::size_t> sizes{kObsDim};
    sizes.insert(sizes.end(), hidden.begin(), hidden.end());
    sizes.push_back(actions);
    std::vector<nn::Activation> acts(hidden.size(), nn::Activation::ReLU);
    acts.push_back(nn::Activation::Identity);
    return nn::Mlp(sizes, acts);
}

// First index of the maximum, so ties resolve deterministically.
std::size_t argmax(const nn::Vector& v) {
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < v.size(); ++i) {
        if (v[i] > v[best]) best = i;
    }
    return static_cast<std::size_t>(best);
}

}  // namespace

DqnAgent::DqnAgent(ObservationScale scale, ActionGrid grid, const TrainingConfig& config, RngStream& init_rng)
    : scale_(scale), grid_(std::move(grid)), config_(config), q_(make_q(config.critic_hidden, grid_.size())) {
    q_.init_uniform(init_rng);
    target_q_ = q_;
    opt_ = nn::Adam(q_.parameter_count(), config.critic_adam());
}

DqnAgent::DqnAgent(ObservationScale scale, ActionGrid grid, nn::Mlp q_net)
    : scale_(scale), grid_(std::move(grid)), q_(std::move(q_net)) {
    if (q_.input_size() != kObsDim || q_.output_size() != grid_.size()) {
        throw std::invalid_argument("DqnAgent: Q-network shape does not match the action grid");
    }
    target_q_ = q_;
    opt_ = nn::Adam(q_.parameter_count(), config_.critic_adam());
}

nn::Vector DqnAgent::features(const Observation& obs) const {
    const auto f = scale_.features(obs);
    return Eigen::Map<const nn::Vector>(f.data(), kObsDim);
}

nn::Vector DqnAgent::q_values(const Observation& obs) const { return q_.forward(features(obs)); }

std::size_t DqnAgent::greedy_index(const Observation& obs) const { return argmax(q_values(obs)); }

std::size_t DqnAgent::select(const Observation& obs, bool explore, RngStream& rng) const {
    if (explore && rng.uniform() < epsilon_) {
        return static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(grid_.size()) - 1));
    }
    return greedy_index(obs);
}

ActionVector DqnAgent::act(const Observation& obs, bool explore, RngStream& rng) const {
    return grid_.action(select(obs, explore, rng));
}

double DqnAgent::update(const ReplayBuffer& buffer, RngStream& rng) {
    const auto idx = buffer.sample_indices(config_.batch_size, rng);
    const auto n = static_cast<Eigen::Index>(idx.size());
    nn::Matrix s(kObsDim, n);
    nn::Matrix next_s(kObsDim, n);
    nn::Vector target(n);
    std::vector<Eigen::Index> chosen(static_cast<std::size_t>(n));
    for (Eigen::Index b = 0; b < n; ++b) {
        const Transition& t = buffer.at(idx[static_cast<std::size_t>(b)]);
        if (t.action_index < 0) throw std::logic_error("DqnAgent::update: transition without a grid index");
        s.col(b) = features(t.observation);
        next_s.col(b) = features(t.next_observation);
        chosen[static_cast<std::size_t>(b)] = t.action_index;
        target[b] = -t.cost * config_.reward_scale;
    }
    const nn::Matrix next_q = target_q_.forward(next_s);
    for (Eigen::Index b = 0; b < n; ++b) {
        const Transition& t = buffer.at(idx[static_cast<std::size_t>(b)]);
        if (!t.done) target[b] += config_.discount * next_q.col(b).maxCoeff();
    }

    nn::Mlp::Tape tape;
    const nn::Matrix q = q_.forward(s, tape);
    nn::Matrix upstream = nn::Matrix::Zero(q.rows(), n);
    double loss = 0.0;
    for (Eigen::Index b = 0; b < n; ++b) {
        const Eigen::Index a = chosen[static_cast<std::size_t>(b)];
        const double err = q(a, b) - target[b];
        loss += err * err;
        upstream(a, b) = 2.0 * err / static_cast<double>(n);
    }
    opt_.step(q_.parameters(), q_.backward(tape, upstream).params);
    nn::soft_update(target_q_.parameters(), q_.parameters(), config_.tau_soft);
    return loss / static_cast<double>(n);
}

TrainedDqn dqn_train(Environment& env, const ActionGrid& grid, const TrainingConfig& config, std::uint64_t seed,
                     const EpisodeCallback& on_episode) {
    config.validate();
    RngStream init_rng(seed, StreamId::Init);
    RngStream explore_rng(seed, StreamId::Exploration);
    RngStream replay_rng(seed, StreamId::Replay);
    TrainedDqn out{DqnAgent(env.observation_scale(), grid, config, init_rng), {}};
    ReplayBuffer buffer(config.replay_capacity);
    const std::size_t ready = std::max(config.warmup_transitions, std::size_t{1});

    for (int ep = 0; ep < config.episodes; ++ep) {
        const double eps = config.exploration.epsilon(ep);
        out.agent.set_epsilon(eps);
        Observation obs = env.reset(derive_seed(seed, static_cast<std::uint64_t>(ep)));
        double cost = 0.0;
        double loss_sum = 0.0;
        std::size_t updates = 0;
        while (!env.done()) {
            const std::size_t a = out.agent.select(obs, true, explore_rng);
            const ActionVector action = grid.action(a);
            StepResult r = env.step(action);
            buffer.push({obs, action, static_cast<int>(a), r.cost, r.observation, r.done});
            cost += r.cost;
            if (buffer.size() >= ready) {
                for (std::size_t k = 0; k < config.updates_per_step; ++k) {
                    const double loss = out.agent.update(buffer, replay_rng);
                    check_divergence(loss, config.divergence_threshold, ep, "Q-network");
                    loss_sum += loss;
                    ++updates;
                }
            }
            obs = r.observation;
        }
        out.result.episode_costs.push_back(cost);
        out.result.episode_epsilons.push_back(eps);
        out.result.mean_losses.push_back(updates ? loss_sum / static_cast<double>(updates) : 0.0);
        if (on_episode) on_episode(ep, cost);
    }
    out.agent.set_epsilon(0.0);
    return out;
}

}  // namespace satoff::agents
