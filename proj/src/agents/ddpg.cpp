#include "satoff/agents/ddpg.hpp"

#include <algorithm>

namespace satoff::agents {

namespace {

constexpr std::size_t kObsDim = 4;
constexpr std::size_t kActDim = 3;

nn::Mlp make_net(std::size_t in, const std::vector<std::size_t>& hidden, std::size_t out, nn::Activation last) {
    std::vector<std::size_t> sizes{in};
    sizes.insert(sizes.end(), hidden.begin(), hidden.end());
    sizes.push_back(out);
    std::vector<nn::Activation> acts(hidden.size(), nn::Activation::ReLU);
    acts.push_back(last);
    return nn::Mlp(sizes, acts);
}

void put_features(nn::Matrix& m, Eigen::Index col, const std::array<double, 4>& f) {
    for (std::size_t k = 0; k < kObsDim; ++k) m(static_cast<Eigen::Index>(k), col) = f[k];
}

}  // namespace

DdpgAgent::DdpgAgent(ObservationScale scale, const TrainingConfig& config, RngStream& init_rng)
    : scale_(scale),
      actor_(make_net(kObsDim, config.actor_hidden, kActDim, nn::Activation::Sigmoid)),
      critic_(make_net(kObsDim + kActDim, config.critic_hidden, 1, nn::Activation::Identity)) {
    actor_.init_uniform(init_rng);
    critic_.init_uniform(init_rng);
    init_training(config);
}

DdpgAgent::DdpgAgent(ObservationScale scale, nn::Mlp actor, nn::Mlp critic)
    : scale_(scale), actor_(std::move(actor)), critic_(std::move(critic)) {
    if (actor_.input_size() != kObsDim || actor_.output_size() != kActDim) {
        throw std::invalid_argument("DdpgAgent: actor must map 4 features to 3 actions");
    }
    if (critic_.input_size() != kObsDim + kActDim || critic_.output_size() != 1) {
        throw std::invalid_argument("DdpgAgent: critic must map 7 inputs to 1 value");
    }
    init_training(TrainingConfig{});
}

void DdpgAgent::init_training(const TrainingConfig& config) {
    config_ = config;
    target_actor_ = actor_;
    target_critic_ = critic_;
    actor_opt_ = nn::Adam(actor_.parameter_count(), config.actor_adam());
    critic_opt_ = nn::Adam(critic_.parameter_count(), config.critic_adam());
}

nn::Vector DdpgAgent::features(const Observation& obs) const {
    const auto f = scale_.features(obs);
    return Eigen::Map<const nn::Vector>(f.data(), kObsDim);
}

ActionVector DdpgAgent::greedy(const Observation& obs) const {
    const nn::Vector a = actor_.forward(features(obs));
    return {a[0], a[1], a[2]};
}

ActionVector DdpgAgent::act(const Observation& obs, bool explore, RngStream& rng) const {
    if (explore && rng.uniform() < epsilon_) {
        const double p = rng.uniform();
        const double c = rng.uniform();
        const double i = rng.uniform();
        return {p, c, i};
    }
    return greedy(obs);
}

double DdpgAgent::q_value(const Observation& obs, const ActionVector& action) const {
    nn::Vector x(kObsDim + kActDim);
    x.head(kObsDim) = features(obs);
    x[4] = action.p_off;
    x[5] = action.sl_conf;
    x[6] = action.sl_int;
    return critic_.forward(x)[0];
}

double DdpgAgent::update(const ReplayBuffer& buffer, RngStream& rng) {
    const auto idx = buffer.sample_indices(config_.batch_size, rng);
    const auto n = static_cast<Eigen::Index>(idx.size());
    nn::Matrix sa(kObsDim + kActDim, n);
    nn::Matrix next_s(kObsDim, n);
    nn::Vector reward(n);
    nn::Vector not_done(n);
    for (Eigen::Index b = 0; b < n; ++b) {
        const Transition& t = buffer.at(idx[static_cast<std::size_t>(b)]);
        put_features(sa, b, scale_.features(t.observation));
        sa(4, b) = t.action.p_off;
        sa(5, b) = t.action.sl_conf;
        sa(6, b) = t.action.sl_int;
        put_features(next_s, b, scale_.features(t.next_observation));
        reward[b] = -t.cost * config_.reward_scale;
        not_done[b] = t.done ? 0.0 : 1.0;
    }

    // Critic: regress Q(s, a) onto r + gamma * Q'(s', mu'(s')).
    nn::Matrix next_sa(kObsDim + kActDim, n);
    next_sa.topRows(kObsDim) = next_s;
    next_sa.bottomRows(kActDim) = target_actor_.forward(next_s);
    const nn::Vector next_q = target_critic_.forward(next_sa).row(0).transpose();
    const nn::Vector target = reward + config_.discount * not_done.cwiseProduct(next_q);

    nn::Mlp::Tape tape;
    const nn::Vector q = critic_.forward(sa, tape).row(0).transpose();
    const nn::Vector err = q - target;
    const double loss = err.squaredNorm() / static_cast<double>(n);
    const nn::Matrix dq = (2.0 / static_cast<double>(n)) * err.transpose();
    critic_opt_.step(critic_.parameters(), critic_.backward(tape, dq).params);

    // Actor: ascend Q(s, mu(s)) through the critic's action inputs.
    nn::Mlp::Tape actor_tape;
    const nn::Matrix states = sa.topRows(kObsDim);
    const nn::Matrix mu = actor_.forward(states, actor_tape);
    nn::Matrix s_mu(kObsDim + kActDim, n);
    s_mu.topRows(kObsDim) = states;
    s_mu.bottomRows(kActDim) = mu;
    nn::Mlp::Tape critic_tape;
    critic_.forward(s_mu, critic_tape);
    const nn::Matrix minus_mean = nn::Matrix::Constant(1, n, -1.0 / static_cast<double>(n));
    const nn::Matrix da = critic_.backward(critic_tape, minus_mean).inputs.bottomRows(kActDim);
    actor_opt_.step(actor_.parameters(), actor_.backward(actor_tape, da).params);

    nn::soft_update(target_critic_.parameters(), critic_.parameters(), config_.tau_soft);
    nn::soft_update(target_actor_.parameters(), actor_.parameters(), config_.tau_soft);
    return loss;
}

TrainedDdpg ddpg_train(Environment& env, const TrainingConfig& config, std::uint64_t seed,
                       const EpisodeCallback& on_episode) {
    config.validate();
    RngStream init_rng(seed, StreamId::Init);
    RngStream explore_rng(seed, StreamId::Exploration);
    RngStream replay_rng(seed, StreamId::Replay);
    TrainedDdpg out{DdpgAgent(env.observation_scale(), config, init_rng), {}};
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
            const ActionVector action = out.agent.act(obs, true, explore_rng).clamped();
            StepResult r = env.step(action);
            buffer.push({obs, action, -1, r.cost, r.observation, r.done});
            cost += r.cost;
            if (buffer.size() >= ready) {
                for (std::size_t k = 0; k < config.updates_per_step; ++k) {
                    const double loss = out.agent.update(buffer, replay_rng);
                    check_divergence(loss, config.divergence_threshold, ep, "critic");
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
