#include "satoff/agents/training.hpp"

#include <cmath>
#include <set>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "satoff/config.hpp"

namespace satoff::agents {

using nlohmann::json;

void check_divergence(double loss, double threshold, int episode, const char* network) {
    if (std::isfinite(loss) && loss <= threshold) return;
    std::ostringstream msg;
    msg << network << " loss " << loss << " exceeded " << threshold << " in episode " << episode;
    throw DivergenceError(msg.str());
}

void TrainingConfig::validate() const {
    auto fail = [](const std::string& msg) { throw ConfigError("training: " + msg); };
    if (episodes < 1 || episodes > kMaxEpisodes) fail("episodes must lie in [1, " + std::to_string(kMaxEpisodes) + "]");
    if (batch_size == 0) fail("batch_size must be >= 1");
    if (replay_capacity == 0) fail("replay_capacity must be >= 1");
    if (!(tau_soft >= 0.0 && tau_soft <= 1.0)) fail("tau must lie in [0, 1]");
    if (!(discount >= 0.0 && discount <= 1.0)) fail("gamma must lie in [0, 1]");
    if (!(actor_lr > 0.0 && critic_lr > 0.0)) fail("learning rates must be > 0");
    if (!(reward_scale > 0.0)) fail("reward_scale must be > 0");
    if (!(divergence_threshold > 0.0)) fail("divergence_threshold must be > 0");
    if (!(exploration.start >= 0.0 && exploration.start <= 1.0 && exploration.end >= 0.0 &&
          exploration.end <= exploration.start)) {
        fail("epsilon must satisfy 0 <= epsilon_end <= epsilon_start <= 1");
    }
}

json TrainingConfig::to_json() const {
    return {{"actor_hidden", actor_hidden},
            {"critic_hidden", critic_hidden},
            {"actor_lr", actor_lr},
            {"critic_lr", critic_lr},
            {"beta1", beta1},
            {"beta2", beta2},
            {"tau", tau_soft},
            {"gamma", discount},
            {"reward_scale", reward_scale},
            {"batch_size", batch_size},
            {"replay_capacity", replay_capacity},
            {"warmup_transitions", warmup_transitions},
            {"updates_per_step", updates_per_step},
            {"episodes", episodes},
            {"epsilon_start", exploration.start},
            {"epsilon_end", exploration.end},
            {"epsilon_decay_episodes", exploration.decay_episodes},
            {"divergence_threshold", divergence_threshold}};
}

TrainingConfig TrainingConfig::from_json(const json& j) {
    static const std::set<std::string> allowed{
        "actor_hidden", "critic_hidden", "actor_lr", "critic_lr", "beta1", "beta2",
        "tau", "gamma", "reward_scale", "batch_size", "replay_capacity", "warmup_transitions",
        "updates_per_step", "episodes", "epsilon_start", "epsilon_end", "epsilon_decay_episodes",
        "divergence_threshold"};
    if (!j.is_object()) throw ConfigError("training: expected a JSON object");
    for (const auto& [key, _] : j.items()) {
        if (!allowed.contains(key)) throw ConfigError("training: unknown key '" + key + "'");
    }
    TrainingConfig c;
    try {
        auto read = [&j](const char* key, auto& out) {
            if (j.contains(key)) out = j.at(key).get<std::decay_t<decltype(out)>>();
        };
        read("actor_hidden", c.actor_hidden);
        read("critic_hidden", c.critic_hidden);
        read("actor_lr", c.actor_lr);
        read("critic_lr", c.critic_lr);
        read("beta1", c.beta1);
        read("beta2", c.beta2);
        read("tau", c.tau_soft);
        read("gamma", c.discount);
        read("reward_scale", c.reward_scale);
        read("batch_size", c.batch_size);
        read("replay_capacity", c.replay_capacity);
        read("warmup_transitions", c.warmup_transitions);
        read("updates_per_step", c.updates_per_step);
        read("episodes", c.episodes);
        read("epsilon_start", c.exploration.start);
        read("epsilon_end", c.exploration.end);
        read("epsilon_decay_episodes", c.exploration.decay_episodes);
        read("divergence_threshold", c.divergence_threshold);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("training: ") + e.what());
    }
    c.validate();
    return c;
}

}  // namespace satoff::agents
