#pragma once

#include <memory>
#include <string_view>
#include <vector>

#include "satoff/env.hpp"
#include "satoff/rng.hpp"
#include "satoff/security.hpp"

namespace satoff::agents {

enum class PolicyKind { LO, SONS, SOMS, DQN, DDPG };

std::string_view to_string(PolicyKind kind);
/// Accepts the short names LO, SONS, SOMS, DQN, DDPG (case-insensitive).
PolicyKind policy_kind_from_string(std::string_view name);
bool is_learned(PolicyKind kind);

/// Maps observations to actions. With explore == false every policy is a
/// deterministic function of its parameters and the observation.
class Policy {
public:
    virtual ~Policy() = default;
    virtual PolicyKind kind() const = 0;
    virtual ActionVector act(const Observation& obs, bool explore, RngStream& rng) const = 0;
};

/// Fixed-action baselines: LO (0,0,0), SONS (1,0,0), SOMS (1,1,1).
class StaticPolicy final : public Policy {
public:
    explicit StaticPolicy(PolicyKind kind);

    PolicyKind kind() const override { return kind_; }
    ActionVector act(const Observation&, bool, RngStream&) const override { return action_; }

private:
    PolicyKind kind_;
    ActionVector action_;
};

/// Discrete action set for the value-based agent: p_off in steps of 0.2 and
/// each security dimension over its table levels plus "no protection".
class ActionGrid {
public:
    ActionGrid() : ActionGrid(SecurityTable::confidentiality(), SecurityTable::integrity()) {}
    ActionGrid(const SecurityTable& conf, const SecurityTable& integ);
    ActionGrid(std::vector<double> p_off, std::vector<double> sl_conf, std::vector<double> sl_int);

    std::size_t size() const { return p_off_.size() * conf_.size() * int_.size(); }
    ActionVector action(std::size_t index) const;
    std::size_t index_of(std::size_t p_idx, std::size_t conf_idx, std::size_t int_idx) const;

    const std::vector<double>& p_off_levels() const { return p_off_; }
    const std::vector<double>& conf_levels() const { return conf_; }
    const std::vector<double>& int_levels() const { return int_; }

private:
    std::vector<double> p_off_;
    std::vector<double> conf_;
    std::vector<double> int_;
};

}  // namespace satoff::agents
