#include "satoff/agents/policy.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <string>

namespace satoff::agents {

std::string_view to_string(PolicyKind kind) {
    switch (kind) {
        case PolicyKind::LO: return "LO";
        case PolicyKind::SONS: return "SONS";
        case PolicyKind::SOMS: return "SOMS";
        case PolicyKind::DQN: return "DQN";
        case PolicyKind::DDPG: return "DDPG";
    }
    return "?";
}

PolicyKind policy_kind_from_string(std::string_view name) {
    std::string upper(name);
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    for (auto k : {PolicyKind::LO, PolicyKind::SONS, PolicyKind::SOMS, PolicyKind::DQN, PolicyKind::DDPG}) {
        if (upper == to_string(k)) return k;
    }
    throw std::invalid_argument("unknown policy '" + std::string(name) + "'");
}

bool is_learned(PolicyKind kind) { return kind == PolicyKind::DQN || kind == PolicyKind::DDPG; }

StaticPolicy::StaticPolicy(PolicyKind kind) : kind_(kind) {
    switch (kind) {
        case PolicyKind::LO: action_ = {0.0, 0.0, 0.0}; break;
        case PolicyKind::SONS: action_ = {1.0, 0.0, 0.0}; break;
        case PolicyKind::SOMS: action_ = {1.0, 1.0, 1.0}; break;
        default: throw std::invalid_argument("StaticPolicy: " + std::string(to_string(kind)) + " is a learned policy");
    }
}

namespace {

std::vector<double> with_none(const SecurityTable& table) {
    std::vector<double> levels{0.0};
    for (const auto& l : table.entries()) levels.push_back(l.level);
    return levels;
}

}  // namespace

ActionGrid::ActionGrid(const SecurityTable& conf, const SecurityTable& integ)
    : ActionGrid({0.0, 0.2, 0.4, 0.6, 0.8, 1.0}, with_none(conf), with_none(integ)) {}

ActionGrid::ActionGrid(std::vector<double> p_off, std::vector<double> sl_conf, std::vector<double> sl_int)
    : p_off_(std::move(p_off)), conf_(std::move(sl_conf)), int_(std::move(sl_int)) {
    if (p_off_.empty() || conf_.empty() || int_.empty()) throw std::invalid_argument("ActionGrid: empty dimension");
}

std::size_t ActionGrid::index_of(std::size_t p_idx, std::size_t conf_idx, std::size_t int_idx) const {
    if (p_idx >= p_off_.size() || conf_idx >= conf_.size() || int_idx >= int_.size()) {
        throw std::out_of_range("ActionGrid::index_of");
    }
    return (p_idx * conf_.size() + conf_idx) * int_.size() + int_idx;
}

ActionVector ActionGrid::action(std::size_t index) const {
    if (index >= size()) throw std::out_of_range("ActionGrid::action");
    const std::size_t ii = index % int_.size();
    const std::size_t ic = (index / int_.size()) % conf_.size();
    const std::size_t ip = index / (int_.size() * conf_.size());
    return {p_off_[ip], conf_[ic], int_[ii]};
}

}  // namespace satoff::agents
