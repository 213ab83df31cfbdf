#pragma once

#include <array>
#include <cstdint>

#include "satoff/cost_models.hpp"
#include "satoff/rng.hpp"

namespace satoff {

enum class NetworkLevel : int { Best = 1, Medium = 2, Poor = 3 };

struct UserRange {
    std::int64_t low = 1;
    std::int64_t high = 1;
};

struct NetworkCondition {
    NetworkLevel label = NetworkLevel::Best;
    UserRange users;
};

/// Active-user regimes for the three network conditions. Defaults:
/// Best U{1..5}, Medium U{6..15}, Poor U{16..30}.
struct NetworkRegimes {
    std::array<UserRange, 3> ranges{UserRange{1, 5}, UserRange{6, 15}, UserRange{16, 30}};

    NetworkCondition condition(NetworkLevel level) const;
    /// Throws std::invalid_argument unless Best < Medium < Poor without overlap.
    void validate() const;
};

/// Effective rate as a function of the number of users sharing the channel.
struct RateCurve {
    BitsPerSecond r_max = 20e6;
    double alpha = 0.15;
};

/// r_max * exp(-alpha * (n_users - 1)); n_users must be >= 1.
BitsPerSecond user_count_rate(std::int64_t n_users, const RateCurve& curve);

/// Uniform draw from the condition's user range, capped at the formation's
/// maximum number of satellites. Called once per decision slot.
std::int64_t sample_active_users(const NetworkCondition& cond, const FormationParams& formation, RngStream& rng);

}  // namespace satoff
