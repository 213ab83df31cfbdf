#include "satoff/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace satoff {

NetworkCondition NetworkRegimes::condition(NetworkLevel level) const {
    const int idx = static_cast<int>(level) - 1;
    if (idx < 0 || idx > 2) throw std::invalid_argument("network condition must be 1, 2 or 3");
    return NetworkCondition{level, ranges[static_cast<std::size_t>(idx)]};
}

void NetworkRegimes::validate() const {
    for (const auto& r : ranges) {
        if (r.low < 1 || r.high < r.low) throw std::invalid_argument("network regime: need 1 <= low <= high");
    }
    if (!(ranges[0].high < ranges[1].low && ranges[1].high < ranges[2].low)) {
        throw std::invalid_argument("network regimes must be ordered Best < Medium < Poor without overlap");
    }
}

BitsPerSecond user_count_rate(std::int64_t n_users, const RateCurve& curve) {
    if (n_users < 1) throw std::invalid_argument("user_count_rate: n_users must be >= 1");
    return curve.r_max * std::exp(-curve.alpha * static_cast<double>(n_users - 1));
}

std::int64_t sample_active_users(const NetworkCondition& cond, const FormationParams& formation, RngStream& rng) {
    const auto drawn = rng.uniform_int(cond.users.low, cond.users.high);
    return std::min<std::int64_t>(drawn, static_cast<std::int64_t>(formation.max_satellites));
}

}  // namespace satoff
