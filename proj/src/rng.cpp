#include "satoff/rng.hpp"

#include <stdexcept>

namespace satoff {

std::string_view to_string(StreamId id) {
    switch (id) {
        case StreamId::Arrivals: return "arrivals";
        case StreamId::ChannelUsers: return "channel_users";
        case StreamId::Breach: return "breach";
        case StreamId::Exploration: return "exploration";
        case StreamId::ServiceTimes: return "service_times";
        case StreamId::Routing: return "routing";
        case StreamId::Replay: return "replay";
        case StreamId::Init: return "init";
    }
    return "unknown";
}

RngStream::RngStream(std::uint64_t seed, StreamId stream)
    : seed_(seed),
      stream_(stream),
      engine_(splitmix64(splitmix64(seed) ^ (static_cast<std::uint64_t>(stream) * 0xd1342543de82ef95ULL))) {}

double RngStream::uniform() {
    return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
}

double RngStream::uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

std::int64_t RngStream::uniform_int(std::int64_t lo, std::int64_t hi) {
    if (hi < lo) throw std::invalid_argument("uniform_int: empty range");
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(engine_);
}

bool RngStream::bernoulli(double p) {
    // Always consume exactly one draw so stream alignment does not depend on p.
    const double u = uniform();
    return u < p;
}

double RngStream::exponential(double mean) {
    if (mean <= 0.0) return 0.0;
    return std::exponential_distribution<double>(1.0 / mean)(engine_);
}

std::int64_t RngStream::poisson(double mean) {
    if (mean <= 0.0) return 0;
    return std::poisson_distribution<std::int64_t>(mean)(engine_);
}

}  // namespace satoff
