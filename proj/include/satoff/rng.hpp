#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace satoff {

/// Identifies one stochastic source. Each source draws from its own engine so
/// that, e.g., agent exploration never perturbs the environment's arrivals.
enum class StreamId : std::uint32_t {
    Arrivals = 1,
    ChannelUsers = 2,
    Breach = 3,
    Exploration = 4,
    ServiceTimes = 5,
    Routing = 6,
    Replay = 7,
    Init = 8,
};

std::string_view to_string(StreamId id);

/// SplitMix64 finalizer, used to derive engine seeds from (seed, stream).
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Deterministic random stream keyed by (seed, stream id).
class RngStream {
public:
    RngStream(std::uint64_t seed, StreamId stream);

    std::uint64_t seed() const { return seed_; }
    StreamId stream() const { return stream_; }

    /// Uniform on [0, 1).
    double uniform();
    double uniform(double lo, double hi);
    /// Uniform integer on the inclusive range [lo, hi].
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
    bool bernoulli(double p);
    double exponential(double mean);
    std::int64_t poisson(double mean);

    std::mt19937_64& engine() { return engine_; }

private:
    std::uint64_t seed_;
    StreamId stream_;
    std::mt19937_64 engine_;
};

/// Seed for the i-th child of a parent seed (episodes, Monte-Carlo runs).
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) {
    return splitmix64(parent ^ splitmix64(index + 0x5851f42d4c957f2dULL));
}

}  // namespace satoff
