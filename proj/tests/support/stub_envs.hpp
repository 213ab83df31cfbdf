#pragma once

#include <cstdint>
#include <optional>

#include "satoff/env.hpp"
#include "satoff/rng.hpp"

namespace satoff::testing {

/// Every step costs nothing; the observation never changes.
class ZeroCostEnv final : public Environment {
public:
    explicit ZeroCostEnv(int steps = 40) : steps_(steps) {}

    Observation reset(std::uint64_t) override {
        t_ = 0;
        return obs_;
    }
    StepResult step(const ActionVector&) override {
        ++t_;
        return {obs_, 0.0, done(), {}};
    }
    bool done() const override { return t_ >= steps_; }
    ObservationScale observation_scale() const override { return {{4.0, 4.0, 4.0, 4.0}}; }

private:
    Observation obs_{1, 1, 1, 1};
    int steps_;
    int t_ = 0;
};

/// Single-state two-armed bandit. Each step routes one decision with
/// Bernoulli(p_off): the local arm costs 1, the offload arm costs 0.
class BanditEnv final : public Environment {
public:
    explicit BanditEnv(int steps = 40) : steps_(steps) {}

    Observation reset(std::uint64_t seed) override {
        t_ = 0;
        rng_.emplace(seed, StreamId::Routing);
        return obs_;
    }
    StepResult step(const ActionVector& action) override {
        ++t_;
        last_offloaded_ = rng_->bernoulli(action.clamped().p_off);
        return {obs_, last_offloaded_ ? 0.0 : 1.0, done(), {}};
    }
    bool done() const override { return t_ >= steps_; }
    ObservationScale observation_scale() const override { return {{1.0, 1.0, 1.0, 1.0}}; }

    bool last_offloaded() const { return last_offloaded_; }

private:
    Observation obs_{0, 0, 1, 1};
    int steps_;
    int t_ = 0;
    bool last_offloaded_ = false;
    std::optional<RngStream> rng_;
};

}  // namespace satoff::testing
