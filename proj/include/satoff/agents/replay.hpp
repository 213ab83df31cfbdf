#pragma once

#include <cstddef>
#include <vector>

#include "satoff/env.hpp"
#include "satoff/rng.hpp"

namespace satoff::agents {

struct Transition {
    Observation observation;
    ActionVector action;
    int action_index = -1;  // grid index for discrete agents
    double cost = 0.0;
    Observation next_observation;
    bool done = false;
};

/// Fixed-capacity ring of transitions with uniform sampling (with replacement).
class ReplayBuffer {
public:
    explicit ReplayBuffer(std::size_t capacity);

    void push(Transition t);
    std::size_t size() const { return items_.size(); }
    std::size_t capacity() const { return capacity_; }
    bool empty() const { return items_.empty(); }
    const Transition& at(std::size_t i) const { return items_.at(i); }

    std::vector<std::size_t> sample_indices(std::size_t batch, RngStream& rng) const;

private:
    std::size_t capacity_;
    std::size_t next_ = 0;
    std::vector<Transition> items_;
};

/// Linear epsilon decay from `start` to `end` over `decay_episodes`, then flat.
struct ExplorationSchedule {
    double start = 1.0;
    double end = 0.05;
    int decay_episodes = 500;

    double epsilon(int episode) const;
};

}  // namespace satoff::agents
