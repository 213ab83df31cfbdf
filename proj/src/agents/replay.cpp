#include "satoff/agents/replay.hpp"

#include <algorithm>
#include <stdexcept>

namespace satoff::agents {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) throw std::invalid_argument("ReplayBuffer: capacity must be > 0");
    items_.reserve(std::min<std::size_t>(capacity, 1 << 16));
}

void ReplayBuffer::push(Transition t) {
    if (items_.size() < capacity_) {
        items_.push_back(std::move(t));
    } else {
        items_[next_] = std::move(t);
    }
    next_ = (next_ + 1) % capacity_;
}

std::vector<std::size_t> ReplayBuffer::sample_indices(std::size_t batch, RngStream& rng) const {
    if (items_.empty()) throw std::logic_error("ReplayBuffer: sampling from an empty buffer");
    std::vector<std::size_t> out(batch);
    const auto hi = static_cast<std::int64_t>(items_.size()) - 1;
    for (auto& i : out) i = static_cast<std::size_t>(rng.uniform_int(0, hi));
    return out;
}

double ExplorationSchedule::epsilon(int episode) const {
    if (decay_episodes <= 0 || episode >= decay_episodes) return end;
    const double frac = static_cast<double>(std::max(episode, 0)) / decay_episodes;
    return start + (end - start) * frac;
}

}  // namespace satoff::agents
