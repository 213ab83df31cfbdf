#include "satoff/sim.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace satoff {

Event Simulator::schedule(Seconds time, EventKind kind, std::optional<JobId> job) {
    if (!(time >= clock_)) {
        std::ostringstream msg;
        msg << "Simulator::schedule: event at t=" << time << " is before the clock (t=" << clock_ << ")";
        throw std::logic_error(msg.str());
    }
    Event ev{time, kind, job, next_sequence_++};
    pending_.push(ev);
    return ev;
}

void Simulator::run_until(Seconds t_end, const Handler& handler) {
    if (t_end < clock_) throw std::logic_error("Simulator::run_until: t_end before the clock");
    while (!pending_.empty() && pending_.top().time <= t_end) {
        Event ev = pending_.top();
        pending_.pop();
        clock_ = ev.time;
        if (tracing_) trace_.push_back(ev);
        if (handler) handler(ev);
    }
    clock_ = t_end;
}

void Simulator::reset() {
    clock_ = 0.0;
    next_sequence_ = 0;
    pending_ = {};
    trace_.clear();
}

std::vector<Seconds> sample_poisson_arrivals(double rate, Seconds slot, RngStream& rng, Seconds slot_start) {
    if (rate < 0.0 || slot <= 0.0) throw std::invalid_argument("sample_poisson_arrivals: need rate >= 0 and slot > 0");
    const auto count = rng.poisson(rate * slot);
    std::vector<Seconds> times;
    times.reserve(static_cast<std::size_t>(count));
    for (std::int64_t i = 0; i < count; ++i) times.push_back(slot_start + rng.uniform() * slot);
    std::sort(times.begin(), times.end());
    return times;
}

}  // namespace satoff
