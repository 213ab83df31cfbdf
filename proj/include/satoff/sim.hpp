#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <vector>

#include "satoff/rng.hpp"

namespace satoff {

using Seconds = double;

enum class JobId : std::uint64_t {};

constexpr std::uint64_t to_index(JobId id) { return static_cast<std::uint64_t>(id); }

enum class EventKind : std::uint8_t {
    JobArrival,
    ServiceStart,
    ServiceComplete,
    TransmitComplete,
    SlotBoundary,
};

struct Event {
    Seconds time = 0.0;
    EventKind kind = EventKind::SlotBoundary;
    std::optional<JobId> job;
    std::uint64_t sequence = 0;

    bool operator==(const Event&) const = default;
};

/// Event-driven kernel with a virtual clock. Dispatch order is the
/// lexicographic (time, sequence) order; sequence numbers are assigned at
/// scheduling time, so equal-time events dispatch in insertion order.
class Simulator {
public:
    using Handler = std::function<void(const Event&)>;

    Seconds now() const { return clock_; }
    bool empty() const { return pending_.empty(); }
    std::size_t pending() const { return pending_.size(); }

    /// Schedules an event and returns it with its assigned sequence number.
    /// Throws std::logic_error when `time` lies before the clock.
    Event schedule(Seconds time, EventKind kind, std::optional<JobId> job = std::nullopt);

    /// Dispatches every pending event with time <= t_end, then sets the
    /// clock to t_end. Handlers may schedule further events.
    void run_until(Seconds t_end, const Handler& handler);

    /// Dispatch history, recorded only while tracing is enabled.
    void set_tracing(bool on) { tracing_ = on; }
    bool tracing() const { return tracing_; }
    const std::vector<Event>& trace() const { return trace_; }

    /// Clears the clock, pending events and trace; keeps the tracing flag.
    void reset();

private:
    struct Later {
        bool operator()(const Event& a, const Event& b) const {
            if (a.time != b.time) return a.time > b.time;
            return a.sequence > b.sequence;
        }
    };

    Seconds clock_ = 0.0;
    std::uint64_t next_sequence_ = 0;
    std::priority_queue<Event, std::vector<Event>, Later> pending_;
    bool tracing_ = false;
    std::vector<Event> trace_;
};

/// Poisson arrivals within one slot starting at `slot_start`: the count is
/// Poisson(rate * slot) and the times are uniform within the slot, sorted.
std::vector<Seconds> sample_poisson_arrivals(double rate, Seconds slot, RngStream& rng,
                                             Seconds slot_start = 0.0);

}  // namespace satoff
