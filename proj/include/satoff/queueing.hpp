#pragma once

#include <cstddef>
#include <deque>
#include <functional>
#include <optional>
#include <unordered_map>
#include <vector>

#include "satoff/sim.hpp"

namespace satoff {

enum class Admission { Accepted, RejectedFull };

struct ServiceStart {
    JobId job;
    Seconds start = 0.0;
    Seconds completion = 0.0;
};

struct EnqueueResult {
    Admission admission = Admission::RejectedFull;
    /// Set when a server was free and service began immediately.
    std::optional<ServiceStart> started;
};

struct CompletionResult {
    std::optional<ServiceStart> started;
    /// Head-of-line jobs discarded by the admission predicate before one started.
    std::vector<JobId> expired;
};

struct QueueStats {
    std::size_t arrived = 0;
    std::size_t completed = 0;
    std::size_t rejected_full = 0;
    std::size_t expired = 0;
    std::size_t present = 0;
    Seconds mean_waiting_time = 0.0;
    Seconds mean_sojourn_time = 0.0;
    double time_avg_queue_len = 0.0;   // jobs in system (waiting + in service)
    double time_avg_waiting_len = 0.0;
};

/// Finite-buffer FCFS queue with `num_servers` identical servers and no
/// preemption. `buffer_capacity` bounds the waiting room only.
class MultiServerQueue {
public:
    /// Decides at service start whether a waiting job is still worth serving.
    using AdmitFn = std::function<bool(JobId, Seconds now)>;

    MultiServerQueue(std::size_t num_servers, std::size_t buffer_capacity);

    EnqueueResult enqueue(JobId job, Seconds service_time, Seconds now);

    /// Frees the server held by `job` and starts the next admissible waiting job.
    CompletionResult on_service_complete(JobId job, Seconds now, const AdmitFn& admit = {});

    std::size_t num_servers() const { return num_servers_; }
    std::size_t buffer_capacity() const { return buffer_capacity_; }
    std::size_t busy_servers() const { return in_service_.size(); }
    std::size_t waiting_count() const { return waiting_.size(); }
    std::size_t size() const { return waiting_.size() + in_service_.size(); }
    bool in_service(JobId job) const { return in_service_.contains(to_index(job)); }

    /// Jobs in the order they began service (for FCFS checks).
    const std::vector<JobId>& start_order() const { return start_order_; }

    QueueStats stats(Seconds now) const;

private:
    struct Waiting {
        JobId job;
        Seconds service_time;
        Seconds enqueued;
    };
    struct InService {
        Seconds enqueued;
        Seconds completion;
    };

    ServiceStart begin(JobId job, Seconds service_time, Seconds enqueued, Seconds now);
    void advance_area(Seconds now);

    std::size_t num_servers_;
    std::size_t buffer_capacity_;
    std::deque<Waiting> waiting_;
    std::unordered_map<std::uint64_t, InService> in_service_;
    std::vector<JobId> start_order_;

    std::size_t arrived_ = 0;
    std::size_t completed_ = 0;
    std::size_t rejected_full_ = 0;
    std::size_t expired_ = 0;
    std::size_t started_ = 0;
    double total_wait_ = 0.0;
    double total_sojourn_ = 0.0;
    double area_system_ = 0.0;
    double area_waiting_ = 0.0;
    Seconds last_change_ = 0.0;
};

/// Offered load per server: arrival_rate / (num_servers * service_rate).
double utilisation(double arrival_rate, std::size_t num_servers, double service_rate);

/// Service time for one job whose nominal (closed-form) time is `mean`:
/// exactly `mean` when deterministic, otherwise exponential with that mean.
/// Mixing job classes with different means then yields a hyper-exponential.
Seconds sample_service_time(Seconds mean, bool deterministic, RngStream& rng);

}  // namespace satoff
