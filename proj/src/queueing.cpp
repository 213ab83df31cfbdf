#include "satoff/queueing.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace satoff {

MultiServerQueue::MultiServerQueue(std::size_t num_servers, std::size_t buffer_capacity)
    : num_servers_(num_servers), buffer_capacity_(buffer_capacity) {
    if (num_servers == 0) throw std::invalid_argument("MultiServerQueue: need at least one server");
}

void MultiServerQueue::advance_area(Seconds now) {
    if (now > last_change_) {
        const double dt = now - last_change_;
        area_system_ += dt * static_cast<double>(size());
        area_waiting_ += dt * static_cast<double>(waiting_.size());
        last_change_ = now;
    }
}

ServiceStart MultiServerQueue::begin(JobId job, Seconds service_time, Seconds enqueued, Seconds now) {
    const Seconds completion = now + service_time;
    in_service_.emplace(to_index(job), InService{enqueued, completion});
    start_order_.push_back(job);
    ++started_;
    total_wait_ += now - enqueued;
    return ServiceStart{job, now, completion};
}

EnqueueResult MultiServerQueue::enqueue(JobId job, Seconds service_time, Seconds now) {
    if (!(service_time > 0.0)) throw std::invalid_argument("MultiServerQueue::enqueue: service_time must be > 0");
    if (in_service_.contains(to_index(job))) {
        throw std::logic_error("MultiServerQueue::enqueue: duplicate job id " + std::to_string(to_index(job)));
    }
    for (const auto& w : waiting_) {
        if (w.job == job) {
            throw std::logic_error("MultiServerQueue::enqueue: duplicate job id " + std::to_string(to_index(job)));
        }
    }
    advance_area(now);
    ++arrived_;
    if (in_service_.size() < num_servers_) {
        return EnqueueResult{Admission::Accepted, begin(job, service_time, now, now)};
    }
    if (waiting_.size() < buffer_capacity_) {
        waiting_.push_back(Waiting{job, service_time, now});
        return EnqueueResult{Admission::Accepted, std::nullopt};
    }
    ++rejected_full_;
    return EnqueueResult{Admission::RejectedFull, std::nullopt};
}

CompletionResult MultiServerQueue::on_service_complete(JobId job, Seconds now, const AdmitFn& admit) {
    auto it = in_service_.find(to_index(job));
    if (it == in_service_.end()) {
        throw std::logic_error("MultiServerQueue::on_service_complete: job " + std::to_string(to_index(job)) +
                               " is not in service");
    }
    advance_area(now);
    total_sojourn_ += now - it->second.enqueued;
    in_service_.erase(it);
    ++completed_;

    CompletionResult result;
    while (!waiting_.empty()) {
        const Waiting head = waiting_.front();
        waiting_.pop_front();
        if (admit && !admit(head.job, now)) {
            ++expired_;
            result.expired.push_back(head.job);
            continue;
        }
        result.started = begin(head.job, head.service_time, head.enqueued, now);
        break;
    }
    return result;
}

QueueStats MultiServerQueue::stats(Seconds now) const {
    QueueStats s;
    s.arrived = arrived_;
    s.completed = completed_;
    s.rejected_full = rejected_full_;
    s.expired = expired_;
    s.present = size();
    s.mean_waiting_time = started_ > 0 ? total_wait_ / static_cast<double>(started_) : 0.0;
    s.mean_sojourn_time = completed_ > 0 ? total_sojourn_ / static_cast<double>(completed_) : 0.0;
    double area_sys = area_system_;
    double area_wait = area_waiting_;
    if (now > last_change_) {
        area_sys += (now - last_change_) * static_cast<double>(size());
        area_wait += (now - last_change_) * static_cast<double>(waiting_.size());
    }
    if (now > 0.0) {
        s.time_avg_queue_len = area_sys / now;
        s.time_avg_waiting_len = area_wait / now;
    }
    return s;
}

double utilisation(double arrival_rate, std::size_t num_servers, double service_rate) {
    if (num_servers < 1 || !(service_rate > 0.0)) {
        throw std::invalid_argument("utilisation: need num_servers >= 1 and service_rate > 0");
    }
    return arrival_rate / (static_cast<double>(num_servers) * service_rate);
}

Seconds sample_service_time(Seconds mean, bool deterministic, RngStream& rng) {
    if (deterministic) return mean;
    // exponential_distribution may return exactly zero; queues require > 0.
    return std::max(rng.exponential(mean), std::numeric_limits<double>::min());
}

}  // namespace satoff
