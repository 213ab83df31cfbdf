#include "satoff/env.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace satoff {

ActionVector ActionVector::clamped() const {
    auto clamp01 = [](double x) { return std::clamp(std::isnan(x) ? 0.0 : x, 0.0, 1.0); };
    return ActionVector{clamp01(p_off), clamp01(sl_conf), clamp01(sl_int)};
}

std::array<double, 4> ObservationScale::features(const Observation& obs) const {
    return {static_cast<double>(obs.local_queue_len) / maxima[0], static_cast<double>(obs.server_queue_len) / maxima[1],
            static_cast<double>(obs.num_communicating) / maxima[2],
            static_cast<double>(obs.num_arrivals_last_slot) / maxima[3]};
}

void EpisodeMetrics::add(const SlotMetrics& s) {
    total_cost += s.cost;
    jobs_generated += s.arrivals;
    jobs_offloaded += s.offloaded;
    jobs_completed += s.completed;
    jobs_dropped += s.dropped();
    dropped_buffer += s.dropped_buffer;
    dropped_deadline += s.dropped_deadline;
    jobs_breached += s.breached;
    breached_conf += s.breached_conf;
    breached_int += s.breached_int;
    offloaded_completed += s.offloaded_completed;
    offloaded_completed_breached += s.offloaded_completed_breached;
    offloaded_completed_conf_breached += s.offloaded_completed_conf_breached;
    energy_joules += s.energy_joules;
    slots.push_back(s);
}

double per_job_cost(Seconds tau, Joules energy, double risk, bool missed_deadline, const CostWeights& w) {
    if (tau < 0.0 || energy < 0.0) throw std::invalid_argument("per_job_cost: tau and energy must be >= 0");
    return w.w_t * tau + w.w_e * energy + w.w_r * risk + (missed_deadline ? w.w_d : 0.0);
}

OffloadEnv::OffloadEnv(ScenarioConfig config)
    : config_(std::move(config)),
      cpu_(config_.satellite.cores, config_.buffers.cpu),
      transmit_(1, config_.buffers.transmit),
      server_(config_.server.cores, config_.buffers.server) {
    config_.validate();
}

ObservationScale OffloadEnv::observation_scale() const {
    ObservationScale s;
    s.maxima[0] = static_cast<double>(config_.satellite.cores + config_.buffers.cpu + 1 + config_.buffers.transmit);
    s.maxima[1] = static_cast<double>(config_.server.cores + config_.buffers.server);
    s.maxima[2] = static_cast<double>(config_.formation_params().max_satellites);
    s.maxima[3] = std::max(1.0, 3.0 * config_.job_rate * config_.slot_length);
    return s;
}

BitsPerSecond OffloadEnv::channel_rate() const {
    return user_count_rate(users_, config_.channel);
}

Observation OffloadEnv::reset(std::uint64_t seed) {
    sim_.reset();
    cpu_ = MultiServerQueue(config_.satellite.cores, config_.buffers.cpu);
    transmit_ = MultiServerQueue(1, config_.buffers.transmit);
    server_ = MultiServerQueue(config_.server.cores, config_.buffers.server);

    arrivals_rng_.emplace(seed, StreamId::Arrivals);
    routing_rng_.emplace(seed, StreamId::Routing);
    channel_rng_.emplace(seed, StreamId::ChannelUsers);
    breach_rng_.emplace(seed, StreamId::Breach);
    service_rng_.emplace(seed, StreamId::ServiceTimes);

    jobs_.clear();
    outcomes_.clear();
    next_job_ = 0;
    slot_ = 0;
    arrivals_last_slot_ = 0;
    metrics_ = EpisodeMetrics{};
    started_ = true;
    users_ = sample_active_users(config_.regimes.condition(config_.network_condition), config_.formation_params(),
                                 *channel_rng_);
    return observe();
}

Observation OffloadEnv::observe() const {
    return Observation{static_cast<std::int64_t>(cpu_.size() + transmit_.size()),
                       static_cast<std::int64_t>(server_.size()), users_, arrivals_last_slot_};
}

StepResult OffloadEnv::step(const ActionVector& action) {
    if (!started_) throw std::logic_error("OffloadEnv::step called before reset");
    if (done()) throw std::logic_error("OffloadEnv::step called after the episode finished");

    const ActionVector a = action.clamped();
    const SecurityLevel conf = config_.confidentiality.quantize(a.sl_conf);
    const SecurityLevel integ = config_.integrity.quantize(a.sl_int);

    const Seconds t0 = static_cast<double>(slot_) * config_.slot_length;
    const Seconds t1 = t0 + config_.slot_length;
    current_ = SlotMetrics{};
    current_.slot = slot_;

    const auto arrivals = sample_poisson_arrivals(config_.job_rate, config_.slot_length, *arrivals_rng_, t0);
    for (const Seconds t : arrivals) {
        const JobId id{next_job_++};
        JobState st;
        st.job = config_.make_job(t);
        st.route = routing_rng_->bernoulli(a.p_off) ? Route::Offload : Route::Local;
        if (st.route == Route::Offload) {
            st.conf = conf;
            st.integ = integ;
            ++current_.offloaded;
        }
        jobs_.emplace(to_index(id), std::move(st));
        sim_.schedule(t, EventKind::JobArrival, id);
        ++current_.arrivals;
    }
    sim_.schedule(t1, EventKind::SlotBoundary);
    sim_.run_until(t1, [this](const Event& ev) { handle(ev); });

    arrivals_last_slot_ = static_cast<std::int64_t>(arrivals.size());
    ++slot_;
    if (!done()) {
        users_ = sample_active_users(config_.regimes.condition(config_.network_condition),
                                     config_.formation_params(), *channel_rng_);
    }
    metrics_.add(current_);
    return StepResult{observe(), current_.cost, done(), current_};
}

void OffloadEnv::handle(const Event& ev) {
    if (!ev.job) return;
    const JobId id = *ev.job;
    switch (ev.kind) {
        case EventKind::JobArrival:
            on_arrival(id, ev.time);
            break;
        case EventKind::ServiceComplete: {
            const auto stage = jobs_.at(to_index(id)).stage;
            if (stage == Stage::LocalCpu) {
                on_local_complete(id, ev.time);
            } else {
                on_server_complete(id, ev.time);
            }
            break;
        }
        case EventKind::TransmitComplete:
            on_transmit_complete(id, ev.time);
            break;
        case EventKind::ServiceStart:
        case EventKind::SlotBoundary:
            break;
    }
}

bool OffloadEnv::within_deadline(JobId id, Seconds now) const {
    const auto& job = jobs_.at(to_index(id)).job;
    return now - job.arrival_time <= job.deadline;
}

void OffloadEnv::begin_local(const ServiceStart& start) {
    auto& st = jobs_.at(to_index(start.job));
    const double u = static_cast<double>(cpu_.busy_servers()) / static_cast<double>(cpu_.num_servers());
    st.energy += local_energy(start.completion - start.start, u, config_.satellite);
    sim_.schedule(start.completion, EventKind::ServiceComplete, start.job);
}

void OffloadEnv::on_arrival(JobId id, Seconds now) {
    auto& st = jobs_.at(to_index(id));
    const bool det = config_.deterministic_service;
    if (st.route == Route::Local) {
        st.stage = Stage::LocalCpu;
        const Seconds service = sample_service_time(local_exec_time(st.job, config_.satellite), det, *service_rng_);
        const auto r = cpu_.enqueue(id, service, now);
        if (r.admission == Admission::RejectedFull) {
            terminate(id, JobFate::LostBuffer, now);
        } else if (r.started) {
            begin_local(*r.started);
        }
        return;
    }

    st.stage = Stage::Transmit;
    const Seconds t_sec = security_time(st.job.data_bits, st.conf, st.integ);
    const Seconds t_comm = comm_time(st.job.data_bits, channel_rate());
    const Seconds nominal = t_sec + t_comm;
    const Seconds actual = sample_service_time(nominal, det, *service_rng_);
    const double factor = actual / nominal;
    st.t_security = t_sec * factor;
    st.t_comm = t_comm * factor;
    const auto r = transmit_.enqueue(id, actual, now);
    if (r.admission == Admission::RejectedFull) {
        terminate(id, JobFate::LostBuffer, now);
    } else if (r.started) {
        sim_.schedule(r.started->completion, EventKind::TransmitComplete, id);
    }
}

void OffloadEnv::process_completion(MultiServerQueue& queue, JobId id, Seconds now, EventKind next_kind) {
    const auto result =
        queue.on_service_complete(id, now, [this](JobId waiting, Seconds t) { return within_deadline(waiting, t); });
    for (const JobId expired : result.expired) terminate(expired, JobFate::MissedDeadline, now);
    if (!result.started) return;
    if (&queue == &cpu_) {
        begin_local(*result.started);
    } else {
        sim_.schedule(result.started->completion, next_kind, result.started->job);
    }
}

void OffloadEnv::on_local_complete(JobId id, Seconds now) {
    process_completion(cpu_, id, now, EventKind::ServiceComplete);
    terminate(id, within_deadline(id, now) ? JobFate::Completed : JobFate::MissedDeadline, now);
}

void OffloadEnv::on_transmit_complete(JobId id, Seconds now) {
    process_completion(transmit_, id, now, EventKind::TransmitComplete);

    auto& st = jobs_.at(to_index(id));
    st.energy += offload_energy(st.t_comm, st.t_security, config_.formation_params(), config_.satellite);

    const double sd = st.job.security_demand;
    const double p_conf = breach_probability(sd, st.conf.level, config_.risk.lambda_conf);
    const double p_int = breach_probability(sd, st.integ.level, config_.risk.lambda_int);
    st.conf_breached = sample_breach(p_conf, *breach_rng_) == BreachOutcome::Breached;
    st.int_breached = sample_breach(p_int, *breach_rng_) == BreachOutcome::Breached;
    if (config_.expected_risk_cost) {
        st.risk = combined_risk(p_conf, p_int);
    } else {
        st.risk = (st.conf_breached || st.int_breached) ? 1.0 : 0.0;
    }

    if (!within_deadline(id, now)) {
        terminate(id, JobFate::MissedDeadline, now);
        return;
    }
    st.stage = Stage::Server;
    const Seconds service =
        sample_service_time(local_exec_time(st.job, config_.server), config_.deterministic_service, *service_rng_);
    const auto r = server_.enqueue(id, service, now);
    if (r.admission == Admission::RejectedFull) {
        terminate(id, JobFate::LostBuffer, now);
    } else if (r.started) {
        sim_.schedule(r.started->completion, EventKind::ServiceComplete, id);
    }
}

void OffloadEnv::on_server_complete(JobId id, Seconds now) {
    process_completion(server_, id, now, EventKind::ServiceComplete);
    terminate(id, within_deadline(id, now) ? JobFate::Completed : JobFate::MissedDeadline, now);
}

void OffloadEnv::terminate(JobId id, JobFate fate, Seconds now) {
    auto it = jobs_.find(to_index(id));
    if (it == jobs_.end()) throw std::logic_error("OffloadEnv: terminating an unknown job");
    const JobState& st = it->second;

    JobOutcome out;
    out.id = id;
    out.route = st.route;
    out.fate = fate;
    out.slot = slot_;
    out.arrival = st.job.arrival_time;
    out.tau = now - st.job.arrival_time;
    out.energy = st.energy;
    out.risk_charged = st.risk;
    out.conf_breached = st.conf_breached;
    out.int_breached = st.int_breached;
    out.breached = st.conf_breached || st.int_breached;
    out.cost = per_job_cost(out.tau, out.energy, out.risk_charged, fate != JobFate::Completed, config_.weights);

    current_.cost += out.cost;
    current_.energy_joules += out.energy;
    switch (fate) {
        case JobFate::Completed: ++current_.completed; break;
        case JobFate::MissedDeadline: ++current_.dropped_deadline; break;
        case JobFate::LostBuffer: ++current_.dropped_buffer; break;
    }
    if (out.breached) ++current_.breached;
    if (out.conf_breached) ++current_.breached_conf;
    if (out.int_breached) ++current_.breached_int;
    if (st.route == Route::Offload && fate == JobFate::Completed) {
        ++current_.offloaded_completed;
        if (out.breached) ++current_.offloaded_completed_breached;
        if (out.conf_breached) ++current_.offloaded_completed_conf_breached;
    }
    outcomes_.push_back(out);
    jobs_.erase(it);
}

}  // namespace satoff
