#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "satoff/config.hpp"
#include "satoff/queueing.hpp"
#include "satoff/sim.hpp"

namespace satoff {

/// What the offloading satellite sees at the start of a decision slot.
struct Observation {
    std::int64_t local_queue_len = 0;   // jobs held by the satellite (CPU + transmit pipeline)
    std::int64_t server_queue_len = 0;  // jobs at the server
    std::int64_t num_communicating = 0; // active channel users for the coming slot
    std::int64_t num_arrivals_last_slot = 0;

    bool operator==(const Observation&) const = default;
};

/// [p_off, sl_conf, sl_int]; every component is clamped to [0, 1] before use.
struct ActionVector {
    double p_off = 0.0;
    double sl_conf = 0.0;
    double sl_int = 0.0;

    ActionVector clamped() const;
    bool operator==(const ActionVector&) const = default;
};

/// Divides each observation component by a fixed maximum.
struct ObservationScale {
    std::array<double, 4> maxima{1.0, 1.0, 1.0, 1.0};

    std::array<double, 4> features(const Observation& obs) const;
};

/// Counters accumulated over a slot or a whole episode.
struct SlotMetrics {
    int slot = 0;
    double cost = 0.0;
    std::size_t arrivals = 0;
    std::size_t offloaded = 0;
    std::size_t completed = 0;
    std::size_t dropped_buffer = 0;
    std::size_t dropped_deadline = 0;
    std::size_t breached = 0;
    std::size_t breached_conf = 0;
    std::size_t breached_int = 0;
    std::size_t offloaded_completed = 0;
    std::size_t offloaded_completed_breached = 0;
    std::size_t offloaded_completed_conf_breached = 0;
    double energy_joules = 0.0;

    std::size_t dropped() const { return dropped_buffer + dropped_deadline; }
    bool operator==(const SlotMetrics&) const = default;
};

struct EpisodeMetrics {
    double total_cost = 0.0;
    std::size_t jobs_generated = 0;
    std::size_t jobs_offloaded = 0;
    std::size_t jobs_completed = 0;
    std::size_t jobs_dropped = 0;  // deadline misses plus buffer losses
    std::size_t dropped_buffer = 0;
    std::size_t dropped_deadline = 0;
    std::size_t jobs_breached = 0;
    std::size_t breached_conf = 0;
    std::size_t breached_int = 0;
    std::size_t offloaded_completed = 0;
    std::size_t offloaded_completed_breached = 0;
    std::size_t offloaded_completed_conf_breached = 0;
    double energy_joules = 0.0;
    std::vector<SlotMetrics> slots;

    void add(const SlotMetrics& slot);
    bool operator==(const EpisodeMetrics&) const = default;
};

struct StepResult {
    Observation observation;
    double cost = 0.0;
    bool done = false;
    SlotMetrics info;

    double reward() const { return -cost; }
};

/// Slot-stepped decision process. Cost is minimised; reward() is its negative.
class Environment {
public:
    virtual ~Environment() = default;

    virtual Observation reset(std::uint64_t seed) = 0;
    virtual StepResult step(const ActionVector& action) = 0;
    virtual bool done() const = 0;
    virtual ObservationScale observation_scale() const = 0;
};

/// w_t * tau + w_e * energy + w_r * risk + w_d * [missed].
double per_job_cost(Seconds tau, Joules energy, double risk, bool missed_deadline, const CostWeights& w);

enum class Route : std::uint8_t { Local, Offload };
enum class JobFate : std::uint8_t { Completed, MissedDeadline, LostBuffer };

/// Ledger entry written when a job leaves the system.
struct JobOutcome {
    JobId id{};
    Route route = Route::Local;
    JobFate fate = JobFate::Completed;
    int slot = 0;  // slot in which the job left
    Seconds arrival = 0.0;
    Seconds tau = 0.0;
    Joules energy = 0.0;
    double risk_charged = 0.0;
    bool breached = false;
    bool conf_breached = false;
    bool int_breached = false;
    double cost = 0.0;
};

/// Satellite CPU, transmit pipeline and server CPU driven by the event kernel.
///
/// Each step covers one slot: arrivals are sampled, each job is routed to the
/// server with probability p_off, and offloaded jobs are secured at the
/// quantised levels before transmission at the slot's channel rate. A job
/// leaves the system when it completes, misses its deadline (checked at every
/// service start and completion) or meets a full buffer. Jobs still in flight
/// when the episode ends are not charged.
class OffloadEnv final : public Environment {
public:
    explicit OffloadEnv(ScenarioConfig config);

    Observation reset(std::uint64_t seed) override;
    StepResult step(const ActionVector& action) override;
    bool done() const override { return slot_ >= config_.episode_slots; }
    ObservationScale observation_scale() const override;

    const ScenarioConfig& config() const { return config_; }
    const EpisodeMetrics& metrics() const { return metrics_; }
    const std::vector<JobOutcome>& outcomes() const { return outcomes_; }
    const Simulator& simulator() const { return sim_; }
    void set_tracing(bool on) { sim_.set_tracing(on); }

    int slot() const { return slot_; }
    std::int64_t active_users() const { return users_; }
    BitsPerSecond channel_rate() const;
    std::size_t jobs_in_flight() const { return jobs_.size(); }

    const MultiServerQueue& cpu_queue() const { return cpu_; }
    const MultiServerQueue& transmit_queue() const { return transmit_; }
    const MultiServerQueue& server_queue() const { return server_; }

private:
    enum class Stage : std::uint8_t { Arriving, LocalCpu, Transmit, Server };

    struct JobState {
        Job job;
        Route route = Route::Local;
        Stage stage = Stage::Arriving;
        SecurityLevel conf;
        SecurityLevel integ;
        Seconds t_security = 0.0;
        Seconds t_comm = 0.0;
        Joules energy = 0.0;
        double risk = 0.0;
        bool conf_breached = false;
        bool int_breached = false;
    };

    void handle(const Event& ev);
    void on_arrival(JobId id, Seconds now);
    void on_local_complete(JobId id, Seconds now);
    void on_transmit_complete(JobId id, Seconds now);
    void on_server_complete(JobId id, Seconds now);
    void begin_local(const ServiceStart& start);
    void process_completion(MultiServerQueue& queue, JobId id, Seconds now, EventKind next_kind);
    void terminate(JobId id, JobFate fate, Seconds now);
    bool within_deadline(JobId id, Seconds now) const;
    Observation observe() const;

    ScenarioConfig config_;
    Simulator sim_;
    MultiServerQueue cpu_;
    MultiServerQueue transmit_;
    MultiServerQueue server_;

    std::optional<RngStream> arrivals_rng_;
    std::optional<RngStream> routing_rng_;
    std::optional<RngStream> channel_rng_;
    std::optional<RngStream> breach_rng_;
    std::optional<RngStream> service_rng_;

    std::unordered_map<std::uint64_t, JobState> jobs_;
    std::uint64_t next_job_ = 0;
    int slot_ = 0;
    bool started_ = false;
    std::int64_t users_ = 0;
    std::int64_t arrivals_last_slot_ = 0;
    SlotMetrics current_;
    EpisodeMetrics metrics_;
    std::vector<JobOutcome> outcomes_;
};

}  // namespace satoff
