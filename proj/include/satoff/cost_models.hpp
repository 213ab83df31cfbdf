#pragma once

#include <span>
#include <string>
#include <string_view>

#include "satoff/sim.hpp"

namespace satoff {

using Watts = double;
using Joules = double;
using BitsPerSecond = double;

/// One offloadable unit of work.
struct Job {
    double gamma = 1562.5;        // compute cycles per bit
    double data_bits = 1.6e6;     // D
    Seconds deadline = 5.0;       // tau_d
    double security_demand = 0.1; // SD in [0, 1]
    Seconds arrival_time = 0.0;

    double instructions() const { return gamma * data_bits; }
    void validate() const;
};

struct DeviceParams {
    double mips = 2.5e9;  // instructions per second
    std::size_t cores = 4;
    Watts p_idle = 0.1;
    Watts p_max = 5.0;

    void validate() const;
};

enum class Formation { Trailing, Cluster, Constellation };

std::string_view to_string(Formation f);
/// Case-insensitive; "Swarm" is accepted as an alias for Cluster.
Formation formation_from_string(std::string_view name);

struct FormationParams {
    Formation name = Formation::Cluster;
    Watts comm_power = 1.0;
    std::size_t max_satellites = 50;

    static FormationParams preset(Formation f);
};

/// gamma * D / mips.
Seconds local_exec_time(const Job& job, const DeviceParams& dev);

/// u * P_max + (1 - u) * P_idle; throws std::invalid_argument for u outside [0, 1].
Watts cpu_power(double utilisation, const DeviceParams& dev);

Joules local_energy(Seconds exec_time, double utilisation, const DeviceParams& dev);

/// D / rate. A non-positive rate means the channel is unusable and throws
/// std::domain_error; callers treat the job as undeliverable.
Seconds comm_time(double data_bits, BitsPerSecond rate);

/// Shannon rate of user `k` with every other user treated as interference.
BitsPerSecond shannon_rate(std::size_t k, std::span<const Watts> powers, std::span<const double> gains,
                           double bandwidth_hz, Watts noise);

/// tau_security + tau_comm + tau_wait, where tau_wait already covers server
/// queueing and execution.
Seconds remote_total_time(Seconds t_security, Seconds t_comm, Seconds t_wait);

/// Transmit energy at the formation's radio power plus security processing
/// at full CPU power.
Joules offload_energy(Seconds t_comm, Seconds t_security, const FormationParams& formation,
                      const DeviceParams& dev);

}  // namespace satoff
