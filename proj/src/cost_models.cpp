#include "satoff/cost_models.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>

namespace satoff {

void Job::validate() const {
    if (!(gamma > 0.0)) throw std::invalid_argument("Job: gamma must be > 0");
    if (!(data_bits > 0.0)) throw std::invalid_argument("Job: data_bits must be > 0");
    if (!(deadline > 0.0)) throw std::invalid_argument("Job: deadline must be > 0");
    if (!(security_demand >= 0.0 && security_demand <= 1.0)) {
        throw std::invalid_argument("Job: security_demand must lie in [0, 1]");
    }
}

void DeviceParams::validate() const {
    if (!(mips > 0.0)) throw std::invalid_argument("DeviceParams: mips must be > 0");
    if (cores < 1) throw std::invalid_argument("DeviceParams: cores must be >= 1");
    if (!(p_idle >= 0.0 && p_idle <= p_max)) throw std::invalid_argument("DeviceParams: need 0 <= p_idle <= p_max");
}

std::string_view to_string(Formation f) {
    switch (f) {
        case Formation::Trailing: return "Trailing";
        case Formation::Cluster: return "Cluster";
        case Formation::Constellation: return "Constellation";
    }
    return "?";
}

Formation formation_from_string(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "trailing") return Formation::Trailing;
    if (lower == "cluster" || lower == "swarm") return Formation::Cluster;
    if (lower == "constellation") return Formation::Constellation;
    throw std::invalid_argument("unknown formation '" + std::string(name) + "'");
}

FormationParams FormationParams::preset(Formation f) {
    switch (f) {
        case Formation::Trailing: return {Formation::Trailing, 0.5, 20};
        case Formation::Cluster: return {Formation::Cluster, 1.0, 50};
        case Formation::Constellation: return {Formation::Constellation, 2.0, 100};
    }
    throw std::invalid_argument("unknown formation");
}

Seconds local_exec_time(const Job& job, const DeviceParams& dev) {
    return job.instructions() / dev.mips;
}

Watts cpu_power(double utilisation, const DeviceParams& dev) {
    if (!(utilisation >= 0.0 && utilisation <= 1.0)) {
        throw std::invalid_argument("cpu_power: utilisation must lie in [0, 1]");
    }
    return utilisation * dev.p_max + (1.0 - utilisation) * dev.p_idle;
}

Joules local_energy(Seconds exec_time, double utilisation, const DeviceParams& dev) {
    if (exec_time < 0.0) throw std::invalid_argument("local_energy: negative exec_time");
    return cpu_power(utilisation, dev) * exec_time;
}

Seconds comm_time(double data_bits, BitsPerSecond rate) {
    if (!(rate > 0.0)) throw std::domain_error("comm_time: channel rate must be > 0");
    return data_bits / rate;
}

BitsPerSecond shannon_rate(std::size_t k, std::span<const Watts> powers, std::span<const double> gains,
                           double bandwidth_hz, Watts noise) {
    if (powers.size() != gains.size() || k >= powers.size()) {
        throw std::invalid_argument("shannon_rate: powers/gains size mismatch or k out of range");
    }
    if (!(noise > 0.0)) throw std::invalid_argument("shannon_rate: noise must be > 0");
    double interference = 0.0;
    for (std::size_t i = 0; i < powers.size(); ++i) {
        if (gains[i] < 0.0) throw std::invalid_argument("shannon_rate: negative gain");
        if (i != k) interference += gains[i] * powers[i];
    }
    return bandwidth_hz * std::log2(1.0 + gains[k] * powers[k] / (noise + interference));
}

Seconds remote_total_time(Seconds t_security, Seconds t_comm, Seconds t_wait) {
    if (t_security < 0.0 || t_comm < 0.0 || t_wait < 0.0) {
        throw std::invalid_argument("remote_total_time: components must be >= 0");
    }
    return t_security + t_comm + t_wait;
}

Joules offload_energy(Seconds t_comm, Seconds t_security, const FormationParams& formation,
                      const DeviceParams& dev) {
    if (t_comm < 0.0 || t_security < 0.0) throw std::invalid_argument("offload_energy: negative time");
    return formation.comm_power * t_comm + dev.p_max * t_security;
}

}  // namespace satoff
