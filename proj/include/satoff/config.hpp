#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "satoff/channel.hpp"
#include "satoff/cost_models.hpp"
#include "satoff/security.hpp"

namespace satoff {

/// Raised for any invalid or unparsable scenario/experiment configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CostWeights {
    double w_t = 1.0;
    double w_e = 1.0;
    double w_r = 10.0;
    double w_d = 10.0;
};

struct BufferSizes {
    std::size_t cpu = 20;
    std::size_t transmit = 20;
    std::size_t server = 10;
};

/// Everything needed to build an environment. Defaults reproduce the
/// baseline setting: 3 jobs/s, 0.2 MB jobs taking 1 s locally, best network,
/// lowest risk level, Cluster formation.
struct ScenarioConfig {
    double job_rate = 3.0;
    double data_size_multiplier = 1.0;
    double base_data_bits = 1.6e6;
    double gamma = 1562.5;
    Seconds deadline = 5.0;
    NetworkLevel network_condition = NetworkLevel::Best;
    double security_demand = 0.1;
    Formation formation = Formation::Cluster;

    CostWeights weights;
    BufferSizes buffers;
    DeviceParams satellite{2.5e9, 4, 0.1, 5.0};
    DeviceParams server{5.0e9, 16, 0.1, 5.0};
    RateCurve channel;
    NetworkRegimes regimes;
    RiskParams risk;
    SecurityTable confidentiality = SecurityTable::confidentiality();
    SecurityTable integrity = SecurityTable::integrity();

    int episode_slots = 40;
    Seconds slot_length = 1.0;
    /// Service times equal their closed-form values; when false each job
    /// class is exponential with that mean.
    bool deterministic_service = true;
    /// Charge the breach probability instead of the sampled breach indicator.
    bool expected_risk_cost = false;

    double data_bits() const { return base_data_bits * data_size_multiplier; }
    FormationParams formation_params() const { return FormationParams::preset(formation); }
    Job make_job(Seconds arrival) const;

    /// Throws ConfigError with a descriptive message.
    void validate() const;

    nlohmann::json to_json() const;
    /// Missing keys keep their defaults; unknown keys are rejected.
    static ScenarioConfig from_json(const nlohmann::json& j);
    static ScenarioConfig load(const std::filesystem::path& path);
};

}  // namespace satoff
