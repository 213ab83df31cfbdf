#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "satoff/rng.hpp"
#include "satoff/sim.hpp"

namespace satoff {

/// One protection algorithm: relative strength in (0, 1] and throughput in Mb/s.
struct SecurityLevel {
    std::string name;
    double level = 0.0;
    double rate_mbps = 0.0;

    /// Level 0 with infinite throughput: data is sent unprotected.
    static SecurityLevel none();
    bool is_none() const { return level == 0.0; }

    bool operator==(const SecurityLevel&) const = default;
};

/// Algorithms ordered by ascending level; stronger means slower.
class SecurityTable {
public:
    SecurityTable() = default;
    /// Sorts by level and enforces strictly increasing level with strictly
    /// decreasing rate.
    explicit SecurityTable(std::vector<SecurityLevel> entries);

    static SecurityTable confidentiality();  // RC4, AES, Blowfish, DES, IDEA
    static SecurityTable integrity();        // MD5, RipeMD128, SHA-1, RipeMD160, TIGER

    /// Array of {"name", "level", "rate_mbps"} objects.
    static SecurityTable from_json(const nlohmann::json& j);
    static SecurityTable load(const std::filesystem::path& path);
    nlohmann::json to_json() const;

    const std::vector<SecurityLevel>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }

    /// Smallest table entry whose level is >= raw; raw == 0 selects no
    /// protection. Raw values above the strongest level saturate to it.
    SecurityLevel quantize(double raw) const;

private:
    std::vector<SecurityLevel> entries_;
};

inline SecurityLevel quantize_level(double raw, const SecurityTable& table) { return table.quantize(raw); }

/// Encryption plus hashing time for `data_bits`, applied serially.
Seconds security_time(double data_bits, double conf_rate_mbps, double int_rate_mbps);
Seconds security_time(double data_bits, const SecurityLevel& conf, const SecurityLevel& integ);

struct RiskParams {
    double lambda_conf = 3.0;
    double lambda_int = 3.0;
};

/// 0 when sd <= sp, else 1 - exp(-lambda * (sd - sp)).
double breach_probability(double sd, double sp, double lambda);

/// Probability that at least one of two independent concerns is breached.
double combined_risk(double p_conf, double p_int);

enum class BreachOutcome { Safe, Breached };

BreachOutcome sample_breach(double p, RngStream& rng);

}  // namespace satoff
