#include "satoff/security.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace satoff {

SecurityLevel SecurityLevel::none() {
    return SecurityLevel{"none", 0.0, std::numeric_limits<double>::infinity()};
}

SecurityTable::SecurityTable(std::vector<SecurityLevel> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw std::invalid_argument("SecurityTable: no entries");
    std::sort(entries_.begin(), entries_.end(),
              [](const SecurityLevel& a, const SecurityLevel& b) { return a.level < b.level; });
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto& e = entries_[i];
        if (!(e.level > 0.0 && e.level <= 1.0)) {
            throw std::invalid_argument("SecurityTable: level of '" + e.name + "' must lie in (0, 1]");
        }
        if (!(e.rate_mbps > 0.0)) throw std::invalid_argument("SecurityTable: rate of '" + e.name + "' must be > 0");
        if (i > 0) {
            const auto& prev = entries_[i - 1];
            if (!(e.level > prev.level)) throw std::invalid_argument("SecurityTable: duplicate level");
            if (!(e.rate_mbps < prev.rate_mbps)) {
                throw std::invalid_argument("SecurityTable: stronger algorithm '" + e.name +
                                            "' must have a lower process rate than '" + prev.name + "'");
            }
        }
    }
}

SecurityTable SecurityTable::confidentiality() {
    return SecurityTable({{"RC4", 0.32, 37.17},
                          {"AES", 0.53, 22.03},
                          {"Blowfish", 0.56, 20.87},
                          {"DES", 0.85, 13.83},
                          {"IDEA", 1.0, 11.76}});
}

SecurityTable SecurityTable::integrity() {
    return SecurityTable({{"MD5", 0.44, 172.41},
                          {"RipeMD128", 0.63, 119.05},
                          {"SHA-1", 0.69, 109.89},
                          {"RipeMD160", 0.75, 101.01},
                          {"TIGER", 1.0, 75.76}});
}

SecurityTable SecurityTable::from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw std::invalid_argument("security table: expected a JSON array");
    std::vector<SecurityLevel> entries;
    for (const auto& row : j) {
        entries.push_back({row.at("name").get<std::string>(), row.at("level").get<double>(),
                           row.at("rate_mbps").get<double>()});
    }
    return SecurityTable(std::move(entries));
}

SecurityTable SecurityTable::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open security table '" + path.string() + "'");
    return from_json(nlohmann::json::parse(in));
}

nlohmann::json SecurityTable::to_json() const {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& e : entries_) j.push_back({{"name", e.name}, {"level", e.level}, {"rate_mbps", e.rate_mbps}});
    return j;
}

SecurityLevel SecurityTable::quantize(double raw) const {
    if (!(raw >= 0.0 && raw <= 1.0)) throw std::invalid_argument("quantize_level: raw must lie in [0, 1]");
    if (raw == 0.0) return SecurityLevel::none();
    for (const auto& e : entries_) {
        if (e.level >= raw) return e;
    }
    return entries_.back();
}

Seconds security_time(double data_bits, double conf_rate_mbps, double int_rate_mbps) {
    if (!(conf_rate_mbps > 0.0 && int_rate_mbps > 0.0)) {
        throw std::invalid_argument("security_time: rates must be > 0");
    }
    const double megabits = data_bits / 1e6;
    // Infinite rate (no protection) contributes exactly zero.
    return megabits / conf_rate_mbps + megabits / int_rate_mbps;
}

Seconds security_time(double data_bits, const SecurityLevel& conf, const SecurityLevel& integ) {
    return security_time(data_bits, conf.rate_mbps, integ.rate_mbps);
}

double breach_probability(double sd, double sp, double lambda) {
    if (!(sd >= 0.0 && sd <= 1.0 && sp >= 0.0 && sp <= 1.0)) {
        throw std::invalid_argument("breach_probability: sd and sp must lie in [0, 1]");
    }
    if (lambda < 0.0) throw std::invalid_argument("breach_probability: lambda must be >= 0");
    if (sd <= sp) return 0.0;
    return -std::expm1(-lambda * (sd - sp));
}

double combined_risk(double p_conf, double p_int) {
    if (!(p_conf >= 0.0 && p_conf <= 1.0 && p_int >= 0.0 && p_int <= 1.0)) {
        throw std::invalid_argument("combined_risk: probabilities must lie in [0, 1]");
    }
    return 1.0 - (1.0 - p_conf) * (1.0 - p_int);
}

BreachOutcome sample_breach(double p, RngStream& rng) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("sample_breach: p must lie in [0, 1]");
    return rng.bernoulli(p) ? BreachOutcome::Breached : BreachOutcome::Safe;
}

}  // namespace satoff
