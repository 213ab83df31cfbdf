#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

namespace satoff::testing {

/// Pearson goodness-of-fit p-value against a uniform distribution over the bins.
inline double uniform_chi2_pvalue(const std::vector<std::size_t>& counts) {
    double total = 0.0;
    for (auto c : counts) total += static_cast<double>(c);
    const double expected = total / static_cast<double>(counts.size());
    double stat = 0.0;
    for (auto c : counts) {
        const double d = static_cast<double>(c) - expected;
        stat += d * d / expected;
    }
    boost::math::chi_squared dist(static_cast<double>(counts.size() - 1));
    return boost::math::cdf(boost::math::complement(dist, stat));
}

/// Mean number in system of an M/M/c queue with unlimited waiting room.
inline double erlang_c_mean_in_system(double lambda, double mu, int c) {
    const double a = lambda / mu;
    const double rho = a / c;
    double sum = 0.0;
    double term = 1.0;  // a^k / k!
    for (int k = 0; k < c; ++k) {
        sum += term;
        term *= a / (k + 1);
    }
    const double tail = term / (1.0 - rho);  // a^c / (c! (1 - rho))
    const double wait_prob = tail / (sum + tail);
    return wait_prob * rho / (1.0 - rho) + a;
}

}  // namespace satoff::testing
