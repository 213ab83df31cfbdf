#pragma once

#include <algorithm>
#include <cmath>

#include "satoff/nn.hpp"

namespace satoff::testing {

struct GradCheck {
    double max_rel_error_params = 0.0;
    double max_rel_error_inputs = 0.0;
};

/// Central-difference check of Mlp::backward for loss = sum(upstream .* f(x)).
/// Relative error is |a - n| / max(|a|, |n|, floor).
inline GradCheck finite_difference_check(nn::Mlp net, const nn::Matrix& x, const nn::Matrix& upstream,
                                         double h = 1e-5, double floor = 1e-6) {
    auto loss = [&](const nn::Mlp& m, const nn::Matrix& in) { return m.forward(in).cwiseProduct(upstream).sum(); };
    auto rel = [floor](double a, double n) { return std::abs(a - n) / std::max({std::abs(a), std::abs(n), floor}); };

    nn::Mlp::Tape tape;
    net.forward(x, tape);
    const auto g = net.backward(tape, upstream);

    GradCheck out;
    nn::Vector& p = net.parameters();
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        const double keep = p[i];
        p[i] = keep + h;
        const double up = loss(net, x);
        p[i] = keep - h;
        const double down = loss(net, x);
        p[i] = keep;
        out.max_rel_error_params = std::max(out.max_rel_error_params, rel(g.params[i], (up - down) / (2 * h)));
    }
    nn::Matrix xi = x;
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
        for (Eigen::Index c = 0; c < x.cols(); ++c) {
            xi(r, c) = x(r, c) + h;
            const double up = loss(net, xi);
            xi(r, c) = x(r, c) - h;
            const double down = loss(net, xi);
            xi(r, c) = x(r, c);
            out.max_rel_error_inputs = std::max(out.max_rel_error_inputs, rel(g.inputs(r, c), (up - down) / (2 * h)));
        }
    }
    return out;
}

/// Random network and batch with the agents' layer layout.
inline nn::Mlp random_net(std::vector<std::size_t> sizes, nn::Activation head, std::uint64_t seed) {
    std::vector<nn::Activation> acts(sizes.size() - 2, nn::Activation::ReLU);
    acts.push_back(head);
    nn::Mlp net(std::move(sizes), std::move(acts));
    RngStream rng(seed, StreamId::Init);
    net.init_uniform(rng);
    return net;
}

inline nn::Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
    RngStream rng(seed, StreamId::Init);
    nn::Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform(-1.0, 1.0);
    return m;
}

}  // namespace satoff::testing
