#include <cmath>
#include <sstream>

#include "doctest.h"
#include "gradcheck.hpp"
#include "satoff/nn.hpp"

using namespace satoff;
using namespace satoff::nn;

TEST_CASE("zero network with identity head outputs zero") {
    Mlp net({3, 5, 2}, {Activation::ReLU, Activation::Identity});
    CHECK(net.parameter_count() == 3 * 5 + 5 + 5 * 2 + 2);
    const Vector y = net.forward(Vector(Vector::Ones(3)));
    CHECK(y.isZero());
}

TEST_CASE("single linear layer is a matrix multiply") {
    Mlp net({2, 2}, {Activation::Identity});
    // Column-major W = [[1, 2], [3, 4]], b = [0.5, -1].
    net.parameters() << 1, 3, 2, 4, 0.5, -1;
    Vector x(2);
    x << 1, -1;
    const Vector y = net.forward(x);
    CHECK(y[0] == doctest::Approx(1 - 2 + 0.5));
    CHECK(y[1] == doctest::Approx(3 - 4 - 1));
}

TEST_CASE("sigmoid head stays inside (0, 1)") {
    auto net = testing::random_net({4, 16, 3}, Activation::Sigmoid, 3);
    net.parameters() *= 5.0;
    const Matrix y = net.forward(testing::random_matrix(4, 100, 4));
    CHECK(y.minCoeff() > 0.0);
    CHECK(y.maxCoeff() < 1.0);
}

TEST_CASE("linear layer weight gradient is upstream outer input") {
    Mlp net({3, 2}, {Activation::Identity});
    RngStream rng(1, StreamId::Init);
    net.init_uniform(rng);
    Matrix x(3, 1);
    x << 0.5, -1.0, 2.0;
    Matrix up(2, 1);
    up << 1.5, -0.5;
    Mlp::Tape tape;
    net.forward(x, tape);
    const auto g = net.backward(tape, up);
    const Matrix outer = up * x.transpose();
    const Eigen::Map<const Matrix> gw(g.params.data(), 2, 3);
    CHECK((gw - outer).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(g.params.tail(2).isApprox(up.col(0)));
}

TEST_CASE("relu with negative pre-activation blocks the gradient") {
    Mlp net({1, 1, 1}, {Activation::ReLU, Activation::Identity});
    net.parameters() << 1.0, -5.0, 1.0, 0.0;  // hidden = relu(x - 5)
    Matrix x(1, 1);
    x << 1.0;
    Mlp::Tape tape;
    net.forward(x, tape);
    const auto g = net.backward(tape, Matrix::Ones(1, 1));
    CHECK(g.params[0] == 0.0);
    CHECK(g.params[1] == 0.0);
    CHECK(g.inputs(0, 0) == 0.0);
}

TEST_CASE("finite differences agree with backprop") {
    for (auto head : {Activation::Identity, Activation::Sigmoid, Activation::Tanh}) {
        const auto net = testing::random_net({4, 16, 16, 3}, head, 10);
        const auto r = testing::finite_difference_check(net, testing::random_matrix(4, 5, 11),
                                                        testing::random_matrix(3, 5, 12));
        CHECK(r.max_rel_error_params < 1e-4);
        CHECK(r.max_rel_error_inputs < 1e-4);
    }
}

TEST_CASE("adam: zero gradient leaves parameters unchanged") {
    Vector p = Vector::Constant(4, 0.7);
    Adam adam(4, {});
    adam.step(p, Vector::Zero(4));
    CHECK(p.isApprox(Vector::Constant(4, 0.7)));
}

TEST_CASE("adam: first step moves each parameter by about the learning rate") {
    Vector p = Vector::Zero(3);
    Vector g(3);
    g << 2.0, -0.01, 300.0;
    AdamConfig cfg;
    cfg.learning_rate = 0.01;
    Adam adam(3, cfg);
    adam.step(p, g);
    for (Eigen::Index i = 0; i < 3; ++i) {
        const double sign = g[i] > 0 ? 1.0 : -1.0;
        CHECK(p[i] == doctest::Approx(-sign * 0.01).epsilon(1e-5));
    }
    CHECK(adam.step_count() == 1);
}

TEST_CASE("adam: steps descend a convex quadratic") {
    Vector p(2);
    p << 3.0, -2.0;
    auto f = [](const Vector& v) { return v.squaredNorm(); };
    Adam adam(2, {0.1, 0.9, 0.999, 1e-8});
    const double f0 = f(p);
    adam.step(p, 2.0 * p);
    adam.step(p, 2.0 * p);
    CHECK(f(p) < f0);
}

TEST_CASE("soft update") {
    Vector target = Vector::Zero(3);
    const Vector online = Vector::Ones(3);
    Vector t1 = target;
    soft_update(t1, online, 1.0);
    CHECK(t1.isApprox(online));
    Vector t0 = target;
    soft_update(t0, online, 0.0);
    CHECK(t0.isZero());
    Vector t = target;
    for (int k = 1; k <= 200; ++k) {
        soft_update(t, online, 0.005);
        CHECK((online - t).maxCoeff() == doctest::Approx(std::pow(1 - 0.005, k)).epsilon(1e-12));
    }
    CHECK_THROWS(soft_update(t, online, 1.5));
}

TEST_CASE("checkpoint round-trip is exact") {
    const auto net = testing::random_net({4, 8, 8, 3}, Activation::Sigmoid, 21);
    std::stringstream buf;
    net.write(buf);
    const Mlp back = Mlp::read(buf);
    CHECK(back == net);
    CHECK(back.parameter_count() == net.parameter_count());
    const Matrix x = testing::random_matrix(4, 7, 22);
    CHECK(back.forward(x) == net.forward(x));
}

TEST_CASE("checkpoint layout is little-endian with the documented header") {
    Mlp net({1, 1}, {Activation::Tanh});
    net.parameters() << 1.0, 0.0;
    std::stringstream buf;
    net.write(buf);
    const std::string bytes = buf.str();
    REQUIRE(bytes.size() == 8 + 4 + 4 + 2 * 4 + 1 * 4 + 8 + 2 * 8);
    CHECK(bytes.substr(0, 8) == "SATOFFNN");
    CHECK(static_cast<unsigned char>(bytes[8]) == 1);   // version
    CHECK(static_cast<unsigned char>(bytes[12]) == 2);  // two layer sizes
    CHECK(static_cast<unsigned char>(bytes[24]) == 2);  // tanh tag
    // 1.0 as IEEE-754 little-endian: 00 .. 00 f0 3f
    CHECK(static_cast<unsigned char>(bytes[36 + 6]) == 0xf0);
    CHECK(static_cast<unsigned char>(bytes[36 + 7]) == 0x3f);
}

TEST_CASE("corrupt checkpoints are rejected") {
    std::stringstream bad("NOTANETWORK");
    CHECK_THROWS_AS(Mlp::read(bad), CheckpointError);
    const auto net = testing::random_net({2, 3, 1}, Activation::Identity, 1);
    std::stringstream buf;
    net.write(buf);
    std::string truncated = buf.str();
    truncated.resize(truncated.size() - 5);
    std::stringstream t(truncated);
    CHECK_THROWS_AS(Mlp::read(t), CheckpointError);
    CHECK_THROWS_AS(Mlp::load("/nonexistent/net.bin"), CheckpointError);
}

TEST_CASE("regression smoke test: learn y = sum of inputs") {
    auto net = testing::random_net({4, 16, 16, 1}, Activation::Identity, 5);
    Adam adam(net.parameter_count(), {1e-3, 0.9, 0.999, 1e-8});
    RngStream rng(6, StreamId::Replay);
    double mse = 1.0;
    for (int step = 0; step < 5000; ++step) {
        Matrix x(4, 32);
        for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.uniform(-1.0, 1.0);
        const Matrix y = x.colwise().sum();
        Mlp::Tape tape;
        const Matrix err = net.forward(x, tape) - y;
        mse = err.squaredNorm() / 32.0;
        adam.step(net.parameters(), net.backward(tape, err * (2.0 / 32.0)).params);
    }
    CHECK(mse < 1e-3);
}
