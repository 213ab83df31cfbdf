#include "satoff/nn.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <string>

namespace satoff::nn {

std::string_view to_string(Activation a) {
    switch (a) {
        case Activation::Identity: return "identity";
        case Activation::ReLU: return "relu";
        case Activation::Tanh: return "tanh";
        case Activation::Sigmoid: return "sigmoid";
    }
    return "?";
}

namespace {

void apply(Activation a, Matrix& z) {
    switch (a) {
        case Activation::Identity: break;
        case Activation::ReLU: z = z.cwiseMax(0.0); break;
        case Activation::Tanh: z = z.array().tanh().matrix(); break;
        case Activation::Sigmoid: z = (1.0 / (1.0 + (-z.array()).exp())).matrix(); break;
    }
}

// Derivative expressed through the activation's output y.
Matrix derivative(Activation a, const Matrix& y) {
    switch (a) {
        case Activation::Identity: return Matrix::Ones(y.rows(), y.cols());
        case Activation::ReLU: return (y.array() > 0.0).cast<double>().matrix();
        case Activation::Tanh: return (1.0 - y.array().square()).matrix();
        case Activation::Sigmoid: return (y.array() * (1.0 - y.array())).matrix();
    }
    throw std::logic_error("unknown activation");
}

constexpr std::array<char, 8> kMagic{'S', 'A', 'T', 'O', 'F', 'F', 'N', 'N'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put_le(std::ostream& out, T value) {
    std::array<unsigned char, sizeof(T)> bytes{};
    std::uint64_t bits = 0;
    if constexpr (std::is_same_v<T, double>) {
        bits = std::bit_cast<std::uint64_t>(value);
    } else {
        bits = static_cast<std::uint64_t>(value);
    }
    for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xffU);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

template <typename T>
T get_le(std::istream& in) {
    std::array<unsigned char, sizeof(T)> bytes{};
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!in) throw CheckpointError("checkpoint truncated");
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) bits |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
    if constexpr (std::is_same_v<T, double>) {
        return std::bit_cast<double>(bits);
    } else {
        return static_cast<T>(bits);
    }
}

}  // namespace

Mlp::Mlp(std::vector<std::size_t> layer_sizes, std::vector<Activation> activations)
    : sizes_(std::move(layer_sizes)), activations_(std::move(activations)) {
    if (sizes_.size() < 2 || activations_.size() + 1 != sizes_.size()) {
        throw std::invalid_argument("Mlp: need n layer sizes and n-1 activations (n >= 2)");
    }
    std::size_t offset = 0;
    for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
        if (sizes_[l] == 0 || sizes_[l + 1] == 0) throw std::invalid_argument("Mlp: zero-width layer");
        offsets_.push_back(offset);
        offset += sizes_[l + 1] * sizes_[l] + sizes_[l + 1];
    }
    params_ = Vector::Zero(static_cast<Eigen::Index>(offset));
}

void Mlp::init_uniform(RngStream& rng) {
    for (std::size_t l = 0; l < num_layers(); ++l) {
        const std::size_t in = sizes_[l];
        const std::size_t out = sizes_[l + 1];
        const double bound = 1.0 / std::sqrt(static_cast<double>(in));
        const std::size_t count = out * in + out;
        for (std::size_t i = 0; i < count; ++i) {
            params_[static_cast<Eigen::Index>(offsets_[l] + i)] = rng.uniform(-bound, bound);
        }
    }
}

Vector Mlp::forward(const Vector& input) const {
    Matrix m = input;
    return forward(m).col(0);
}

Matrix Mlp::forward(const Matrix& inputs) const {
    Tape tape;
    return forward(inputs, tape);
}

Matrix Mlp::forward(const Matrix& inputs, Tape& tape) const {
    if (static_cast<std::size_t>(inputs.rows()) != input_size()) {
        throw std::invalid_argument("Mlp::forward: input has " + std::to_string(inputs.rows()) + " rows, expected " +
                                    std::to_string(input_size()));
    }
    tape.outputs.clear();
    tape.outputs.reserve(num_layers() + 1);
    tape.outputs.push_back(inputs);
    for (std::size_t l = 0; l < num_layers(); ++l) {
        const auto in = static_cast<Eigen::Index>(sizes_[l]);
        const auto out = static_cast<Eigen::Index>(sizes_[l + 1]);
        const double* base = params_.data() + weight_offset(l);
        Eigen::Map<const Matrix> w(base, out, in);
        Eigen::Map<const Vector> b(base + out * in, out);
        Matrix z = w * tape.outputs.back();
        z.colwise() += b;
        apply(activations_[l], z);
        tape.outputs.push_back(std::move(z));
    }
    return tape.outputs.back();
}

Mlp::Gradients Mlp::backward(const Tape& tape, const Matrix& upstream) const {
    if (tape.outputs.size() != num_layers() + 1) throw std::invalid_argument("Mlp::backward: tape does not match");
    const Matrix& y = tape.outputs.back();
    if (upstream.rows() != y.rows() || upstream.cols() != y.cols()) {
        throw std::invalid_argument("Mlp::backward: upstream gradient shape mismatch");
    }
    Gradients g;
    g.params = Vector::Zero(params_.size());
    Matrix delta = upstream.cwiseProduct(derivative(activations_.back(), y));
    for (std::size_t l = num_layers(); l-- > 0;) {
        const auto in = static_cast<Eigen::Index>(sizes_[l]);
        const auto out = static_cast<Eigen::Index>(sizes_[l + 1]);
        const auto off = static_cast<Eigen::Index>(weight_offset(l));
        Eigen::Map<const Matrix> w(params_.data() + off, out, in);
        Eigen::Map<Matrix> gw(g.params.data() + off, out, in);
        Eigen::Map<Vector> gb(g.params.data() + off + out * in, out);
        const Matrix& x = tape.outputs[l];
        gw.noalias() = delta * x.transpose();
        gb = delta.rowwise().sum();
        Matrix prev = w.transpose() * delta;
        if (l > 0) prev = prev.cwiseProduct(derivative(activations_[l - 1], x));
        delta = std::move(prev);
    }
    g.inputs = std::move(delta);
    return g;
}

void Mlp::write(std::ostream& out) const {
    out.write(kMagic.data(), static_cast<std::streamsize>(kMagic.size()));
    put_le<std::uint32_t>(out, kVersion);
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(sizes_.size()));
    for (auto s : sizes_) put_le<std::uint32_t>(out, static_cast<std::uint32_t>(s));
    for (auto a : activations_) put_le<std::uint32_t>(out, static_cast<std::uint32_t>(a));
    put_le<std::uint64_t>(out, static_cast<std::uint64_t>(params_.size()));
    for (Eigen::Index i = 0; i < params_.size(); ++i) put_le<double>(out, params_[i]);
}

Mlp Mlp::read(std::istream& in) {
    std::array<char, 8> magic{};
    in.read(magic.data(), static_cast<std::streamsize>(magic.size()));
    if (!in || magic != kMagic) throw CheckpointError("not a network checkpoint (bad magic)");
    const auto version = get_le<std::uint32_t>(in);
    if (version != kVersion) throw CheckpointError("unsupported checkpoint version " + std::to_string(version));
    const auto n = get_le<std::uint32_t>(in);
    if (n < 2 || n > 1024) throw CheckpointError("implausible layer count in checkpoint");
    std::vector<std::size_t> sizes(n);
    for (auto& s : sizes) s = get_le<std::uint32_t>(in);
    std::vector<Activation> acts(n - 1);
    for (auto& a : acts) {
        const auto tag = get_le<std::uint32_t>(in);
        if (tag > 3) throw CheckpointError("unknown activation tag " + std::to_string(tag));
        a = static_cast<Activation>(tag);
    }
    Mlp net(sizes, acts);
    const auto count = get_le<std::uint64_t>(in);
    if (count != net.parameter_count()) throw CheckpointError("parameter count does not match layer sizes");
    for (Eigen::Index i = 0; i < net.params_.size(); ++i) net.params_[i] = get_le<double>(in);
    return net;
}

void Mlp::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw CheckpointError("cannot write checkpoint '" + path.string() + "'");
    write(out);
    if (!out) throw CheckpointError("failed writing checkpoint '" + path.string() + "'");
}

Mlp Mlp::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CheckpointError("cannot open checkpoint '" + path.string() + "'");
    return read(in);
}

bool Mlp::operator==(const Mlp& other) const {
    return sizes_ == other.sizes_ && activations_ == other.activations_ && params_.size() == other.params_.size() &&
           params_ == other.params_;
}

Adam::Adam(std::size_t n_params, AdamConfig config)
    : config_(config),
      m_(Vector::Zero(static_cast<Eigen::Index>(n_params))),
      v_(Vector::Zero(static_cast<Eigen::Index>(n_params))) {}

void Adam::step(Vector& params, const Vector& grads) {
    if (params.size() != m_.size() || grads.size() != m_.size()) {
        throw std::invalid_argument("Adam::step: parameter/gradient size mismatch");
    }
    ++steps_;
    const double b1 = config_.beta1;
    const double b2 = config_.beta2;
    m_ = b1 * m_ + (1.0 - b1) * grads;
    v_ = b2 * v_ + (1.0 - b2) * grads.cwiseAbs2();
    const double c1 = 1.0 - std::pow(b1, static_cast<double>(steps_));
    const double c2 = 1.0 - std::pow(b2, static_cast<double>(steps_));
    params.array() -= config_.learning_rate * (m_.array() / c1) / ((v_.array() / c2).sqrt() + config_.epsilon);
}

void soft_update(Vector& target, const Vector& online, double tau) {
    if (!(tau >= 0.0 && tau <= 1.0)) throw std::invalid_argument("soft_update: tau must lie in [0, 1]");
    if (target.size() != online.size()) throw std::invalid_argument("soft_update: size mismatch");
    target = tau * online + (1.0 - tau) * target;
}

}  // namespace satoff::nn
