#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "satoff/rng.hpp"

namespace satoff::nn {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class Activation : std::uint32_t { Identity = 0, ReLU = 1, Tanh = 2, Sigmoid = 3 };

std::string_view to_string(Activation a);

class CheckpointError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Fully connected feed-forward network with one activation per layer.
///
/// Parameters live in one flat vector. Layer l owns a weight block
/// (out_l x in_l, column-major) followed by its bias (out_l); layers are laid
/// out in order. Batched inputs are matrices with one sample per column.
class Mlp {
public:
    Mlp() = default;
    /// `layer_sizes` has one more entry than `activations`. Parameters start at zero.
    Mlp(std::vector<std::size_t> layer_sizes, std::vector<Activation> activations);

    /// Weights and biases uniform in +-1/sqrt(fan_in).
    void init_uniform(RngStream& rng);

    std::size_t input_size() const { return sizes_.front(); }
    std::size_t output_size() const { return sizes_.back(); }
    std::size_t num_layers() const { return activations_.size(); }
    std::size_t parameter_count() const { return static_cast<std::size_t>(params_.size()); }
    const std::vector<std::size_t>& layer_sizes() const { return sizes_; }
    const std::vector<Activation>& activations() const { return activations_; }

    Vector& parameters() { return params_; }
    const Vector& parameters() const { return params_; }

    Vector forward(const Vector& input) const;
    Matrix forward(const Matrix& inputs) const;

    /// Layer outputs kept for the backward pass; outputs[0] is the input.
    struct Tape {
        std::vector<Matrix> outputs;
    };
    Matrix forward(const Matrix& inputs, Tape& tape) const;

    struct Gradients {
        Vector params;  // summed over the batch
        Matrix inputs;  // d(loss)/d(input), one column per sample
    };
    /// Reverse-mode gradient of sum(upstream .* output) for the taped batch.
    Gradients backward(const Tape& tape, const Matrix& upstream) const;

    /// Binary checkpoint, little-endian throughout:
    ///   char[8]  magic "SATOFFNN"
    ///   u32      format version (1)
    ///   u32      n = number of layer sizes
    ///   u32[n]   layer sizes
    ///   u32[n-1] activation tags (0 Identity, 1 ReLU, 2 Tanh, 3 Sigmoid)
    ///   u64      parameter count
    ///   f64[...] parameters in the flat layout described above
    void write(std::ostream& out) const;
    static Mlp read(std::istream& in);
    void save(const std::filesystem::path& path) const;
    static Mlp load(const std::filesystem::path& path);

    bool operator==(const Mlp& other) const;

private:
    std::size_t weight_offset(std::size_t layer) const { return offsets_[layer]; }

    std::vector<std::size_t> sizes_;
    std::vector<Activation> activations_;
    std::vector<std::size_t> offsets_;
    Vector params_;
};

struct AdamConfig {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

/// Bias-corrected Adam.
class Adam {
public:
    Adam() = default;
    Adam(std::size_t n_params, AdamConfig config);

    void step(Vector& params, const Vector& grads);

    std::uint64_t step_count() const { return steps_; }
    const Vector& first_moment() const { return m_; }
    const Vector& second_moment() const { return v_; }
    const AdamConfig& config() const { return config_; }

private:
    AdamConfig config_;
    std::uint64_t steps_ = 0;
    Vector m_;
    Vector v_;
};

/// target <- tau * online + (1 - tau) * target.
void soft_update(Vector& target, const Vector& online, double tau);

}  // namespace satoff::nn
