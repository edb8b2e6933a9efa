#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "mad/random.hpp"

namespace mad::nn {

enum class Activation { Linear, Tanh, Sine, Relu };

std::string_view to_string(Activation a);
Activation parse_activation(std::string_view s);

/// Activation value and its first three derivatives at z.
struct ActivationJet {
    double f, d1, d2, d3;
};
ActivationJet activation_jet(Activation a, double z);

/// How much of the input-space jet a forward pass carries.
///
/// Values: one channel. Laplacian: the value, the first derivative along each
/// input coordinate and the pure second derivative along each coordinate,
/// i.e. 1 + 2 * input_dim channels. Second derivatives are propagated in closed
/// form through every layer (diagonal Hessian propagation).
enum class JetOrder { Values, Laplacian };

/// Activations and pre-activations of one forward pass, kept for backward.
/// Channel c of layer l occupies rows [c * rows, (c + 1) * rows) of the
/// stacked row-major matrices.
struct MlpTape {
    JetOrder order = JetOrder::Values;
    std::size_t rows = 0;
    std::size_t channels = 1;
    std::vector<std::vector<double>> act;  // act[0] is the stacked input
    std::vector<std::vector<double>> pre;  // pre[l] is the pre-activation of layer l+1

    /// Output values, rows x out.
    std::span<const double> output_values() const;
    /// Sum of pure second derivatives of each output, rows x out (Laplacian order only).
    std::vector<double> output_laplacian() const;
};

/// Fully connected network with per-layer activations. Parameters live in one
/// flat vector: for each layer the row-major (out x in) weight block followed
/// by the bias block when the network has biases.
class Mlp {
public:
    Mlp() = default;
    /// `activations` has one entry per layer (sizes.size() - 1 entries).
    Mlp(std::vector<std::size_t> sizes, std::vector<Activation> activations, bool bias);

    std::size_t input_dim() const { return sizes_.front(); }
    std::size_t output_dim() const { return sizes_.back(); }
    std::size_t num_layers() const { return sizes_.size() - 1; }
    const std::vector<std::size_t>& sizes() const { return sizes_; }
    const std::vector<Activation>& activations() const { return activations_; }
    bool has_bias() const { return bias_; }

    std::span<double> params() { return params_; }
    std::span<const double> params() const { return params_; }
    std::span<double> weights(std::size_t layer);
    std::span<const double> weights(std::size_t layer) const;
    /// Empty when the network is bias-free.
    std::span<double> bias(std::size_t layer);
    std::span<const double> bias(std::size_t layer) const;

    /// Values only: x is rows x input_dim, y is rows x output_dim.
    void forward(std::span<const double> x, std::size_t rows, std::span<double> y) const;

    /// Forward pass that records everything backward needs.
    void forward(std::span<const double> x, std::size_t rows, JetOrder order, MlpTape& tape) const;

    /// Accumulates parameter gradients into `grad` (same layout as params())
    /// given the adjoint of the stacked output (channels*rows x output_dim).
    /// When `input_adjoint` is non-null it receives the adjoint of the value
    /// channel of the input (rows x input_dim).
    void backward(const MlpTape& tape, std::span<const double> output_adjoint, std::span<double> grad,
                  std::vector<double>* input_adjoint = nullptr) const;

    /// True when every activation is twice differentiable.
    bool smooth() const;

private:
    std::size_t weight_offset(std::size_t layer) const { return offsets_[layer]; }

    std::vector<std::size_t> sizes_;
    std::vector<Activation> activations_;
    bool bias_ = true;
    std::vector<std::size_t> offsets_;
    std::vector<double> params_;
};

/// Weight laws.
void init_glorot_uniform(Mlp& net, Rng& rng);
/// Weights and biases i.i.d. N(0, 1/fan_in).
void init_normal_fan_in(Mlp& net, Rng& rng);

}  // namespace mad::nn
