#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "mad/neural/mlp.hpp"

namespace mad::nn {

/// Map from input functions (boundary samples g, optional source samples f)
/// to solution values at query coordinates.
class FieldOperator {
public:
    virtual ~FieldOperator() = default;

    virtual std::size_t spatial_dim() const = 0;
    virtual std::size_t boundary_inputs() const = 0;
    /// Zero when the operator does not consume a source term.
    virtual std::size_t source_inputs() const = 0;

    /// Row-major n x m predictions for n input functions at m points.
    /// g is n x boundary_inputs(); f is n x source_inputs() or empty (zero source).
    /// x is m x spatial_dim().
    virtual std::vector<double> predict(std::span<const double> g, std::span<const double> f, std::size_t n,
                                        std::span<const double> x, std::size_t m) const = 0;

    /// Spatial Laplacian of the predictions, same layout as predict().
    virtual std::vector<double> predict_laplacian(std::span<const double> g, std::span<const double> f,
                                                  std::size_t n, std::span<const double> x,
                                                  std::size_t m) const = 0;
};

/// Branch weight law. Zero leaves boundary modes absent from the training
/// data mapped to zero; Glorot is the uniform variance-scaled law.
enum class BranchInit { Zero, Glorot };

std::string_view to_string(BranchInit b);
BranchInit parse_branch_init(std::string_view s);

/// Unstacked DeepONet: bias-free linear branch [inputs, p] and a trunk
/// [dim, hidden..., p] with the trunk activation on every layer.
/// output(v, x) = sum_j branch_j(v) * trunk_j(x).
class DeepOnet {
public:
    DeepOnet() = default;
    DeepOnet(std::size_t inputs, std::size_t dim, std::vector<std::size_t> trunk_hidden, std::size_t p,
             Activation trunk_activation = Activation::Tanh);
    DeepOnet(Mlp branch, Mlp trunk);

    std::size_t inputs() const { return branch_.input_dim(); }
    std::size_t spatial_dim() const { return trunk_.input_dim(); }
    std::size_t latent() const { return branch_.output_dim(); }
    std::size_t num_params() const { return branch_.params().size() + trunk_.params().size(); }

    Mlp& branch() { return branch_; }
    const Mlp& branch() const { return branch_; }
    Mlp& trunk() { return trunk_; }
    const Mlp& trunk() const { return trunk_; }

    /// Branch by `branch`; trunk Glorot-uniform for tanh, N(0, 1/fan_in) for sine.
    void init(Rng& rng, BranchInit branch = BranchInit::Zero);

    /// n x m values B T^T.
    std::vector<double> forward(std::span<const double> v, std::size_t n, std::span<const double> x,
                                std::size_t m) const;

private:
    Mlp branch_;
    Mlp trunk_;
};

enum class Arch { Baseline, Wide, Deep, Dual };

std::string_view to_string(Arch a);
Arch parse_arch(std::string_view s);

struct ModelConfig {
    Arch arch = Arch::Baseline;
    std::size_t dim = 2;
    std::size_t boundary_inputs = 0;
    std::size_t source_inputs = 0;  // used by Dual only
    std::size_t latent = 100;
    std::size_t width = 55;
    std::size_t depth = 4;
    std::size_t boundary_width = 45;  // Dual boundary-net trunk width
    Activation trunk_activation = Activation::Tanh;
    BranchInit branch_init = BranchInit::Zero;
};

/// Desk-scale shapes: baseline trunk [dim, 55 x4, 100]; wide doubles widths and
/// latent; deep doubles the hidden layer count; dual pairs a boundary net with
/// trunk width 45 and a source net with width 55.
ModelConfig default_config(Arch arch, std::size_t dim, std::size_t boundary_inputs, std::size_t source_inputs = 0);

/// One DeepONet, or for Dual the sum of a boundary net and a source net.
/// Parameters are exposed as one flat vector: net by net, branch then trunk.
class OperatorModel final : public FieldOperator {
public:
    OperatorModel() = default;
    explicit OperatorModel(const ModelConfig& cfg);
    OperatorModel(const ModelConfig& cfg, std::vector<DeepOnet> nets);

    const ModelConfig& config() const { return cfg_; }
    const std::vector<DeepOnet>& nets() const { return nets_; }
    std::vector<DeepOnet>& nets() { return nets_; }
    bool dual() const { return nets_.size() == 2; }

    std::size_t spatial_dim() const override { return cfg_.dim; }
    std::size_t boundary_inputs() const override { return cfg_.boundary_inputs; }
    std::size_t source_inputs() const override { return dual() ? cfg_.source_inputs : 0; }

    std::vector<double> predict(std::span<const double> g, std::span<const double> f, std::size_t n,
                                std::span<const double> x, std::size_t m) const override;
    std::vector<double> predict_laplacian(std::span<const double> g, std::span<const double> f, std::size_t n,
                                          std::span<const double> x, std::size_t m) const override;

    std::size_t num_params() const;
    void get_params(std::span<double> out) const;
    void set_params(std::span<const double> in);
    std::vector<double> params() const;

    /// Branch input of net q for the given batch (g for net 0, f for net 1);
    /// an empty f yields a zero source.
    std::vector<double> branch_input(std::size_t q, std::span<const double> g, std::span<const double> f,
                                     std::size_t n) const;

    void init(std::uint64_t seed);

private:
    void check_inputs(std::span<const double> g, std::span<const double> f, std::size_t n,
                      std::span<const double> x, std::size_t m) const;

    ModelConfig cfg_;
    std::vector<DeepOnet> nets_;
};

/// Builds and initializes a model from the Init seed stream of `seed`.
OperatorModel make_model(const ModelConfig& cfg, std::uint64_t seed);

/// Exact spatial Laplacian of the model output (n x m).
std::vector<double> laplacian_of_network(const FieldOperator& model, std::span<const double> g,
                                         std::span<const double> f, std::size_t n, std::span<const double> x,
                                         std::size_t m);

}  // namespace mad::nn
