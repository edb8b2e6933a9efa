#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "mad/dataset.hpp"
#include "mad/neural/deeponet.hpp"
#include "mad/neural/loss.hpp"

namespace mad::nn {

struct AdamConfig {
    double lr = 1e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

/// Bias-corrected Adam over a flat parameter vector.
class Adam {
public:
    Adam(std::size_t n_params, const AdamConfig& cfg = {});

    void step(std::span<double> params, std::span<const double> grad);

    std::uint64_t steps() const { return t_; }
    const std::vector<double>& first_moment() const { return m_; }
    const std::vector<double>& second_moment() const { return v_; }
    const AdamConfig& config() const { return cfg_; }

private:
    AdamConfig cfg_;
    std::uint64_t t_ = 0;
    std::vector<double> m_;
    std::vector<double> v_;
};

enum class LossKind { Mad, Pinn };

std::string_view to_string(LossKind k);
LossKind parse_loss(std::string_view s);

struct TrainConfig {
    LossKind loss = LossKind::Mad;
    std::size_t epochs = 10000;
    double lr = 1e-4;
    std::uint64_t seed = 0;
    std::size_t batch_size = 0;  // 0 = full batch
    PinnWeights weights;
    /// Called after each epoch with (epoch, loss); may be empty.
    std::function<void(std::size_t, double)> on_epoch;
};

struct TrainResult {
    std::vector<double> history;  // mean loss of each epoch, before its update
    double seconds = 0.0;
};

/// Adam training. Full-batch by default; with batch_size > 0 records are
/// reshuffled every epoch from the Shuffle stream of `seed`.
TrainResult train(OperatorModel& model, const OperatorBatch& data, const TrainConfig& cfg);
TrainResult train(OperatorModel& model, const Dataset& data, const TrainConfig& cfg);

/// Throws std::invalid_argument if the dataset lacks the fields `loss` needs.
void check_loss_compatible(const OperatorBatch& data, LossKind loss);

}  // namespace mad::nn
