#include "mad/neural/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "mad/random.hpp"

namespace mad::nn {

Adam::Adam(std::size_t n_params, const AdamConfig& cfg) : cfg_(cfg), m_(n_params, 0.0), v_(n_params, 0.0) {
    if (!(cfg.lr > 0.0)) throw std::invalid_argument("Adam: learning rate must be > 0");
}

void Adam::step(std::span<double> params, std::span<const double> grad) {
    if (params.size() != m_.size() || grad.size() != m_.size()) throw std::invalid_argument("Adam: shape mismatch");
    ++t_;
    const double c1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
    for (std::size_t i = 0; i < params.size(); ++i) {
        m_[i] = cfg_.beta1 * m_[i] + (1.0 - cfg_.beta1) * grad[i];
        v_[i] = cfg_.beta2 * v_[i] + (1.0 - cfg_.beta2) * grad[i] * grad[i];
        const double mhat = m_[i] / c1;
        const double vhat = v_[i] / c2;
        params[i] -= cfg_.lr * mhat / (std::sqrt(vhat) + cfg_.eps);
    }
}

std::string_view to_string(LossKind k) { return k == LossKind::Mad ? "mad" : "pinn"; }

LossKind parse_loss(std::string_view s) {
    if (s == "mad") return LossKind::Mad;
    if (s == "pinn") return LossKind::Pinn;
    throw std::invalid_argument("unknown loss: " + std::string(s));
}

void check_loss_compatible(const OperatorBatch& data, LossKind loss) {
    if (data.n == 0) throw std::invalid_argument("train: empty dataset");
    if (loss == LossKind::Mad && data.u.empty()) throw std::invalid_argument("MAD loss needs solution values u");
    if (data.g.empty()) throw std::invalid_argument("training needs boundary values g");
}

TrainResult train(OperatorModel& model, const OperatorBatch& data, const TrainConfig& cfg) {
    check_loss_compatible(data, cfg.loss);
    const auto start = std::chrono::steady_clock::now();
    TrainResult res;
    res.history.reserve(cfg.epochs);
    std::vector<double> params = model.params();
    std::vector<double> grad(params.size());
    Adam adam(params.size(), AdamConfig{cfg.lr});
    auto step_loss = [&](const OperatorBatch& b) {
        return cfg.loss == LossKind::Mad ? loss_mad_grad(model, b, grad) : loss_pinn_grad(model, b, cfg.weights, grad);
    };

    const bool full = cfg.batch_size == 0 || cfg.batch_size >= data.n;
    Rng shuffle = make_rng(derive_seed(cfg.seed, SeedStream::Shuffle, 0));
    std::vector<std::size_t> order(data.n);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        double epoch_loss = 0.0;
        if (full) {
            epoch_loss = step_loss(data);
            adam.step(params, grad);
            model.set_params(params);
        } else {
            std::shuffle(order.begin(), order.end(), shuffle);
            for (std::size_t s = 0; s < data.n; s += cfg.batch_size) {
                const std::size_t e = std::min(data.n, s + cfg.batch_size);
                const auto sub = data.subset(std::span<const std::size_t>(order).subspan(s, e - s));
                epoch_loss += step_loss(sub) * static_cast<double>(e - s);
                adam.step(params, grad);
                model.set_params(params);
            }
            epoch_loss /= static_cast<double>(data.n);
        }
        res.history.push_back(epoch_loss);
        if (cfg.on_epoch) cfg.on_epoch(epoch, epoch_loss);
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return res;
}

TrainResult train(OperatorModel& model, const Dataset& data, const TrainConfig& cfg) {
    return train(model, make_batch(data), cfg);
}

}  // namespace mad::nn
