#include "mad/neural/mlp.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "mad/simd.hpp"

namespace mad::nn {
namespace {

// Jet at z when the activation value f(z) is already known.
inline ActivationJet jet_with_value(Activation a, double z, double f) {
    if (a == Activation::Tanh) {
        const double s = 1.0 - f * f;
        return {f, s, -2.0 * f * s, s * (6.0 * f * f - 2.0)};
    }
    return activation_jet(a, z);
}

inline double apply(Activation a, double z) {
    switch (a) {
        case Activation::Linear: return z;
        case Activation::Tanh: return std::tanh(z);
        case Activation::Sine: return std::sin(z);
        case Activation::Relu: return z > 0.0 ? z : 0.0;
    }
    return z;
}

}  // namespace

std::string_view to_string(Activation a) {
    switch (a) {
        case Activation::Linear: return "linear";
        case Activation::Tanh: return "tanh";
        case Activation::Sine: return "sine";
        case Activation::Relu: return "relu";
    }
    return "unknown";
}

Activation parse_activation(std::string_view s) {
    if (s == "linear") return Activation::Linear;
    if (s == "tanh") return Activation::Tanh;
    if (s == "sine") return Activation::Sine;
    if (s == "relu") return Activation::Relu;
    throw std::invalid_argument("unknown activation: " + std::string(s));
}

ActivationJet activation_jet(Activation a, double z) {
    switch (a) {
        case Activation::Linear: return {z, 1.0, 0.0, 0.0};
        case Activation::Tanh: {
            const double t = std::tanh(z);
            return jet_with_value(a, z, t);
        }
        case Activation::Sine: {
            const double s = std::sin(z);
            const double c = std::cos(z);
            return {s, c, -s, -c};
        }
        case Activation::Relu: return {z > 0.0 ? z : 0.0, z > 0.0 ? 1.0 : 0.0, 0.0, 0.0};
    }
    return {z, 1.0, 0.0, 0.0};
}

std::span<const double> MlpTape::output_values() const {
    const auto& out = act.back();
    return {out.data(), out.size() / channels};
}

std::vector<double> MlpTape::output_laplacian() const {
    if (order != JetOrder::Laplacian) throw std::logic_error("tape has no second-derivative channels");
    const auto& out = act.back();
    const std::size_t block = out.size() / channels;
    const std::size_t dim = (channels - 1) / 2;
    std::vector<double> lap(block, 0.0);
    for (std::size_t d = 0; d < dim; ++d) {
        const double* src = out.data() + (1 + dim + d) * block;
        for (std::size_t i = 0; i < block; ++i) lap[i] += src[i];
    }
    return lap;
}

Mlp::Mlp(std::vector<std::size_t> sizes, std::vector<Activation> activations, bool bias)
    : sizes_(std::move(sizes)), activations_(std::move(activations)), bias_(bias) {
    if (sizes_.size() < 2) throw std::invalid_argument("Mlp: need at least input and output sizes");
    if (activations_.size() != sizes_.size() - 1) throw std::invalid_argument("Mlp: one activation per layer");
    std::size_t off = 0;
    for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
        if (sizes_[l] == 0 || sizes_[l + 1] == 0) throw std::invalid_argument("Mlp: empty layer");
        offsets_.push_back(off);
        off += sizes_[l] * sizes_[l + 1] + (bias_ ? sizes_[l + 1] : 0);
    }
    params_.assign(off, 0.0);
}

std::span<double> Mlp::weights(std::size_t l) {
    return {params_.data() + offsets_[l], sizes_[l] * sizes_[l + 1]};
}

std::span<const double> Mlp::weights(std::size_t l) const {
    return {params_.data() + offsets_[l], sizes_[l] * sizes_[l + 1]};
}

std::span<double> Mlp::bias(std::size_t l) {
    if (!bias_) return {};
    return {params_.data() + offsets_[l] + sizes_[l] * sizes_[l + 1], sizes_[l + 1]};
}

std::span<const double> Mlp::bias(std::size_t l) const {
    if (!bias_) return {};
    return {params_.data() + offsets_[l] + sizes_[l] * sizes_[l + 1], sizes_[l + 1]};
}

bool Mlp::smooth() const {
    for (auto a : activations_) {
        if (a == Activation::Relu) return false;
    }
    return true;
}

void Mlp::forward(std::span<const double> x, std::size_t rows, std::span<double> y) const {
    if (x.size() != rows * input_dim() || y.size() != rows * output_dim()) {
        throw std::invalid_argument("Mlp::forward: dimension mismatch");
    }
    std::vector<double> cur(x.begin(), x.end());
    std::vector<double> next;
    for (std::size_t l = 0; l < num_layers(); ++l) {
        const std::size_t in = sizes_[l];
        const std::size_t out = sizes_[l + 1];
        next.resize(rows * out);
        simd::matmul(simd::Trans::No, simd::Trans::Yes, rows, out, in, 1.0, cur.data(), weights(l).data(), 0.0,
                     next.data());
        const auto b = bias(l);
        const Activation a = activations_[l];
        for (std::size_t r = 0; r < rows; ++r) {
            double* row = next.data() + r * out;
            for (std::size_t j = 0; j < out; ++j) {
                const double z = row[j] + (b.empty() ? 0.0 : b[j]);
                row[j] = apply(a, z);
            }
        }
        cur.swap(next);
    }
    std::copy(cur.begin(), cur.end(), y.begin());
}

void Mlp::forward(std::span<const double> x, std::size_t rows, JetOrder order, MlpTape& tape) const {
    const std::size_t dim = input_dim();
    if (x.size() != rows * dim) throw std::invalid_argument("Mlp::forward: dimension mismatch");
    if (order == JetOrder::Laplacian && !smooth()) {
        throw std::invalid_argument("Laplacian requires twice-differentiable activations (no relu)");
    }
    const std::size_t channels = order == JetOrder::Values ? 1 : 1 + 2 * dim;
    tape.order = order;
    tape.rows = rows;
    tape.channels = channels;
    tape.act.resize(num_layers() + 1);
    tape.pre.resize(num_layers());

    auto& a0 = tape.act[0];
    a0.assign(channels * rows * dim, 0.0);
    std::copy(x.begin(), x.end(), a0.begin());
    if (order == JetOrder::Laplacian) {
        for (std::size_t d = 0; d < dim; ++d) {
            double* ch = a0.data() + (1 + d) * rows * dim;
            for (std::size_t r = 0; r < rows; ++r) ch[r * dim + d] = 1.0;
        }
    }

    const std::size_t stacked = channels * rows;
    for (std::size_t l = 0; l < num_layers(); ++l) {
        const std::size_t in = sizes_[l];
        const std::size_t out = sizes_[l + 1];
        auto& z = tape.pre[l];
        auto& a = tape.act[l + 1];
        z.resize(stacked * out);
        a.resize(stacked * out);
        simd::matmul(simd::Trans::No, simd::Trans::Yes, stacked, out, in, 1.0, tape.act[l].data(),
                     weights(l).data(), 0.0, z.data());
        const auto b = bias(l);
        if (!b.empty()) {
            for (std::size_t r = 0; r < rows; ++r) {
                double* row = z.data() + r * out;
                for (std::size_t j = 0; j < out; ++j) row[j] += b[j];
            }
        }
        const Activation act = activations_[l];
        if (order == JetOrder::Values) {
            for (std::size_t i = 0; i < stacked * out; ++i) a[i] = apply(act, z[i]);
            continue;
        }
        const std::size_t block = rows * out;
        for (std::size_t i = 0; i < block; ++i) {
            const ActivationJet jet = activation_jet(act, z[i]);
            a[i] = jet.f;
            for (std::size_t d = 0; d < dim; ++d) {
                const double zd = z[(1 + d) * block + i];
                const double zdd = z[(1 + dim + d) * block + i];
                a[(1 + d) * block + i] = jet.d1 * zd;
                a[(1 + dim + d) * block + i] = jet.d2 * zd * zd + jet.d1 * zdd;
            }
        }
    }
}

void Mlp::backward(const MlpTape& tape, std::span<const double> output_adjoint, std::span<double> grad,
                   std::vector<double>* input_adjoint) const {
    const std::size_t rows = tape.rows;
    const std::size_t channels = tape.channels;
    const std::size_t stacked = channels * rows;
    const std::size_t dim = input_dim();
    if (output_adjoint.size() != stacked * output_dim()) throw std::invalid_argument("Mlp::backward: adjoint size");
    if (grad.size() != params_.size()) throw std::invalid_argument("Mlp::backward: gradient size");

    std::vector<double> da(output_adjoint.begin(), output_adjoint.end());
    std::vector<double> dz;
    for (std::size_t l = num_layers(); l-- > 0;) {
        const std::size_t in = sizes_[l];
        const std::size_t out = sizes_[l + 1];
        const std::size_t block = rows * out;
        const auto& z = tape.pre[l];
        const auto& a = tape.act[l + 1];
        const Activation act = activations_[l];
        dz.resize(stacked * out);
        if (tape.order == JetOrder::Values) {
            for (std::size_t i = 0; i < block; ++i) dz[i] = da[i] * jet_with_value(act, z[i], a[i]).d1;
        } else {
            for (std::size_t i = 0; i < block; ++i) {
                const ActivationJet jet = jet_with_value(act, z[i], a[i]);
                double g0 = da[i] * jet.d1;
                for (std::size_t d = 0; d < dim; ++d) {
                    const std::size_t id = (1 + d) * block + i;
                    const std::size_t idd = (1 + dim + d) * block + i;
                    const double zd = z[id];
                    const double zdd = z[idd];
                    const double dad = da[id];
                    const double dadd = da[idd];
                    g0 += dad * jet.d2 * zd + dadd * (jet.d3 * zd * zd + jet.d2 * zdd);
                    dz[id] = dad * jet.d1 + dadd * 2.0 * jet.d2 * zd;
                    dz[idd] = dadd * jet.d1;
                }
                dz[i] = g0;
            }
        }
        double* gw = grad.data() + offsets_[l];
        simd::matmul(simd::Trans::Yes, simd::Trans::No, out, in, stacked, 1.0, dz.data(), tape.act[l].data(), 1.0,
                     gw);
        if (bias_) {
            double* gb = gw + in * out;
            for (std::size_t r = 0; r < rows; ++r) {
                const double* row = dz.data() + r * out;
                for (std::size_t j = 0; j < out; ++j) gb[j] += row[j];
            }
        }
        if (l > 0 || input_adjoint != nullptr) {
            da.resize(stacked * in);
            simd::matmul(simd::Trans::No, simd::Trans::No, stacked, in, out, 1.0, dz.data(), weights(l).data(), 0.0,
                         da.data());
        }
    }
    if (input_adjoint != nullptr) input_adjoint->assign(da.begin(), da.begin() + rows * dim);
}

void init_glorot_uniform(Mlp& net, Rng& rng) {
    for (std::size_t l = 0; l < net.num_layers(); ++l) {
        const double fan_in = static_cast<double>(net.sizes()[l]);
        const double fan_out = static_cast<double>(net.sizes()[l + 1]);
        const double limit = std::sqrt(6.0 / (fan_in + fan_out));
        std::uniform_real_distribution<double> dist(-limit, limit);
        for (double& w : net.weights(l)) w = dist(rng);
        for (double& b : net.bias(l)) b = 0.0;
    }
}

void init_normal_fan_in(Mlp& net, Rng& rng) {
    for (std::size_t l = 0; l < net.num_layers(); ++l) {
        std::normal_distribution<double> dist(0.0, 1.0 / std::sqrt(static_cast<double>(net.sizes()[l])));
        for (double& w : net.weights(l)) w = dist(rng);
        for (double& b : net.bias(l)) b = dist(rng);
    }
}

}  // namespace mad::nn
