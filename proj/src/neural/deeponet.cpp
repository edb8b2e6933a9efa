#include "mad/neural/deeponet.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "mad/random.hpp"
#include "mad/simd.hpp"

namespace mad::nn {
namespace {

std::vector<std::size_t> trunk_sizes(std::size_t dim, const std::vector<std::size_t>& hidden, std::size_t p) {
    std::vector<std::size_t> s{dim};
    s.insert(s.end(), hidden.begin(), hidden.end());
    s.push_back(p);
    return s;
}

// n x m values B T^T accumulated into out.
void contract(const std::vector<double>& b, const std::vector<double>& t, std::size_t n, std::size_t m,
              std::size_t p, std::vector<double>& out) {
    simd::matmul(simd::Trans::No, simd::Trans::Yes, n, m, p, 1.0, b.data(), t.data(), 1.0, out.data());
}

}  // namespace

DeepOnet::DeepOnet(std::size_t inputs, std::size_t dim, std::vector<std::size_t> trunk_hidden, std::size_t p,
                   Activation trunk_activation)
    : branch_({inputs, p}, {Activation::Linear}, false),
      trunk_(trunk_sizes(dim, trunk_hidden, p), std::vector<Activation>(trunk_hidden.size() + 1, trunk_activation),
             true) {
    if (inputs == 0 || dim == 0 || p == 0) throw std::invalid_argument("DeepOnet: sizes must be positive");
}

DeepOnet::DeepOnet(Mlp branch, Mlp trunk) : branch_(std::move(branch)), trunk_(std::move(trunk)) {
    if (branch_.output_dim() != trunk_.output_dim()) throw std::invalid_argument("DeepOnet: latent size mismatch");
    if (branch_.has_bias()) throw std::invalid_argument("DeepOnet: branch must be bias-free");
    for (auto a : branch_.activations()) {
        if (a != Activation::Linear) throw std::invalid_argument("DeepOnet: branch must be linear");
    }
}

std::string_view to_string(BranchInit b) { return b == BranchInit::Zero ? "zero" : "glorot"; }

BranchInit parse_branch_init(std::string_view s) {
    if (s == "zero") return BranchInit::Zero;
    if (s == "glorot") return BranchInit::Glorot;
    throw std::invalid_argument("unknown branch init: " + std::string(s));
}

void DeepOnet::init(Rng& rng, BranchInit branch) {
    if (branch == BranchInit::Glorot) {
        init_glorot_uniform(branch_, rng);
    } else {
        std::fill(branch_.params().begin(), branch_.params().end(), 0.0);
    }
    if (trunk_.activations().front() == Activation::Sine) {
        init_normal_fan_in(trunk_, rng);
    } else {
        init_glorot_uniform(trunk_, rng);
    }
}

std::vector<double> DeepOnet::forward(std::span<const double> v, std::size_t n, std::span<const double> x,
                                      std::size_t m) const {
    const std::size_t p = latent();
    std::vector<double> b(n * p), t(m * p), out(n * m, 0.0);
    branch_.forward(v, n, b);
    trunk_.forward(x, m, t);
    contract(b, t, n, m, p, out);
    return out;
}

std::string_view to_string(Arch a) {
    switch (a) {
        case Arch::Baseline: return "baseline";
        case Arch::Wide: return "wide";
        case Arch::Deep: return "deep";
        case Arch::Dual: return "dual";
    }
    return "unknown";
}

Arch parse_arch(std::string_view s) {
    if (s == "baseline") return Arch::Baseline;
    if (s == "wide") return Arch::Wide;
    if (s == "deep") return Arch::Deep;
    if (s == "dual") return Arch::Dual;
    throw std::invalid_argument("unknown architecture: " + std::string(s));
}

ModelConfig default_config(Arch arch, std::size_t dim, std::size_t boundary_inputs, std::size_t source_inputs) {
    ModelConfig c;
    c.arch = arch;
    c.dim = dim;
    c.boundary_inputs = boundary_inputs;
    switch (arch) {
        case Arch::Baseline: break;
        case Arch::Wide:
            c.width = 110;
            c.latent = 200;
            break;
        case Arch::Deep: c.depth = 8; break;
        case Arch::Dual: c.source_inputs = source_inputs; break;
    }
    return c;
}

OperatorModel::OperatorModel(const ModelConfig& cfg) : cfg_(cfg) {
    if (cfg.boundary_inputs == 0) throw std::invalid_argument("OperatorModel: boundary input size must be > 0");
    if (cfg.arch == Arch::Dual) {
        if (cfg.source_inputs == 0) throw std::invalid_argument("dual model needs a source input size");
        nets_.emplace_back(cfg.boundary_inputs, cfg.dim, std::vector<std::size_t>(cfg.depth, cfg.boundary_width),
                           cfg.latent, cfg.trunk_activation);
        nets_.emplace_back(cfg.source_inputs, cfg.dim, std::vector<std::size_t>(cfg.depth, cfg.width), cfg.latent,
                           cfg.trunk_activation);
    } else {
        nets_.emplace_back(cfg.boundary_inputs, cfg.dim, std::vector<std::size_t>(cfg.depth, cfg.width), cfg.latent,
                           cfg.trunk_activation);
    }
}

OperatorModel::OperatorModel(const ModelConfig& cfg, std::vector<DeepOnet> nets) : cfg_(cfg), nets_(std::move(nets)) {
    const std::size_t expected = cfg.arch == Arch::Dual ? 2 : 1;
    if (nets_.size() != expected) throw std::invalid_argument("OperatorModel: wrong number of nets");
    if (nets_[0].inputs() != cfg.boundary_inputs || (expected == 2 && nets_[1].inputs() != cfg.source_inputs)) {
        throw std::invalid_argument("OperatorModel: branch sizes disagree with the config");
    }
    for (const auto& net : nets_) {
        if (net.spatial_dim() != cfg.dim) throw std::invalid_argument("OperatorModel: trunk input dimension mismatch");
    }
}

void OperatorModel::check_inputs(std::span<const double> g, std::span<const double> f, std::size_t n,
                                 std::span<const double> x, std::size_t m) const {
    if (g.size() != n * boundary_inputs()) throw std::invalid_argument("model: boundary input size mismatch");
    if (!f.empty() && f.size() != n * cfg_.source_inputs) throw std::invalid_argument("model: source input size mismatch");
    if (!f.empty() && !dual()) throw std::invalid_argument("model: this architecture takes no source input");
    if (x.size() != m * cfg_.dim) throw std::invalid_argument("model: coordinate size mismatch");
}

std::vector<double> OperatorModel::branch_input(std::size_t q, std::span<const double> g, std::span<const double> f,
                                                std::size_t n) const {
    if (q == 0) return {g.begin(), g.end()};
    if (f.empty()) return std::vector<double>(n * cfg_.source_inputs, 0.0);
    return {f.begin(), f.end()};
}

std::vector<double> OperatorModel::predict(std::span<const double> g, std::span<const double> f, std::size_t n,
                                           std::span<const double> x, std::size_t m) const {
    check_inputs(g, f, n, x, m);
    std::vector<double> out(n * m, 0.0);
    for (std::size_t q = 0; q < nets_.size(); ++q) {
        const auto& net = nets_[q];
        const std::size_t p = net.latent();
        if (q == 1 && f.empty()) continue;
        std::vector<double> b(n * p), t(m * p);
        net.branch().forward(q == 0 ? g : f, n, b);
        net.trunk().forward(x, m, t);
        contract(b, t, n, m, p, out);
    }
    return out;
}

std::vector<double> OperatorModel::predict_laplacian(std::span<const double> g, std::span<const double> f,
                                                     std::size_t n, std::span<const double> x, std::size_t m) const {
    check_inputs(g, f, n, x, m);
    std::vector<double> out(n * m, 0.0);
    for (std::size_t q = 0; q < nets_.size(); ++q) {
        const auto& net = nets_[q];
        const std::size_t p = net.latent();
        if (q == 1 && f.empty()) continue;
        std::vector<double> b(n * p);
        net.branch().forward(q == 0 ? g : f, n, b);
        MlpTape tape;
        net.trunk().forward(x, m, JetOrder::Laplacian, tape);
        contract(b, tape.output_laplacian(), n, m, p, out);
    }
    return out;
}

std::size_t OperatorModel::num_params() const {
    std::size_t s = 0;
    for (const auto& net : nets_) s += net.num_params();
    return s;
}

void OperatorModel::get_params(std::span<double> out) const {
    if (out.size() != num_params()) throw std::invalid_argument("get_params: size mismatch");
    std::size_t off = 0;
    for (const auto& net : nets_) {
        for (const Mlp* mlp : {&net.branch(), &net.trunk()}) {
            const auto p = mlp->params();
            std::copy(p.begin(), p.end(), out.begin() + off);
            off += p.size();
        }
    }
}

void OperatorModel::set_params(std::span<const double> in) {
    if (in.size() != num_params()) throw std::invalid_argument("set_params: size mismatch");
    std::size_t off = 0;
    for (auto& net : nets_) {
        for (Mlp* mlp : {&net.branch(), &net.trunk()}) {
            auto p = mlp->params();
            std::copy(in.begin() + off, in.begin() + off + p.size(), p.begin());
            off += p.size();
        }
    }
}

std::vector<double> OperatorModel::params() const {
    std::vector<double> p(num_params());
    get_params(p);
    return p;
}

void OperatorModel::init(std::uint64_t seed) {
    Rng rng = make_rng(seed);
    for (auto& net : nets_) net.init(rng, cfg_.branch_init);
}

OperatorModel make_model(const ModelConfig& cfg, std::uint64_t seed) {
    OperatorModel m(cfg);
    m.init(derive_seed(seed, SeedStream::Init, 0));
    return m;
}

std::vector<double> laplacian_of_network(const FieldOperator& model, std::span<const double> g,
                                         std::span<const double> f, std::size_t n, std::span<const double> x,
                                         std::size_t m) {
    return model.predict_laplacian(g, f, n, x, m);
}

}  // namespace mad::nn
