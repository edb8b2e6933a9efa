#include "mad/sampler_grf.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "mad/random.hpp"

namespace mad {
namespace {

constexpr double kJitterLadder[] = {1e-10, 1e-8, 1e-6};

Eigen::MatrixXd covariance_factor(std::span<const double> t, const GrfConfig& cfg) {
    if (!(cfg.length_scale > 0.0)) throw std::invalid_argument("GRF length scale must be > 0");
    if (cfg.jitter < 0.0) throw std::invalid_argument("GRF jitter must be >= 0");
    const auto n = static_cast<Eigen::Index>(t.size());
    Eigen::MatrixXd k(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) k(i, j) = rbf_covariance(t[i], t[j], cfg.length_scale);
    }
    for (double jitter : kJitterLadder) {
        if (jitter < cfg.jitter) continue;
        Eigen::MatrixXd kj = k;
        kj.diagonal().array() += jitter;
        Eigen::LLT<Eigen::MatrixXd> llt(kj);
        if (llt.info() == Eigen::Success) return llt.matrixL();
    }
    throw std::runtime_error("GRF covariance factorization failed after jitter escalation");
}

std::uint64_t source_seed(std::uint64_t seed) { return splitmix64(seed ^ 0x5eed5041ce0fULL); }

}  // namespace

double rbf_covariance(double t1, double t2, double length_scale) {
    const double d = t1 - t2;
    return std::exp(-d * d / (2.0 * length_scale * length_scale));
}

std::vector<double> sample_grf_raw(const Domain& d, const GrfConfig& cfg, std::uint64_t seed) {
    if (d.dim() != 2) throw std::invalid_argument("GRF boundary sampling is defined for 2D domains");
    const auto& params = d.boundary_params();
    if (params.size() < 2) throw std::invalid_argument("GRF boundary sampling needs Mb >= 2");
    std::vector<double> t(params.begin(), params.end());
    t.push_back(d.boundary_length());

    const Eigen::MatrixXd chol = covariance_factor(t, cfg);
    Rng rng = make_rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd z(static_cast<Eigen::Index>(t.size()));
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = normal(rng);
    const Eigen::VectorXd v = chol.triangularView<Eigen::Lower>() * z;
    return {v.data(), v.data() + v.size()};
}

std::vector<double> sample_grf_boundary_closed(const Domain& d, const GrfConfig& cfg, std::uint64_t seed) {
    std::vector<double> g = sample_grf_raw(d, cfg, seed);
    const auto& t = d.boundary_params();
    const double length = d.boundary_length();
    const double first = g.front();
    const double last = g.back();
    for (std::size_t i = 0; i < t.size(); ++i) g[i] -= (last - first) * t[i] / length;
    g.back() = g.front();
    return g;
}

std::vector<double> sample_grf_boundary(const Domain& d, const GrfConfig& cfg, std::uint64_t seed) {
    auto g = sample_grf_boundary_closed(d, cfg, seed);
    g.pop_back();
    return g;
}

std::vector<double> raw_source_noise(const Domain& d, std::uint64_t seed) {
    if (d.dim() != 2) throw std::invalid_argument("source sampling is defined for 2D grid domains");
    const std::size_t res = static_cast<std::size_t>(d.grid().resolution);
    Rng rng = make_rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> raw(res * res);
    for (double& v : raw) v = normal(rng);
    return raw;
}

std::vector<double> smooth_lattice(std::span<const double> field, std::size_t res, const SmoothingConfig& cfg) {
    if (!(cfg.sigma > 0.0)) throw std::invalid_argument("smoothing sigma must be > 0");
    if (field.size() != res * res) throw std::invalid_argument("smooth_lattice: field size mismatch");
    const int radius = static_cast<int>(std::ceil(4.0 * cfg.sigma));
    std::vector<double> w(2 * radius + 1);
    for (int k = -radius; k <= radius; ++k) w[k + radius] = std::exp(-0.5 * k * k / (cfg.sigma * cfg.sigma));
    const int n = static_cast<int>(res);

    auto pass = [&](std::span<const double> in, std::vector<double>& out, bool along_x) {
        out.assign(in.size(), 0.0);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const int c = along_x ? i : j;
                const int lo = std::max(-radius, -c);
                const int hi = std::min(radius, n - 1 - c);
                double acc = 0.0;
                double norm = 0.0;
                for (int k = lo; k <= hi; ++k) {
                    const int ii = along_x ? i + k : i;
                    const int jj = along_x ? j : j + k;
                    acc += w[k + radius] * in[static_cast<std::size_t>(ii) * res + jj];
                    norm += w[k + radius];
                }
                out[static_cast<std::size_t>(i) * res + j] = acc / norm;
            }
        }
    };
    std::vector<double> tmp, out;
    pass(field, tmp, true);
    pass(tmp, out, false);
    return out;
}

std::vector<double> sample_smoothed_source(const Domain& d, const SmoothingConfig& cfg, std::uint64_t seed) {
    const auto raw = raw_source_noise(d, seed);
    const auto smooth = smooth_lattice(raw, static_cast<std::size_t>(d.grid().resolution), cfg);
    std::vector<double> f;
    f.reserve(d.grid_nodes().size());
    for (std::size_t idx : d.grid_node_lattice_index()) f.push_back(smooth[idx]);
    return f;
}

Dataset generate_grf_dataset(const EquationSpec& eq, const Domain& d, std::size_t n_samples, std::uint64_t seed,
                             const GrfConfig& grf, const SmoothingConfig& smoothing, Provenance provenance) {
    if (n_samples < 1) throw std::invalid_argument("generate_grf_dataset: n_samples must be >= 1");
    if (eq.k < 0.0) throw std::invalid_argument("equation coefficient k must be >= 0");
    const auto start = std::chrono::steady_clock::now();
    DatasetMeta meta;
    meta.generator = Generator::PinnGrf;
    meta.provenance = provenance;
    meta.equation = eq;
    meta.domain = d.kind();
    meta.grid = d.grid();
    meta.master_seed = seed;
    meta.length_scale = grf.length_scale;
    if (eq.source == SourceMode::General) meta.sigma = smoothing.sigma;

    std::vector<FieldSample> samples(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) {
        const std::uint64_t s = sample_seed_for(provenance, seed, i);
        samples[i].seed = s;
        samples[i].g = sample_grf_boundary(d, grf, s);
        if (eq.source == SourceMode::General) samples[i].f = sample_smoothed_source(d, smoothing, source_seed(s));
    }
    Dataset ds = assemble_dataset(meta, d, samples);
    ds.meta.generation_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return ds;
}

}  // namespace mad
