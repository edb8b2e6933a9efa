#include "mad/sampler_mad.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "mad/parallel.hpp"
#include "mad/simd.hpp"

namespace mad {
namespace {

std::vector<double> to_matrix(std::span<const Point> pts, std::size_t dim) {
    std::vector<double> m(pts.size() * dim);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        m[i * dim] = pts[i].x;
        m[i * dim + 1] = pts[i].y;
        if (dim == 3) m[i * dim + 2] = pts[i].z;
    }
    return m;
}

template <class F>
std::vector<double> evaluate_on(std::span<const Point> pts, const F& fn) {
    std::vector<double> out(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) out[i] = fn(pts[i]);
    return out;
}

// Dense basis: rows are points, columns are (center, kernel) pairs in the same
// center-major order FundamentalExpansion::random draws coefficients.
std::vector<double> fundamental_basis(const EquationSpec& eq, int dim, std::span<const Point> centers,
                                      std::span<const Point> pts, unsigned threads) {
    const auto kernels = FundamentalExpansion::kernels_for(eq, dim);
    const std::size_t cols = centers.size() * kernels.size();
    std::vector<double> basis(pts.size() * cols);
    const double sqrt_k = std::sqrt(eq.k);
    parallel_for(pts.size(), threads, [&](std::size_t i) {
        double* row = basis.data() + i * cols;
        for (std::size_t c = 0; c < centers.size(); ++c) {
            const double r = distance(pts[i], centers[c]);
            if (eq.k > 0.0) {
                const auto pair = special::bessel_j0_y0(sqrt_k * r);
                row[2 * c] = pair.j0;
                row[2 * c + 1] = pair.y0;
            } else {
                row[c] = special::kernel_radial(kernels.front(), r);
            }
        }
    });
    return basis;
}

}  // namespace

SineNetSolution::SineNetSolution(nn::Mlp net) : net_(std::move(net)) {
    for (auto a : net_.activations()) {
        if (a != nn::Activation::Sine) throw std::invalid_argument("SineNetSolution: all layers must be sine");
    }
    if (net_.output_dim() != 1) throw std::invalid_argument("SineNetSolution: scalar output required");
}

SineNetSolution SineNetSolution::random(Rng& rng, std::size_t input_dim) {
    nn::Mlp net({input_dim, kWidth, kWidth, 1}, std::vector<nn::Activation>(3, nn::Activation::Sine), true);
    nn::init_normal_fan_in(net, rng);
    return SineNetSolution(std::move(net));
}

SineNetSolution SineNetSolution::zero(std::size_t input_dim) {
    return SineNetSolution(
        nn::Mlp({input_dim, kWidth, kWidth, 1}, std::vector<nn::Activation>(3, nn::Activation::Sine), true));
}

std::vector<double> SineNetSolution::values(std::span<const Point> pts) const {
    const auto x = to_matrix(pts, net_.input_dim());
    std::vector<double> y(pts.size());
    net_.forward(x, pts.size(), y);
    return y;
}

std::vector<double> SineNetSolution::source(std::span<const Point> pts, double k) const {
    const auto x = to_matrix(pts, net_.input_dim());
    nn::MlpTape tape;
    net_.forward(x, pts.size(), nn::JetOrder::Laplacian, tape);
    auto f = tape.output_laplacian();
    const auto u = tape.output_values();
    for (std::size_t i = 0; i < f.size(); ++i) f[i] += k * u[i];
    return f;
}

std::vector<special::KernelId> FundamentalExpansion::kernels_for(const EquationSpec& eq, int dim) {
    if (eq.k < 0.0) throw std::invalid_argument("fundamental solutions require k >= 0");
    if (eq.k == 0.0) return {dim == 3 ? special::KernelId::newton3d() : special::KernelId::log2d()};
    if (dim != 2) throw std::invalid_argument("Helmholtz fundamental solutions are 2D only");
    return {special::KernelId::helmholtz_j0(eq.k), special::KernelId::helmholtz_y0(eq.k)};
}

FundamentalExpansion FundamentalExpansion::random(const EquationSpec& eq, int dim, std::span<const Point> centers,
                                                  Rng& rng) {
    const auto kernels = kernels_for(eq, dim);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<Term> terms;
    terms.reserve(centers.size() * kernels.size());
    for (const auto& c : centers) {
        for (const auto& k : kernels) terms.push_back({k, c, normal(rng)});
    }
    return FundamentalExpansion(std::move(terms));
}

double FundamentalExpansion::operator()(const Point& x) const {
    double s = 0.0;
    for (const auto& t : terms_) s += t.coeff * special::kernel_value(t.kernel, x, t.center);
    return s;
}

TrigHyperbolicExpansion TrigHyperbolicExpansion::random(int n_terms, Rng& rng) {
    if (n_terms < 1) throw std::invalid_argument("MAD2 needs at least one term");
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<Term> terms(n_terms);
    for (auto& t : terms) {
        t.A = normal(rng);
        t.B = normal(rng);
        t.C = normal(rng);
        t.D = normal(rng);
        do {
            t.a = normal(rng);
        } while (std::abs(t.a) > kMaxRate);
    }
    return TrigHyperbolicExpansion(std::move(terms));
}

double TrigHyperbolicExpansion::operator()(const Point& p) const {
    double s = 0.0;
    for (const auto& t : terms_) {
        s += (t.A * std::cos(t.a * p.x) + t.B * std::sin(t.a * p.x)) *
             (t.C * std::cosh(t.a * p.y) + t.D * std::sinh(t.a * p.y));
    }
    return s;
}

int default_center_count(const Domain& d) { return d.dim() == 3 ? kDefaultCenters3D : kDefaultCenters2D; }

FieldSample realize(const SineNetSolution& s, const EquationSpec& eq, const Domain& d) {
    FieldSample out;
    out.g = s.values(d.boundary_points());
    out.u = s.values(d.grid_nodes());
    out.f = s.source(d.grid_nodes(), eq.k);
    return out;
}

FieldSample realize(const FundamentalExpansion& e, const Domain& d) {
    FieldSample out;
    out.g = evaluate_on(d.boundary_points(), e);
    out.u = evaluate_on(d.grid_nodes(), e);
    return out;
}

FieldSample realize(const TrigHyperbolicExpansion& e, const Domain& d) {
    FieldSample out;
    out.g = evaluate_on(d.boundary_points(), e);
    out.u = evaluate_on(d.grid_nodes(), e);
    return out;
}

void check_generator_compatible(Generator generator, const EquationSpec& eq, const Domain& d) {
    if (eq.k < 0.0) throw std::invalid_argument("equation coefficient k must be >= 0");
    switch (generator) {
        case Generator::Mad0:
            if (eq.source != SourceMode::General) throw std::invalid_argument("MAD0 requires a general source term");
            return;
        case Generator::Mad1:
            if (eq.source != SourceMode::Zero) throw std::invalid_argument("MAD1 requires a source-free equation");
            if (eq.k > 0.0 && d.dim() != 2) throw std::invalid_argument("MAD1 Helmholtz data is 2D only");
            return;
        case Generator::Mad2:
            if (eq.source != SourceMode::Zero || eq.k != 0.0) {
                throw std::invalid_argument("MAD2 is defined for the Laplace equation only");
            }
            if (d.dim() != 2) throw std::invalid_argument("MAD2 is defined on 2D domains only");
            return;
        default: throw std::invalid_argument("generate_dataset: not a MAD generator");
    }
}

FieldSample sample_mad0(const EquationSpec& eq, const Domain& d, std::uint64_t seed) {
    check_generator_compatible(Generator::Mad0, eq, d);
    Rng rng = make_rng(seed);
    auto s = realize(SineNetSolution::random(rng, d.dim()), eq, d);
    s.seed = seed;
    return s;
}

FieldSample sample_mad1(const EquationSpec& eq, const Domain& d, int n_centers, std::uint64_t seed) {
    check_generator_compatible(Generator::Mad1, eq, d);
    if (n_centers < 1) throw std::invalid_argument("MAD1 needs at least one center");
    const auto centers = exterior_centers(d, n_centers, kCenterOffset);
    Rng rng = make_rng(seed);
    auto s = realize(FundamentalExpansion::random(eq, d.dim(), centers, rng), d);
    s.seed = seed;
    return s;
}

FieldSample sample_mad2(const Domain& d, int n_terms, std::uint64_t seed) {
    check_generator_compatible(Generator::Mad2, EquationSpec::laplace(), d);
    Rng rng = make_rng(seed);
    auto s = realize(TrigHyperbolicExpansion::random(n_terms, rng), d);
    s.seed = seed;
    return s;
}

Dataset generate_dataset(Generator generator, const EquationSpec& eq, const Domain& d, std::size_t n_samples,
                         std::uint64_t seed, const GeneratorOptions& opts) {
    check_generator_compatible(generator, eq, d);
    if (n_samples < 1) throw std::invalid_argument("generate_dataset: n_samples must be >= 1");
    const auto start = std::chrono::steady_clock::now();

    DatasetMeta meta;
    meta.generator = generator;
    meta.provenance = opts.provenance;
    meta.equation = eq;
    meta.domain = d.kind();
    meta.grid = d.grid();
    meta.master_seed = seed;

    Dataset ds;
    if (generator == Generator::Mad1) {
        const int n_centers = opts.n_centers > 0 ? opts.n_centers : default_center_count(d);
        meta.n_centers = static_cast<std::uint32_t>(n_centers);
        // Centers are fixed by the domain, so every record is the same basis
        // matrix applied to its own coefficient vector.
        const auto centers = exterior_centers(d, n_centers, kCenterOffset);
        std::vector<Point> pts(d.grid_nodes());
        pts.insert(pts.end(), d.boundary_points().begin(), d.boundary_points().end());
        const auto basis = fundamental_basis(eq, d.dim(), centers, pts, opts.threads);
        const std::size_t cols = centers.size() * FundamentalExpansion::kernels_for(eq, d.dim()).size();
        std::vector<double> coeffs(n_samples * cols);
        std::normal_distribution<double> normal(0.0, 1.0);
        for (std::size_t i = 0; i < n_samples; ++i) {
            Rng rng = make_rng(sample_seed_for(opts.provenance, seed, i));
            for (std::size_t c = 0; c < cols; ++c) coeffs[i * cols + c] = normal(rng);
        }
        const std::size_t m = d.grid_nodes().size();
        ds.n = n_samples;
        ds.grid_size = m;
        ds.boundary_size = d.boundary_points().size();
        ds.has_u = true;
        ds.u.resize(n_samples * m);
        ds.g.resize(n_samples * ds.boundary_size);
        simd::matmul(simd::Trans::No, simd::Trans::Yes, n_samples, m, cols, 1.0, coeffs.data(), basis.data(), 0.0,
                     ds.u.data());
        simd::matmul(simd::Trans::No, simd::Trans::Yes, n_samples, ds.boundary_size, cols, 1.0, coeffs.data(),
                     basis.data() + m * cols, 0.0, ds.g.data());
    } else {
        if (generator == Generator::Mad2) meta.n_terms = static_cast<std::uint32_t>(opts.n_terms);
        std::vector<FieldSample> samples(n_samples);
        parallel_for(n_samples, opts.threads, [&](std::size_t i) {
            const std::uint64_t s = sample_seed_for(opts.provenance, seed, i);
            samples[i] = generator == Generator::Mad0 ? sample_mad0(eq, d, s) : sample_mad2(d, opts.n_terms, s);
        });
        ds = assemble_dataset(meta, d, samples);
    }
    ds.meta = meta;
    ds.meta.generation_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return ds;
}

}  // namespace mad
