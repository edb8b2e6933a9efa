#include "mad/harness/test_sets.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "mad/parallel.hpp"

namespace mad {

Dataset build_test_set_1(Generator generator, const EquationSpec& eq, const Domain& d, std::size_t n,
                         std::uint64_t seed, const GeneratorOptions& opts) {
    if (n == 0) throw std::invalid_argument("build_test_set_1: n must be >= 1");
    GeneratorOptions o = opts;
    o.provenance = Provenance::TestSet1;
    return generate_dataset(generator, eq, d, n, seed, o);
}

FieldFn boundary_interpolant(const Domain& d, std::vector<double> g) {
    const auto& t = d.boundary_params();
    if (t.empty() || g.size() != t.size()) throw std::invalid_argument("boundary_interpolant: size mismatch");
    const double length = d.boundary_length();
    const DomainKind kind = d.kind();
    return [kind, length, t, g = std::move(g)](const Point& p) {
        double s = boundary_point_to_param(kind, p);
        s = std::fmod(s, length);
        if (s < 0.0) s += length;
        // first parameter strictly greater than s
        const auto it = std::upper_bound(t.begin(), t.end(), s);
        const std::size_t hi = static_cast<std::size_t>(it - t.begin());
        const std::size_t n = t.size();
        const std::size_t i0 = hi == 0 ? n - 1 : hi - 1;
        const std::size_t i1 = hi == n ? 0 : hi;
        double t0 = t[i0];
        double t1 = t[i1];
        if (hi == 0) t0 -= length;
        if (hi == n) t1 += length;
        const double w = t1 > t0 ? (s - t0) / (t1 - t0) : 0.0;
        return (1.0 - w) * g[i0] + w * g[i1];
    };
}

FieldFn lattice_interpolant(const Domain& d, std::vector<double> lattice) {
    const std::size_t res = static_cast<std::size_t>(d.grid().resolution);
    if (lattice.size() != res * res) throw std::invalid_argument("lattice_interpolant: size mismatch");
    const Point o = d.origin();
    const double step = d.extent() / static_cast<double>(res - 1);
    return [res, o, step, v = std::move(lattice)](const Point& p) {
        const double gx = std::clamp((p.x - o.x) / step, 0.0, static_cast<double>(res - 1));
        const double gy = std::clamp((p.y - o.y) / step, 0.0, static_cast<double>(res - 1));
        const std::size_t i = std::min(static_cast<std::size_t>(gx), res - 2);
        const std::size_t j = std::min(static_cast<std::size_t>(gy), res - 2);
        const double a = gx - static_cast<double>(i);
        const double b = gy - static_cast<double>(j);
        return (1 - a) * (1 - b) * v[i * res + j] + a * (1 - b) * v[(i + 1) * res + j] +
               (1 - a) * b * v[i * res + j + 1] + a * b * v[(i + 1) * res + j + 1];
    };
}

OracleSolve solve_on_domain(const EquationSpec& eq, const Domain& d, const FieldFn& g, const FieldFn& f, double h,
                            double tol) {
    const auto start = std::chrono::steady_clock::now();
    const FdProblem p = make_fd_problem(eq, d.kind(), h, g, f);
    const FdSolution sol = solve_fd(p, tol);
    OracleSolve out;
    for (std::size_t idx : p.grid.restriction_to(d)) out.u.push_back(sol.u[idx]);
    out.iterations = sol.iterations;
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

Dataset build_test_set_2(const EquationSpec& eq, const Domain& d, std::size_t n, std::uint64_t seed,
                         const TestSet2Options& opts) {
    if (n == 0) throw std::invalid_argument("build_test_set_2: n must be >= 1");
    if (d.dim() != 2) throw std::invalid_argument("build_test_set_2: the FD oracle is 2D only");
    const auto start = std::chrono::steady_clock::now();
    DatasetMeta meta;
    meta.generator = Generator::FdOracle;
    meta.provenance = Provenance::TestSet2;
    meta.equation = eq;
    meta.domain = d.kind();
    meta.grid = d.grid();
    meta.master_seed = seed;
    meta.length_scale = opts.grf.length_scale;
    meta.h_oracle = opts.h_oracle;
    const bool with_f = eq.source == SourceMode::General;
    if (with_f) meta.sigma = opts.smoothing.sigma;
    const std::size_t res = static_cast<std::size_t>(d.grid().resolution);

    std::vector<FieldSample> samples(n);
    parallel_for(n, opts.threads, [&](std::size_t i) {
        FieldSample& s = samples[i];
        s.seed = sample_seed_for(Provenance::TestSet2, seed, i);
        s.g = sample_grf_boundary(d, opts.grf, s.seed);
        FieldFn f;
        if (with_f) {
            auto lattice = smooth_lattice(raw_source_noise(d, s.seed ^ 0x7e57f00dULL), res, opts.smoothing);
            for (std::size_t idx : d.grid_node_lattice_index()) s.f.push_back(lattice[idx]);
            f = lattice_interpolant(d, std::move(lattice));
        }
        s.u = solve_on_domain(eq, d, boundary_interpolant(d, s.g), f, opts.h_oracle, opts.tol).u;
    });
    Dataset ds = assemble_dataset(meta, d, samples);
    ds.meta.generation_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return ds;
}

}  // namespace mad
