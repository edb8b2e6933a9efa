#include "mad/harness/bench.hpp"

#include <chrono>

#include "mad/harness/test_sets.hpp"
#include "mad/random.hpp"
#include "mad/sampler_mad.hpp"

namespace mad {
namespace {

double since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

BenchReport bench_generation(const EquationSpec& eq, const Domain& d, std::size_t n, std::uint64_t seed,
                             double h_oracle, unsigned threads) {
    check_generator_compatible(Generator::Mad1, eq, d);
    BenchReport rep;
    rep.n = n;
    rep.h_oracle = h_oracle;
    if (n == 0) return rep;

    GeneratorOptions opts;
    opts.threads = threads;
    auto t0 = std::chrono::steady_clock::now();
    const Dataset ds = generate_dataset(Generator::Mad1, eq, d, n, seed, opts);
    rep.t_mad = since(t0);

    // The same expansions, redrawn from their record seeds, define the FD problems.
    const auto centers = exterior_centers(d, default_center_count(d), kCenterOffset);
    double iters = 0.0;
    t0 = std::chrono::steady_clock::now();
    for (std::size_t i = 0; i < n; ++i) {
        Rng rng = make_rng(ds.sample_seed(i));
        const auto e = FundamentalExpansion::random(eq, d.dim(), centers, rng);
        const auto sol = solve_on_domain(eq, d, [&e](const Point& p) { return e(p); }, nullptr, h_oracle);
        iters += sol.iterations;
    }
    rep.t_fd = since(t0);
    rep.mean_fd_iterations = iters / static_cast<double>(n);
    if (rep.t_mad > 0.0) rep.ratio = rep.t_fd / rep.t_mad;
    return rep;
}

}  // namespace mad
