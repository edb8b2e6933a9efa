#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mad/dataset.hpp"
#include "mad/fd_solver.hpp"
#include "mad/sampler_grf.hpp"
#include "mad/sampler_mad.hpp"

namespace mad {

inline constexpr double kDefaultOracleSpacing = 0.005;
inline constexpr std::size_t kDefaultTestSize = 200;

/// Analytic test data from a MAD generator, seeded from the Test stream so
/// that records never coincide with a training set of the same master seed.
Dataset build_test_set_1(Generator generator, const EquationSpec& eq, const Domain& d, std::size_t n,
                         std::uint64_t seed, const GeneratorOptions& opts = {});

/// FD reference solution of one boundary value problem, restricted to the
/// domain's grid nodes.
struct OracleSolve {
    std::vector<double> u;
    int iterations = 0;
    double seconds = 0.0;
};
OracleSolve solve_on_domain(const EquationSpec& eq, const Domain& d, const FieldFn& g, const FieldFn& f, double h,
                            double tol = 1e-10);

/// Boundary function that interpolates samples at the domain's boundary
/// parameters linearly (and periodically) in arc length.
FieldFn boundary_interpolant(const Domain& d, std::vector<double> g);

/// Bilinear interpolant of a res x res lattice field over the domain's bounding box.
FieldFn lattice_interpolant(const Domain& d, std::vector<double> lattice);

struct TestSet2Options {
    double h_oracle = kDefaultOracleSpacing;
    GrfConfig grf;
    SmoothingConfig smoothing;
    double tol = 1e-10;
    unsigned threads = 1;
};

/// GRF boundary data (and smoothed sources for equations with a source)
/// solved by the FD oracle at h_oracle and sampled at the grid nodes.
Dataset build_test_set_2(const EquationSpec& eq, const Domain& d, std::size_t n, std::uint64_t seed,
                         const TestSet2Options& opts = {});

}  // namespace mad
