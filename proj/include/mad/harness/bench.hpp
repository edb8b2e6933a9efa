#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "mad/equation.hpp"
#include "mad/geometry.hpp"

namespace mad {

struct BenchReport {
    std::size_t n = 0;
    double h_oracle = 0.0;
    double t_mad = 0.0;
    double t_fd = 0.0;
    std::optional<double> ratio;  // empty when undefined (n = 0)
    double mean_fd_iterations = 0.0;
};

/// Wall time of MAD1 generation of n samples against FD solves of the same n
/// boundary value problems (Dirichlet data taken from each MAD1 solution) at
/// spacing h_oracle.
BenchReport bench_generation(const EquationSpec& eq, const Domain& d, std::size_t n, std::uint64_t seed,
                             double h_oracle, unsigned threads = 1);

}  // namespace mad
