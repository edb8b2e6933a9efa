#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mad/dataset.hpp"
#include "mad/equation.hpp"
#include "mad/geometry.hpp"

namespace mad {

struct GrfConfig {
    double length_scale = 0.1;
    double jitter = 1e-10;
};

struct SmoothingConfig {
    double sigma = 5.0;  // grid-index units; kernel truncated at 4 sigma
};

/// exp(-|t1 - t2|^2 / (2 l^2)).
double rbf_covariance(double t1, double t2, double length_scale);

/// Zero-mean Gaussian process on the unrolled boundary [0, L] with RBF
/// covariance, sampled at the Mb boundary parameters plus t = L; the linear
/// function through the two endpoint values is subtracted so the closing
/// point matches t = 0, then the closing point is dropped.
///
/// The covariance factorization retries with jitter 1e-10, 1e-8, 1e-6 and
/// throws std::runtime_error if all fail.
std::vector<double> sample_grf_boundary(const Domain& d, const GrfConfig& cfg, std::uint64_t seed);

/// The Gaussian process values at the Mb parameters and t = L before the
/// endpoint correction.
std::vector<double> sample_grf_raw(const Domain& d, const GrfConfig& cfg, std::uint64_t seed);

/// Same draw but returns all Mb + 1 values (the last one equals the first).
std::vector<double> sample_grf_boundary_closed(const Domain& d, const GrfConfig& cfg, std::uint64_t seed);

/// i.i.d. N(0,1) noise on the resolution x resolution lattice.
std::vector<double> raw_source_noise(const Domain& d, std::uint64_t seed);

/// Separable truncated Gaussian smoothing of a res x res lattice field with
/// per-node kernel renormalization at the edges (no wraparound).
std::vector<double> smooth_lattice(std::span<const double> field, std::size_t res, const SmoothingConfig& cfg);

/// Raw noise smoothed on the lattice and restricted to the domain's grid nodes.
std::vector<double> sample_smoothed_source(const Domain& d, const SmoothingConfig& cfg, std::uint64_t seed);

/// PINN-baseline inputs: GRF boundary values plus, for equations with a
/// source, smoothed random sources. Records carry no solution values.
Dataset generate_grf_dataset(const EquationSpec& eq, const Domain& d, std::size_t n_samples, std::uint64_t seed,
                             const GrfConfig& grf = {}, const SmoothingConfig& smoothing = {},
                             Provenance provenance = Provenance::Train);

}  // namespace mad
