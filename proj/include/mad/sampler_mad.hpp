#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mad/dataset.hpp"
#include "mad/equation.hpp"
#include "mad/geometry.hpp"
#include "mad/neural/mlp.hpp"
#include "mad/special_functions.hpp"

namespace mad {

/// Sine-activated [2, 50, 50, 1] network used as an exact solution for
/// equations with a source (MAD0). Its Laplacian is computed in closed form.
class SineNetSolution {
public:
    static constexpr std::size_t kWidth = 50;

    explicit SineNetSolution(nn::Mlp net);
    /// Weights and biases i.i.d. N(0, 1/fan_in).
    static SineNetSolution random(Rng& rng, std::size_t input_dim = 2);
    /// Every parameter zero, so u is identically zero.
    static SineNetSolution zero(std::size_t input_dim = 2);

    const nn::Mlp& net() const { return net_; }

    std::vector<double> values(std::span<const Point> pts) const;
    /// lap(u) + k u at each point.
    std::vector<double> source(std::span<const Point> pts, double k) const;

private:
    nn::Mlp net_;
};

/// u(x) = sum_i c_i Phi_i(x, y_i) with centers outside the closed domain.
class FundamentalExpansion {
public:
    struct Term {
        special::KernelId kernel;
        Point center;
        double coeff;
    };

    explicit FundamentalExpansion(std::vector<Term> terms) : terms_(std::move(terms)) {}

    /// Kernel family for an equation: Log2D / Newton3D for k = 0, a J0 and a
    /// Y0 term per center for k > 0.
    static std::vector<special::KernelId> kernels_for(const EquationSpec& eq, int dim);

    /// Draws one N(0,1) coefficient per (center, kernel) pair, center-major.
    static FundamentalExpansion random(const EquationSpec& eq, int dim, std::span<const Point> centers, Rng& rng);

    const std::vector<Term>& terms() const { return terms_; }
    double operator()(const Point& x) const;

private:
    std::vector<Term> terms_;
};

/// u(x, y) = sum_i (A cos(a x) + B sin(a x)) (C cosh(a y) + D sinh(a y)).
class TrigHyperbolicExpansion {
public:
    struct Term {
        double A, B, C, D, a;
    };
    /// |a| above this bound is redrawn.
    static constexpr double kMaxRate = 6.0;

    explicit TrigHyperbolicExpansion(std::vector<Term> terms) : terms_(std::move(terms)) {}
    static TrigHyperbolicExpansion random(int n_terms, Rng& rng);

    const std::vector<Term>& terms() const { return terms_; }
    double operator()(const Point& p) const;

private:
    std::vector<Term> terms_;
};

inline constexpr int kDefaultCenters2D = 100;
inline constexpr int kDefaultCenters3D = 400;
inline constexpr double kCenterOffset = 0.5;
inline constexpr int kDefaultMad2Terms = 10;

int default_center_count(const Domain& d);

// Realize an analytic solution on a domain's boundary samples and grid nodes.
FieldSample realize(const SineNetSolution& s, const EquationSpec& eq, const Domain& d);
FieldSample realize(const FundamentalExpansion& e, const Domain& d);
FieldSample realize(const TrigHyperbolicExpansion& e, const Domain& d);

/// MAD0: requires a general source.
FieldSample sample_mad0(const EquationSpec& eq, const Domain& d, std::uint64_t seed);
/// MAD1: requires a zero source and k >= 0.
FieldSample sample_mad1(const EquationSpec& eq, const Domain& d, int n_centers, std::uint64_t seed);
/// MAD2: 2D domains only.
FieldSample sample_mad2(const Domain& d, int n_terms, std::uint64_t seed);

struct GeneratorOptions {
    int n_centers = 0;  // 0 = default for the domain dimension
    int n_terms = kDefaultMad2Terms;
    Provenance provenance = Provenance::Train;
    unsigned threads = 1;
};

/// N records with per-sample seeds derived from the master seed. Throws for
/// incompatible generator/equation pairs and n_samples < 1.
Dataset generate_dataset(Generator generator, const EquationSpec& eq, const Domain& d, std::size_t n_samples,
                         std::uint64_t seed, const GeneratorOptions& opts = {});

/// Throws std::invalid_argument when the generator cannot produce data for eq on d.
void check_generator_compatible(Generator generator, const EquationSpec& eq, const Domain& d);

}  // namespace mad
