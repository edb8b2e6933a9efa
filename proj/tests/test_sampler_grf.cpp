#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "mad/random.hpp"
#include "mad/sampler_grf.hpp"

using namespace mad;

TEST_CASE("RBF covariance at one length scale") {
    CHECK(rbf_covariance(0.3, 0.4, 0.1) == doctest::Approx(std::exp(-0.5)).epsilon(1e-15));
    CHECK(rbf_covariance(0.7, 0.7, 0.1) == 1.0);
}

TEST_CASE("GRF boundary closes exactly") {
    for (auto kind : {DomainKind::UnitSquare, DomainKind::UnitDisk, DomainKind::LShape}) {
        const Domain d = build_domain(kind, {21, default_boundary_count(kind)});
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const auto g = sample_grf_boundary_closed(d, {}, seed);
            CHECK(g.front() == g.back());
            const auto open = sample_grf_boundary(d, {}, seed);
            CHECK(open.size() == d.boundary_points().size());
            CHECK(std::equal(open.begin(), open.end(), g.begin()));
        }
    }
}

TEST_CASE("GRF covariance matches the endpoint-corrected kernel") {
    const Domain d = build_domain(DomainKind::UnitSquare, {11, 50});
    const GrfConfig cfg;
    const auto& t = d.boundary_params();
    const std::size_t n = t.size();
    const double length = d.boundary_length();

    Eigen::MatrixXd k(n + 1, n + 1);
    for (std::size_t i = 0; i <= n; ++i)
        for (std::size_t j = 0; j <= n; ++j)
            k(i, j) = rbf_covariance(i < n ? t[i] : length, j < n ? t[j] : length, cfg.length_scale);
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        p(i, i) += 1.0;
        p(i, n) -= t[i] / length;
        p(i, 0) += t[i] / length;
    }
    const Eigen::MatrixXd expect = p * k * p.transpose();

    const int draws = 10000;
    Eigen::MatrixXd emp = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd raw_var = Eigen::VectorXd::Zero(n + 1);
    for (int s = 0; s < draws; ++s) {
        const auto g = sample_grf_boundary(d, cfg, 1000 + s);
        const Eigen::Map<const Eigen::VectorXd> v(g.data(), n);
        emp += v * v.transpose();
        const auto raw = sample_grf_raw(d, cfg, 1000 + s);
        for (std::size_t i = 0; i <= n; ++i) raw_var(i) += raw[i] * raw[i];
    }
    emp /= draws;
    raw_var /= draws;
    double worst_z = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double se = std::sqrt((expect(i, i) * expect(j, j) + expect(i, j) * expect(i, j)) / draws);
            worst_z = std::max(worst_z, std::abs(emp(i, j) - expect(i, j)) / se);
        }
    CHECK(worst_z < 5.0);
    for (std::size_t i = 1; i < n; ++i) CHECK(raw_var(i) == doctest::Approx(1.0).epsilon(0.06));
}

TEST_CASE("smoothing preserves constants and reduces to identity as sigma vanishes") {
    const std::size_t res = 21;
    std::vector<double> c(res * res, 2.5);
    for (double v : smooth_lattice(c, res, {5.0})) CHECK(v == doctest::Approx(2.5).epsilon(1e-14));
    const Domain d = build_domain(DomainKind::UnitSquare, {21, 80});
    const auto raw = raw_source_noise(d, 3);
    const auto sm = smooth_lattice(raw, res, {1e-3});
    for (std::size_t i = 0; i < raw.size(); ++i) CHECK(std::abs(sm[i] - raw[i]) < 1e-9);
}

TEST_CASE("smoothing equals a brute-force truncated convolution") {
    const Domain d = build_domain(DomainKind::UnitSquare, {51, 200});
    const int n = 51;
    const double sigma = 5.0;
    const int radius = static_cast<int>(std::ceil(4 * sigma));
    const auto raw = raw_source_noise(d, 11);
    const auto sm = smooth_lattice(raw, n, {sigma});
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double acc = 0.0, norm = 0.0;
            for (int a = -radius; a <= radius; ++a) {
                for (int b = -radius; b <= radius; ++b) {
                    if (i + a < 0 || i + a >= n || j + b < 0 || j + b >= n) continue;
                    const double w = std::exp(-0.5 * (a * a + b * b) / (sigma * sigma));
                    acc += w * raw[(i + a) * n + j + b];
                    norm += w;
                }
            }
            worst = std::max(worst, std::abs(acc / norm - sm[i * n + j]));
        }
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("smoothing is linear and contracts roughness") {
    const std::size_t res = 31;
    const Domain d = build_domain(DomainKind::UnitSquare, {31, 120});
    auto lap_energy = [&](const std::vector<double>& v) {
        double e = 0.0;
        for (std::size_t i = 1; i + 1 < res; ++i)
            for (std::size_t j = 1; j + 1 < res; ++j) {
                const double l = v[(i + 1) * res + j] + v[(i - 1) * res + j] + v[i * res + j + 1] +
                                 v[i * res + j - 1] - 4 * v[i * res + j];
                e += l * l;
            }
        return e;
    };
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto a = raw_source_noise(d, seed);
        const auto b = raw_source_noise(d, seed + 1000);
        std::vector<double> mix(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) mix[i] = 0.7 * a[i] - 1.3 * b[i];
        const double sigma = 1.0 + (seed % 5);
        const auto sa = smooth_lattice(a, res, {sigma});
        const auto sb = smooth_lattice(b, res, {sigma});
        const auto sm = smooth_lattice(mix, res, {sigma});
        double worst = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(sm[i] - (0.7 * sa[i] - 1.3 * sb[i])));
        CHECK(worst < 1e-12);
        CHECK(lap_energy(sa) <= lap_energy(a));
    }
}

TEST_CASE("PINN dataset contents") {
    const Domain d = build_domain(DomainKind::UnitSquare, {21, 80});
    const auto lap = generate_grf_dataset(EquationSpec::laplace(), d, 10, 4);
    CHECK_FALSE(lap.has_u);
    CHECK_FALSE(lap.has_f);
    CHECK(lap.g.size() == 10 * 80);
    const auto poi = generate_grf_dataset(EquationSpec::poisson(), d, 10, 4);
    CHECK(poi.has_f);
    CHECK(poi.f.size() == 10 * 441);
    CHECK(poi.g == lap.g);
    CHECK(generate_grf_dataset(EquationSpec::poisson(), d, 10, 4).same_content(poi));
}

TEST_CASE("GRF argument checks") {
    const Domain cube = build_domain(DomainKind::UnitCube, {5, 0});
    CHECK_THROWS_AS(sample_grf_boundary(cube, {}, 1), std::invalid_argument);
    const Domain d = build_domain(DomainKind::UnitSquare, {21, 80});
    CHECK_THROWS_AS(sample_grf_boundary(d, {0.0, 1e-10}, 1), std::invalid_argument);
    CHECK_THROWS_AS(smooth_lattice(std::vector<double>(10), 3, {}), std::invalid_argument);
}
