#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "mad/geometry.hpp"

using namespace mad;

namespace {

// Independent region predicates.
bool in_square(double x, double y) { return x >= 0 && x <= 1 && y >= 0 && y <= 1; }
bool in_lshape(double x, double y) { return in_square(x, y) && !(x > 0.5 && y > 0.5); }

}  // namespace

TEST_CASE("unit square grid and boundary counts") {
    const Domain d = build_domain(DomainKind::UnitSquare, {51, 200});
    CHECK(d.grid_nodes().size() == 2601);
    CHECK(d.boundary_points().size() == 200);
    CHECK(d.boundary_length() == doctest::Approx(4.0));
}

TEST_CASE("smallest square grid uses the corners as boundary samples") {
    const Domain d = build_domain(DomainKind::UnitSquare, {3, 4});
    CHECK(d.grid_nodes().size() == 9);
    const std::vector<Point> corners{{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}};
    REQUIRE(d.boundary_points().size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(d.boundary_points()[i].x == doctest::Approx(corners[i].x));
        CHECK(d.boundary_points()[i].y == doctest::Approx(corners[i].y));
    }
}

TEST_CASE("disk interior count matches brute-force enumeration") {
    const Domain d = build_domain(DomainKind::UnitDisk, {51, 100});
    std::size_t count = 0;
    for (int i = 0; i < 51; ++i) {
        for (int j = 0; j < 51; ++j) {
            const double x = -1.0 + 2.0 * i / 50.0;
            const double y = -1.0 + 2.0 * j / 50.0;
            if (x * x + y * y < 1.0 - 1e-12) ++count;
        }
    }
    CHECK(d.grid_nodes().size() == count);
    CHECK(d.boundary_points().size() == 100);
}

TEST_CASE("L-shape keeps the closed region without the top-right quadrant") {
    const Domain d = build_domain(DomainKind::LShape, {51, 200});
    CHECK(d.grid_nodes().size() == 1976);
    for (const auto& p : d.grid_nodes()) CHECK(in_lshape(p.x, p.y));
    CHECK(d.boundary_length() == doctest::Approx(4.0));
}

TEST_CASE("cube boundary is the lattice surface") {
    const Domain d = build_domain(DomainKind::UnitCube, {11, 0});
    CHECK(d.grid_nodes().size() == 1331);
    CHECK(d.boundary_points().size() == 1331 - 729);
    CHECK(d.dim() == 3);
}

TEST_CASE("boundary parametrization") {
    CHECK(boundary_param_to_point(DomainKind::UnitSquare, 0.0).x == doctest::Approx(0.0));
    const Point p1 = boundary_param_to_point(DomainKind::UnitSquare, 1.0);
    CHECK(p1.x == doctest::Approx(1.0));
    CHECK(p1.y == doctest::Approx(0.0));
    const Point pd = boundary_param_to_point(DomainKind::UnitDisk, std::numbers::pi);
    CHECK(pd.x == doctest::Approx(-1.0));
    CHECK(pd.y == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(perimeter(DomainKind::UnitDisk) == doctest::Approx(2 * std::numbers::pi));

    for (auto kind : {DomainKind::UnitSquare, DomainKind::UnitDisk, DomainKind::LShape}) {
        const double length = perimeter(kind);
        std::vector<Point> pts;
        for (int i = 0; i < 1000; ++i) pts.push_back(boundary_param_to_point(kind, length * i / 1000.0));
        double min_gap = 1e9;
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = i + 1; j < pts.size(); ++j) min_gap = std::min(min_gap, distance(pts[i], pts[j]));
        CHECK(min_gap > 1e-4);
        for (int i = 0; i < 1000; ++i) {
            const double t = length * i / 1000.0;
            CHECK(boundary_point_to_param(kind, pts[i]) == doctest::Approx(t).epsilon(1e-12));
        }
    }
}

TEST_CASE("exterior centers stay away from the domain") {
    SUBCASE("square") {
        const Domain d = build_domain(DomainKind::UnitSquare, {51, 200});
        const auto c = exterior_centers(d, 4, 0.5);
        REQUIRE(c.size() == 4);
        for (const auto& p : c) {
            CHECK(distance(p, Point{0.5, 0.5, 0}) == doctest::Approx(std::sqrt(2.0) / 2 + 0.5));
            double dmin = 1e9;
            for (const auto& b : d.boundary_points()) dmin = std::min(dmin, distance(p, b));
            CHECK(dmin >= 0.5 - 1e-12);
        }
    }
    SUBCASE("disk") {
        const Domain d = build_domain(DomainKind::UnitDisk, {51, 100});
        const auto c = exterior_centers(d, 1, 0.5);
        CHECK(std::hypot(c[0].x, c[0].y) == doctest::Approx(1.5));
    }
    SUBCASE("L-shape") {
        const Domain d = build_domain(DomainKind::LShape, {51, 200});
        for (const auto& p : exterior_centers(d, 100, 0.5)) CHECK_FALSE(in_square(p.x, p.y));
    }
    SUBCASE("no interior point coincides with a center") {
        for (auto kind : {DomainKind::UnitSquare, DomainKind::UnitDisk, DomainKind::LShape, DomainKind::UnitCube}) {
            const Domain d = build_domain(kind, {kind == DomainKind::UnitCube ? 11 : 51, default_boundary_count(kind)});
            const auto c = exterior_centers(d, kind == DomainKind::UnitCube ? 400 : 100, 0.5);
            double dmin = 1e9;
            for (const auto& x : d.grid_nodes())
                for (const auto& p : c) dmin = std::min(dmin, distance(x, p));
            CHECK(dmin > 0.0);
        }
    }
}

TEST_CASE("classification agrees with independent predicates") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.2, 1.2);
    const Domain sq = build_domain(DomainKind::UnitSquare, {21, 40});
    const Domain disk = build_domain(DomainKind::UnitDisk, {21, 40});
    const Domain ls = build_domain(DomainKind::LShape, {21, 40});
    int mismatches = 0;
    for (int i = 0; i < 10000; ++i) {
        const Point p{u(rng), u(rng), 0};
        const bool strict_sq = p.x > 0 && p.x < 1 && p.y > 0 && p.y < 1;
        const bool strict_ls = strict_sq && !(p.x >= 0.5 && p.y >= 0.5);
        mismatches += sq.contains(p) != strict_sq;
        mismatches += disk.contains(p) != (p.x * p.x + p.y * p.y < 1.0);
        mismatches += ls.contains(p) != strict_ls;
    }
    CHECK(mismatches == 0);
}

TEST_CASE("invalid grids are rejected") {
    CHECK_THROWS_AS(build_domain(DomainKind::UnitSquare, {2, 200}), std::invalid_argument);
    CHECK_THROWS_AS(build_domain(DomainKind::UnitSquare, {51, 3}), std::invalid_argument);
    CHECK_THROWS_AS(parse_domain_kind("hexagon"), std::invalid_argument);
}
