#include "mad/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>

namespace mad {
namespace {

constexpr std::array<Point, 5> kSquareVertices{{{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0}}};
constexpr std::array<Point, 7> kLShapeVertices{
    {{0, 0}, {1, 0}, {1, 0.5}, {0.5, 0.5}, {0.5, 1}, {0, 1}, {0, 0}}};

std::span<const Point> polygon(DomainKind kind) {
    switch (kind) {
        case DomainKind::UnitSquare: return kSquareVertices;
        case DomainKind::LShape: return kLShapeVertices;
        default: throw std::invalid_argument("domain has no polygonal boundary");
    }
}

double segment_distance(const Point& p, const Point& a, const Point& b) {
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double len2 = dx * dx + dy * dy;
    double s = ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2;
    s = std::clamp(s, 0.0, 1.0);
    return std::hypot(p.x - (a.x + s * dx), p.y - (a.y + s * dy));
}

Point polygon_point(std::span<const Point> v, double t) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        const double len = distance(v[i], v[i + 1]);
        if (t < acc + len || i + 2 == v.size()) {
            const double s = (t - acc) / len;
            return {v[i].x + s * (v[i + 1].x - v[i].x), v[i].y + s * (v[i + 1].y - v[i].y), 0.0};
        }
        acc += len;
    }
    return v.front();
}

double polygon_param(std::span<const Point> v, const Point& p) {
    double acc = 0.0;
    double best = 0.0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        const double len = distance(v[i], v[i + 1]);
        const double d = segment_distance(p, v[i], v[i + 1]);
        if (d < best_d - 1e-15) {
            best_d = d;
            const double s = std::clamp(((p.x - v[i].x) * (v[i + 1].x - v[i].x) +
                                         (p.y - v[i].y) * (v[i + 1].y - v[i].y)) /
                                            (len * len),
                                        0.0, 1.0);
            best = acc + s * len;
        }
        acc += len;
    }
    return best >= acc ? best - acc : best;
}

bool in_lshape_closed(const Point& p, double tol) {
    const bool in_square = p.x >= -tol && p.x <= 1 + tol && p.y >= -tol && p.y <= 1 + tol;
    const bool in_notch = p.x > 0.5 + tol && p.y > 0.5 + tol;
    return in_square && !in_notch;
}

}  // namespace

double distance(const Point& a, const Point& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    const double dz = a.z - b.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

std::string_view to_string(DomainKind k) {
    switch (k) {
        case DomainKind::UnitSquare: return "square";
        case DomainKind::UnitDisk: return "disk";
        case DomainKind::LShape: return "lshape";
        case DomainKind::UnitCube: return "cube3d";
    }
    return "unknown";
}

DomainKind parse_domain_kind(std::string_view s) {
    if (s == "square") return DomainKind::UnitSquare;
    if (s == "disk") return DomainKind::UnitDisk;
    if (s == "lshape") return DomainKind::LShape;
    if (s == "cube3d" || s == "cube") return DomainKind::UnitCube;
    throw std::invalid_argument("unsupported domain kind: " + std::string(s));
}

int dimension(DomainKind k) { return k == DomainKind::UnitCube ? 3 : 2; }

int default_boundary_count(DomainKind k) { return k == DomainKind::UnitDisk ? 100 : 200; }

double perimeter(DomainKind kind) {
    switch (kind) {
        case DomainKind::UnitSquare: return 4.0;
        case DomainKind::LShape: return 4.0;
        case DomainKind::UnitDisk: return 2.0 * std::numbers::pi;
        case DomainKind::UnitCube: break;
    }
    throw std::invalid_argument("perimeter: 2D domains only");
}

double Domain::extent() const { return kind_ == DomainKind::UnitDisk ? 2.0 : 1.0; }

double Domain::boundary_length() const {
    return kind_ == DomainKind::UnitCube ? 6.0 : perimeter(kind_);
}

bool Domain::contains(const Point& p) const {
    switch (kind_) {
        case DomainKind::UnitSquare: return p.x > 0 && p.x < 1 && p.y > 0 && p.y < 1;
        case DomainKind::UnitDisk: return p.x * p.x + p.y * p.y < 1.0;
        case DomainKind::LShape:
            return p.x > 0 && p.x < 1 && p.y > 0 && p.y < 1 && !(p.x >= 0.5 && p.y >= 0.5);
        case DomainKind::UnitCube:
            return p.x > 0 && p.x < 1 && p.y > 0 && p.y < 1 && p.z > 0 && p.z < 1;
    }
    return false;
}

bool Domain::contains_closed(const Point& p, double tol) const {
    switch (kind_) {
        case DomainKind::UnitSquare:
            return p.x >= -tol && p.x <= 1 + tol && p.y >= -tol && p.y <= 1 + tol;
        case DomainKind::UnitDisk: return std::hypot(p.x, p.y) <= 1.0 + tol;
        case DomainKind::LShape: return in_lshape_closed(p, tol);
        case DomainKind::UnitCube:
            return p.x >= -tol && p.x <= 1 + tol && p.y >= -tol && p.y <= 1 + tol && p.z >= -tol &&
                   p.z <= 1 + tol;
    }
    return false;
}

double Domain::distance_to_boundary(const Point& p) const {
    switch (kind_) {
        case DomainKind::UnitDisk: return std::abs(1.0 - std::hypot(p.x, p.y));
        case DomainKind::UnitCube: {
            const Point c{std::clamp(p.x, 0.0, 1.0), std::clamp(p.y, 0.0, 1.0), std::clamp(p.z, 0.0, 1.0)};
            if (!(c == p)) return distance(p, c);
            return std::min({p.x, 1 - p.x, p.y, 1 - p.y, p.z, 1 - p.z});
        }
        default: {
            const auto v = polygon(kind_);
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i + 1 < v.size(); ++i) best = std::min(best, segment_distance(p, v[i], v[i + 1]));
            return best;
        }
    }
}

Point Domain::center() const {
    switch (kind_) {
        case DomainKind::UnitDisk: return {0, 0, 0};
        case DomainKind::UnitCube: return {0.5, 0.5, 0.5};
        default: return {0.5, 0.5, 0};
    }
}

double Domain::circumradius() const {
    switch (kind_) {
        case DomainKind::UnitDisk: return 1.0;
        case DomainKind::UnitCube: return std::sqrt(3.0) / 2.0;
        default: return std::sqrt(2.0) / 2.0;
    }
}

Domain build_domain(DomainKind kind, const GridSpec& grid) {
    if (grid.resolution < 3) throw std::invalid_argument("build_domain: resolution must be >= 3");
    if (kind != DomainKind::UnitCube && grid.boundary_count < 4) {
        throw std::invalid_argument("build_domain: boundary_count must be >= 4");
    }
    Domain d;
    d.kind_ = kind;
    d.grid_ = grid;
    const int n = grid.resolution;
    d.origin_ = kind == DomainKind::UnitDisk ? Point{-1, -1, 0} : Point{0, 0, 0};
    d.spacing_ = d.extent() / (n - 1);
    const double h = d.spacing_;
    auto coord = [&](int i, double o) { return i == n - 1 ? o + d.extent() : o + i * h; };

    if (kind == DomainKind::UnitCube) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                for (int k = 0; k < n; ++k) {
                    const Point p{coord(i, 0), coord(j, 0), coord(k, 0)};
                    const std::size_t idx = (static_cast<std::size_t>(i) * n + j) * n + k;
                    d.grid_nodes_.push_back(p);
                    d.lattice_index_.push_back(idx);
                    const bool on_surface = i == 0 || j == 0 || k == 0 || i == n - 1 || j == n - 1 || k == n - 1;
                    if (on_surface) d.boundary_points_.push_back(p);
                }
            }
        }
        d.grid_.boundary_count = static_cast<int>(d.boundary_points_.size());
        return d;
    }

    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const Point p{coord(i, d.origin_.x), coord(j, d.origin_.y), 0.0};
            const bool keep = kind == DomainKind::UnitDisk ? d.contains(p) : d.contains_closed(p, 1e-12);
            if (keep) {
                d.grid_nodes_.push_back(p);
                d.lattice_index_.push_back(static_cast<std::size_t>(i) * n + j);
            }
        }
    }
    const double length = perimeter(kind);
    const int mb = grid.boundary_count;
    d.boundary_points_.reserve(mb);
    d.boundary_params_.reserve(mb);
    for (int i = 0; i < mb; ++i) {
        const double t = length * i / mb;
        d.boundary_params_.push_back(t);
        d.boundary_points_.push_back(boundary_param_to_point(kind, t));
    }
    return d;
}

Point boundary_param_to_point(DomainKind kind, double t) {
    if (kind == DomainKind::UnitCube) throw std::invalid_argument("boundary_param_to_point: 2D domains only");
    const double length = perimeter(kind);
    if (!(t >= 0.0 && t < length)) throw std::out_of_range("boundary_param_to_point: t outside [0, L)");
    if (kind == DomainKind::UnitDisk) return {std::cos(t), std::sin(t), 0.0};
    return polygon_point(polygon(kind), t);
}

Point boundary_param_to_point(const Domain& d, double t) { return boundary_param_to_point(d.kind(), t); }

double boundary_point_to_param(DomainKind kind, const Point& p) {
    if (kind == DomainKind::UnitDisk) {
        double a = std::atan2(p.y, p.x);
        if (a < 0) a += 2.0 * std::numbers::pi;
        return a >= 2.0 * std::numbers::pi ? 0.0 : a;
    }
    return polygon_param(polygon(kind), p);
}

std::vector<Point> exterior_centers(const Domain& d, int count, double offset) {
    if (count < 1) throw std::invalid_argument("exterior_centers: count must be >= 1");
    if (!(offset > 0)) throw std::invalid_argument("exterior_centers: offset must be > 0");
    const Point c = d.center();
    const double radius = d.circumradius() + offset;
    std::vector<Point> out;
    out.reserve(count);
    if (d.dim() == 2) {
        for (int i = 0; i < count; ++i) {
            const double a = 2.0 * std::numbers::pi * i / count;
            out.push_back({c.x + radius * std::cos(a), c.y + radius * std::sin(a), 0.0});
        }
        return out;
    }
    // Fibonacci lattice
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
        const double zc = count == 1 ? 1.0 : 1.0 - 2.0 * (i + 0.5) / count;
        const double rxy = std::sqrt(std::max(0.0, 1.0 - zc * zc));
        const double a = golden * i;
        out.push_back({c.x + radius * rxy * std::cos(a), c.y + radius * rxy * std::sin(a), c.z + radius * zc});
    }
    return out;
}

}  // namespace mad
