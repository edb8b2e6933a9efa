#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace mad {

/// Spatial coordinate. 2D domains leave z at zero.
struct Point {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

double distance(const Point& a, const Point& b);

enum class DomainKind { UnitSquare, UnitDisk, LShape, UnitCube };

std::string_view to_string(DomainKind k);
/// Accepts the CLI spellings square|disk|lshape|cube3d.
DomainKind parse_domain_kind(std::string_view s);

int dimension(DomainKind k);

struct GridSpec {
    int resolution = 51;      // nodes per axis
    int boundary_count = 200;  // Mb; ignored for UnitCube (surface grid nodes are used)
};

/// Full-scale boundary sample count for a kind (square 200, disk 100, L-shape 200).
int default_boundary_count(DomainKind k);

/// Computational domain with its evaluation grid and boundary samples.
///
/// Grid nodes are the nodes of a uniform resolution^dim lattice over the
/// bounding box that belong to the domain: the closed square / L-shape
/// (so the 51x51 square yields 2601 nodes and the L-shape 1976), the open
/// unit disk, and the closed cube. Boundary samples are equally spaced in
/// arc length starting at t = 0 and walking counter-clockwise. For the cube
/// they are the surface nodes of the lattice in lexicographic order.
class Domain {
public:
    DomainKind kind() const { return kind_; }
    int dim() const { return dimension(kind_); }
    const GridSpec& grid() const { return grid_; }

    /// Lattice spacing along each axis.
    double spacing() const { return spacing_; }
    /// Lower corner of the bounding box.
    const Point& origin() const { return origin_; }
    /// Side length of the (cubic) bounding box.
    double extent() const;

    const std::vector<Point>& grid_nodes() const { return grid_nodes_; }
    /// Lattice (i, j[, k]) index of each grid node, flattened as i*res + j (2D).
    const std::vector<std::size_t>& grid_node_lattice_index() const { return lattice_index_; }
    const std::vector<Point>& boundary_points() const { return boundary_points_; }
    /// Arc-length parameter of each boundary point (2D only; empty for the cube).
    const std::vector<double>& boundary_params() const { return boundary_params_; }

    /// Total boundary length L (2D). For the cube this is the surface area.
    double boundary_length() const;

    /// Strict interior test.
    bool contains(const Point& p) const;
    /// Closure test with tolerance.
    bool contains_closed(const Point& p, double tol = 1e-12) const;
    /// Distance from p to the boundary of the domain.
    double distance_to_boundary(const Point& p) const;

    /// Center and radius of the smallest ball about the bounding-box center
    /// that encloses the domain.
    Point center() const;
    double circumradius() const;

private:
    friend Domain build_domain(DomainKind kind, const GridSpec& grid);

    DomainKind kind_ = DomainKind::UnitSquare;
    GridSpec grid_;
    double spacing_ = 0.0;
    Point origin_;
    std::vector<Point> grid_nodes_;
    std::vector<std::size_t> lattice_index_;
    std::vector<Point> boundary_points_;
    std::vector<double> boundary_params_;
};

/// Throws std::invalid_argument when resolution < 3 or boundary_count < 4.
Domain build_domain(DomainKind kind, const GridSpec& grid);

/// Maps arc-length t in [0, L) onto the boundary. t = 0 is (0,0) for the
/// square and L-shape and (1,0) for the disk. 2D kinds only.
Point boundary_param_to_point(DomainKind kind, double t);
Point boundary_param_to_point(const Domain& d, double t);

/// Inverse of boundary_param_to_point for a point on the boundary (2D).
double boundary_point_to_param(DomainKind kind, const Point& p);

/// Perimeter of a 2D kind.
double perimeter(DomainKind kind);

/// `count` source points on a circle (sphere for the cube) of radius
/// circumradius + offset about the domain center, equally spaced in angle
/// (Fibonacci lattice on the sphere).
std::vector<Point> exterior_centers(const Domain& d, int count, double offset);

}  // namespace mad
