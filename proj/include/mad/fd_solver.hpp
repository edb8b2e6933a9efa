#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mad/equation.hpp"
#include "mad/geometry.hpp"

namespace mad {

/// Uniform lattice over a 2D domain's bounding box. Unknowns are the lattice
/// nodes strictly inside the domain; every other node is a Dirichlet or
/// inactive node. Storage is x-major: index = i * n + j.
class FdGrid {
public:
    FdGrid(DomainKind kind, double h);

    DomainKind kind() const { return kind_; }
    double h() const { return h_; }
    std::size_t n() const { return n_; }
    std::size_t size() const { return n_ * n_; }
    Point node(std::size_t i, std::size_t j) const;
    Point node(std::size_t idx) const { return node(idx / n_, idx % n_); }
    /// 1 at unknowns, 0 elsewhere.
    const std::vector<double>& mask() const { return mask_; }
    std::size_t unknown_count() const { return unknowns_; }
    bool is_unknown(std::size_t idx) const { return mask_[idx] != 0.0; }

    /// Lattice index of a domain grid node when the FD lattice refines the
    /// evaluation lattice of `d` by an integer factor.
    std::vector<std::size_t> restriction_to(const Domain& d) const;

private:
    DomainKind kind_;
    double h_;
    std::size_t n_;
    Point origin_;
    std::vector<double> mask_;
    std::size_t unknowns_ = 0;
};

using FieldFn = std::function<double(const Point&)>;

/// Five-point discretization of lap(u) + k u = f with Dirichlet data.
struct FdProblem {
    EquationSpec eq;
    FdGrid grid;
    std::vector<double> dirichlet;  // per lattice node; read at non-unknown nodes
    std::vector<double> source;     // per lattice node; empty means f = 0
};

/// Dirichlet values are g at the nearest boundary point of each non-unknown
/// node (exact for the square and L-shape, first order at disk cut cells).
FdProblem make_fd_problem(const EquationSpec& eq, DomainKind kind, double h, const FieldFn& g,
                          const FieldFn& f = nullptr);

struct FdSolution {
    std::vector<double> u;  // all lattice nodes; Dirichlet nodes carry g
    int iterations = 0;
    double relative_residual = 0.0;
    double seconds = 0.0;
};

class FdNonConvergence : public std::runtime_error {
public:
    FdNonConvergence(int iterations, double residual);
    int iterations() const { return iterations_; }
    double residual() const { return residual_; }

private:
    int iterations_;
    double residual_;
};

/// Preconditioned MINRES (symmetric, handles the indefinite Helmholtz shift)
/// with a diagonal preconditioner. Throws FdNonConvergence if the relative
/// residual ||b - A u|| / ||b|| is still above tol after max_iter iterations.
FdSolution solve_fd(const FdProblem& p, double tol = 1e-10, int max_iter = 200000);

/// lap_h(u) + k u - f at unknown nodes, zero elsewhere. `u` covers every lattice
/// node; an empty `f` means a source-free equation.
std::vector<double> fd_residual(const FdGrid& grid, std::span<const double> u, double k,
                                std::span<const double> f = {});

/// Lattice samples of a function on the FD grid.
std::vector<double> sample_on_lattice(const FdGrid& grid, const FieldFn& fn);

/// Euclidean norm of the entries of v at unknown nodes.
double interior_norm(const FdGrid& grid, std::span<const double> v);

}  // namespace mad
