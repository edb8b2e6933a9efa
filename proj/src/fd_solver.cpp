#include "mad/fd_solver.hpp"

#include <chrono>
#include <cmath>

#include "mad/simd.hpp"

namespace mad {
namespace {

std::size_t checked_divisions(double extent, double h, const char* what) {
    const double q = extent / h;
    const double r = std::round(q);
    if (!(h > 0.0) || std::abs(q - r) > 1e-9 * std::max(1.0, q) || r < 2) {
        throw std::invalid_argument(std::string("FD spacing must divide the ") + what);
    }
    return static_cast<std::size_t>(r);
}

Point nearest_boundary_point(DomainKind kind, const Point& p) {
    switch (kind) {
        case DomainKind::UnitDisk: {
            const double r = std::hypot(p.x, p.y);
            return r == 0.0 ? Point{1, 0, 0} : Point{p.x / r, p.y / r, 0};
        }
        case DomainKind::UnitSquare:
        case DomainKind::LShape: {
            const double t = boundary_point_to_param(kind, p);
            return boundary_param_to_point(kind, t);
        }
        case DomainKind::UnitCube: break;
    }
    throw std::invalid_argument("FD solver supports 2D domains only");
}

struct Operator {
    simd::StencilGrid stencil;
    const std::vector<double>& mask;
    void apply(const double* x, double* y) const { simd::kernels().stencil5(stencil, mask.data(), x, y); }
};

}  // namespace

FdNonConvergence::FdNonConvergence(int iterations, double residual)
    : std::runtime_error("FD solver did not converge: " + std::to_string(iterations) +
                         " iterations, relative residual " + std::to_string(residual)),
      iterations_(iterations),
      residual_(residual) {}

FdGrid::FdGrid(DomainKind kind, double h) : kind_(kind), h_(h) {
    if (kind == DomainKind::UnitCube) throw std::invalid_argument("FD solver supports 2D domains only");
    const double extent = kind == DomainKind::UnitDisk ? 2.0 : 1.0;
    const std::size_t cells = checked_divisions(extent, h, "domain extent");
    if (kind == DomainKind::LShape) checked_divisions(0.5, h, "L-shape notch");
    n_ = cells + 1;
    origin_ = kind == DomainKind::UnitDisk ? Point{-1, -1, 0} : Point{0, 0, 0};
    mask_.assign(n_ * n_, 0.0);
    const std::size_t half = cells / 2;
    for (std::size_t i = 1; i + 1 < n_; ++i) {
        for (std::size_t j = 1; j + 1 < n_; ++j) {
            bool inside = true;
            if (kind == DomainKind::LShape) inside = !(i >= half && j >= half);
            if (kind == DomainKind::UnitDisk) {
                const Point p = node(i, j);
                inside = p.x * p.x + p.y * p.y < 1.0 - 1e-12;
            }
            if (inside) {
                mask_[i * n_ + j] = 1.0;
                ++unknowns_;
            }
        }
    }
}

Point FdGrid::node(std::size_t i, std::size_t j) const {
    const double extent = kind_ == DomainKind::UnitDisk ? 2.0 : 1.0;
    const double last = static_cast<double>(n_ - 1);
    return {origin_.x + extent * static_cast<double>(i) / last, origin_.y + extent * static_cast<double>(j) / last,
            0.0};
}

std::vector<std::size_t> FdGrid::restriction_to(const Domain& d) const {
    if (d.kind() != kind_) throw std::invalid_argument("restriction_to: domain kind mismatch");
    const std::size_t res = static_cast<std::size_t>(d.grid().resolution);
    if ((n_ - 1) % (res - 1) != 0) {
        throw std::invalid_argument("FD lattice does not refine the evaluation grid by an integer factor");
    }
    const std::size_t ratio = (n_ - 1) / (res - 1);
    std::vector<std::size_t> idx;
    idx.reserve(d.grid_nodes().size());
    for (std::size_t li : d.grid_node_lattice_index()) {
        const std::size_t i = li / res;
        const std::size_t j = li % res;
        idx.push_back(i * ratio * n_ + j * ratio);
    }
    return idx;
}

std::vector<double> sample_on_lattice(const FdGrid& grid, const FieldFn& fn) {
    std::vector<double> v(grid.size());
    for (std::size_t idx = 0; idx < v.size(); ++idx) v[idx] = fn(grid.node(idx));
    return v;
}

FdProblem make_fd_problem(const EquationSpec& eq, DomainKind kind, double h, const FieldFn& g, const FieldFn& f) {
    FdProblem p{eq, FdGrid(kind, h), {}, {}};
    const FdGrid& grid = p.grid;
    p.dirichlet.assign(grid.size(), 0.0);
    const std::size_t n = grid.n();
    for (std::size_t idx = 0; idx < grid.size(); ++idx) {
        if (grid.is_unknown(idx)) continue;
        // only nodes coupled to an unknown matter
        const std::size_t i = idx / n;
        const std::size_t j = idx % n;
        const bool coupled = (i > 0 && grid.is_unknown(idx - n)) || (i + 1 < n && grid.is_unknown(idx + n)) ||
                             (j > 0 && grid.is_unknown(idx - 1)) || (j + 1 < n && grid.is_unknown(idx + 1));
        const Point q = grid.node(idx);
        p.dirichlet[idx] = g(coupled ? nearest_boundary_point(kind, q) : q);
    }
    if (f) {
        p.source.assign(grid.size(), 0.0);
        for (std::size_t idx = 0; idx < grid.size(); ++idx) {
            if (grid.is_unknown(idx)) p.source[idx] = f(grid.node(idx));
        }
    }
    return p;
}

std::vector<double> fd_residual(const FdGrid& grid, std::span<const double> u, double k, std::span<const double> f) {
    if (u.size() != grid.size() || (!f.empty() && f.size() != grid.size())) {
        throw std::invalid_argument("fd_residual: field size mismatch");
    }
    std::vector<double> r(grid.size());
    const simd::StencilGrid sg{grid.n(), grid.n(), 1.0 / (grid.h() * grid.h()), k};
    simd::kernels().stencil5(sg, grid.mask().data(), u.data(), r.data());
    if (!f.empty()) {
        for (std::size_t i = 0; i < r.size(); ++i) r[i] -= grid.mask()[i] * f[i];
    }
    return r;
}

double interior_norm(const FdGrid& grid, std::span<const double> v) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (grid.is_unknown(i)) s += v[i] * v[i];
    }
    return std::sqrt(s);
}

FdSolution solve_fd(const FdProblem& p, double tol, int max_iter) {
    if (!(tol > 0.0)) throw std::invalid_argument("solve_fd: tol must be > 0");
    const auto start = std::chrono::steady_clock::now();
    const FdGrid& grid = p.grid;
    const std::size_t size = grid.size();
    if (p.dirichlet.size() != size || (!p.source.empty() && p.source.size() != size)) {
        throw std::invalid_argument("solve_fd: problem arrays do not match the grid");
    }
    const auto& mask = grid.mask();
    const double inv_h2 = 1.0 / (grid.h() * grid.h());
    const Operator op{{grid.n(), grid.n(), inv_h2, p.eq.k}, mask};
    const auto& K = simd::kernels();

    // b = f - A u_D, with u_D the Dirichlet data (zero at unknowns).
    std::vector<double> ud(size);
    for (std::size_t i = 0; i < size; ++i) ud[i] = mask[i] != 0.0 ? 0.0 : p.dirichlet[i];
    std::vector<double> b(size);
    op.apply(ud.data(), b.data());
    for (std::size_t i = 0; i < size; ++i) b[i] = mask[i] * ((p.source.empty() ? 0.0 : p.source[i]) - b[i]);
    const double bnorm = std::sqrt(K.dot(b.data(), b.data(), size));

    FdSolution sol;
    std::vector<double> x(size, 0.0);
    const double diag = std::abs(-4.0 * inv_h2 + p.eq.k);
    const double minv = diag > 0.0 ? 1.0 / diag : 1.0;

    std::vector<double> r(size), v(size), y(size), r1(size), r2(size), w(size), w1(size), w2(size), tmp(size);
    auto true_residual = [&]() {
        op.apply(x.data(), tmp.data());
        for (std::size_t i = 0; i < size; ++i) r[i] = b[i] - tmp[i];
        return std::sqrt(K.dot(r.data(), r.data(), size));
    };

    int total = 0;
    double rel = bnorm == 0.0 ? 0.0 : 1.0;
    if (bnorm > 0.0) {
        // Restarted on the true residual in case round-off stalls the recurrence.
        for (int cycle = 0; cycle < 20 && total < max_iter; ++cycle) {
            const double rnorm = true_residual();
            rel = rnorm / bnorm;
            if (rel <= tol) break;
            // MINRES on A d = r with M = diag * I.
            std::copy(r.begin(), r.end(), r1.begin());
            std::copy(r.begin(), r.end(), r2.begin());
            for (std::size_t i = 0; i < size; ++i) y[i] = minv * r1[i];
            const double beta1 = std::sqrt(K.dot(r1.data(), y.data(), size));
            double beta = beta1, oldb = 0.0, dbar = 0.0, epsln = 0.0, phibar = beta1;
            double cs = -1.0, sn = 0.0;
            std::fill(w.begin(), w.end(), 0.0);
            std::fill(w2.begin(), w2.end(), 0.0);
            const double target = tol * bnorm / rnorm;
            for (int it = 1; total < max_iter; ++it, ++total) {
                const double s = 1.0 / beta;
                for (std::size_t i = 0; i < size; ++i) v[i] = s * y[i];
                op.apply(v.data(), y.data());
                if (it >= 2) K.axpy(-beta / oldb, r1.data(), y.data(), size);
                const double alfa = K.dot(v.data(), y.data(), size);
                K.axpy(-alfa / beta, r2.data(), y.data(), size);
                r1.swap(r2);
                std::copy(y.begin(), y.end(), r2.begin());
                for (std::size_t i = 0; i < size; ++i) y[i] = minv * r2[i];
                oldb = beta;
                beta = std::sqrt(std::max(0.0, K.dot(r2.data(), y.data(), size)));
                const double oldeps = epsln;
                const double delta = cs * dbar + sn * alfa;
                const double gbar = sn * dbar - cs * alfa;
                epsln = sn * beta;
                dbar = -cs * beta;
                const double gamma = std::max(std::hypot(gbar, beta), 1e-300);
                cs = gbar / gamma;
                sn = beta / gamma;
                const double phi = cs * phibar;
                phibar = sn * phibar;
                w1.swap(w2);
                w2.swap(w);
                const double denom = 1.0 / gamma;
                for (std::size_t i = 0; i < size; ++i) w[i] = (v[i] - oldeps * w1[i] - delta * w2[i]) * denom;
                K.axpy(phi, w.data(), x.data(), size);
                if (phibar / beta1 <= 0.5 * target || beta == 0.0) {
                    ++total;
                    break;
                }
            }
        }
        rel = true_residual() / bnorm;
    }
    sol.iterations = total;
    sol.relative_residual = rel;
    if (rel > tol) throw FdNonConvergence(total, rel);
    sol.u.resize(size);
    for (std::size_t i = 0; i < size; ++i) sol.u[i] = mask[i] != 0.0 ? x[i] : p.dirichlet[i];
    sol.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return sol;
}

}  // namespace mad
