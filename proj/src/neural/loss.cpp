#include "mad/neural/loss.hpp"

#include <stdexcept>

#include "mad/simd.hpp"

namespace mad::nn {
namespace {

using simd::Trans;

std::vector<double> coords(const std::vector<Point>& pts, std::size_t dim) {
    std::vector<double> x(pts.size() * dim);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        x[i * dim] = pts[i].x;
        x[i * dim + 1] = pts[i].y;
        if (dim == 3) x[i * dim + 2] = pts[i].z;
    }
    return x;
}

void check_batch(const FieldOperator& model, const OperatorBatch& b) {
    if (b.n == 0) throw std::invalid_argument("loss: empty batch");
    if (b.dim != model.spatial_dim()) throw std::invalid_argument("loss: spatial dimension mismatch");
    if (b.boundary_size() != model.boundary_inputs()) throw std::invalid_argument("loss: boundary size mismatch");
    if (!b.f.empty() && model.source_inputs() == 0) {
        throw std::invalid_argument("loss: batch has a source term but the model takes no source input");
    }
}

double mean_square(const std::vector<double>& v) {
    double s = 0.0;
    for (double e : v) s += e * e;
    return s / static_cast<double>(v.size());
}

// Branch outputs and tapes of every active net.
struct BranchPass {
    std::vector<MlpTape> tapes;
    std::vector<std::vector<double>> b;
};

BranchPass run_branches(const OperatorModel& model, const OperatorBatch& batch) {
    BranchPass bp;
    const auto& nets = model.nets();
    bp.tapes.resize(nets.size());
    bp.b.resize(nets.size());
    for (std::size_t q = 0; q < nets.size(); ++q) {
        const auto in = model.branch_input(q, batch.g, batch.f, batch.n);
        nets[q].branch().forward(in, batch.n, JetOrder::Values, bp.tapes[q]);
        const auto out = bp.tapes[q].output_values();
        bp.b[q].assign(out.begin(), out.end());
    }
    return bp;
}

std::size_t block_offset(const OperatorModel& model, std::size_t q) {
    std::size_t off = 0;
    for (std::size_t i = 0; i < q; ++i) off += model.nets()[i].num_params();
    return off;
}

}  // namespace

OperatorBatch OperatorBatch::subset(std::span<const std::size_t> idx) const {
    OperatorBatch s;
    s.n = idx.size();
    s.dim = dim;
    s.k = k;
    s.x = x;
    s.xb = xb;
    auto gather = [&](const std::vector<double>& src, std::size_t width, std::vector<double>& dst) {
        if (src.empty()) return;
        dst.resize(idx.size() * width);
        for (std::size_t r = 0; r < idx.size(); ++r) {
            if (idx[r] >= n) throw std::out_of_range("OperatorBatch::subset: index out of range");
            std::copy(src.begin() + idx[r] * width, src.begin() + (idx[r] + 1) * width, dst.begin() + r * width);
        }
    };
    gather(g, boundary_size(), s.g);
    gather(f, grid_size(), s.f);
    gather(u, grid_size(), s.u);
    return s;
}

OperatorBatch make_batch(const Dataset& ds) {
    const Domain d = domain_of(ds);
    OperatorBatch b;
    b.n = ds.n;
    b.dim = static_cast<std::size_t>(d.dim());
    b.k = ds.meta.equation.k;
    b.g = ds.g;
    if (ds.has_f) b.f = ds.f;
    if (ds.has_u) b.u = ds.u;
    b.x = coords(d.grid_nodes(), b.dim);
    b.xb = coords(d.boundary_points(), b.dim);
    return b;
}

double loss_mad(const FieldOperator& model, const OperatorBatch& batch) {
    check_batch(model, batch);
    if (batch.u.empty()) throw std::invalid_argument("loss_mad: batch has no solution values");
    auto e = model.predict(batch.g, batch.f, batch.n, batch.x, batch.grid_size());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] -= batch.u[i];
    return mean_square(e);
}

double loss_pinn(const FieldOperator& model, const OperatorBatch& batch, const PinnWeights& w) {
    check_batch(model, batch);
    if (w.residual < 0.0 || w.boundary < 0.0) throw std::invalid_argument("loss_pinn: weights must be >= 0");
    const std::size_t m = batch.grid_size();
    auto r = model.predict_laplacian(batch.g, batch.f, batch.n, batch.x, m);
    const auto u = model.predict(batch.g, batch.f, batch.n, batch.x, m);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += batch.k * u[i] - (batch.f.empty() ? 0.0 : batch.f[i]);
    auto e = model.predict(batch.g, batch.f, batch.n, batch.xb, batch.boundary_size());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] -= batch.g[i];
    return w.residual * mean_square(r) + w.boundary * mean_square(e);
}

double loss_mad_grad(const OperatorModel& model, const OperatorBatch& batch, std::span<double> grad) {
    check_batch(model, batch);
    if (batch.u.empty()) throw std::invalid_argument("loss_mad: batch has no solution values");
    if (grad.size() != model.num_params()) throw std::invalid_argument("loss_mad_grad: gradient size mismatch");
    std::fill(grad.begin(), grad.end(), 0.0);
    const std::size_t n = batch.n;
    const std::size_t m = batch.grid_size();
    const auto& nets = model.nets();

    BranchPass bp = run_branches(model, batch);
    std::vector<MlpTape> trunk(nets.size());
    std::vector<double> e(batch.u.size());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = -batch.u[i];
    for (std::size_t q = 0; q < nets.size(); ++q) {
        nets[q].trunk().forward(batch.x, m, JetOrder::Values, trunk[q]);
        simd::matmul(Trans::No, Trans::Yes, n, m, nets[q].latent(), 1.0, bp.b[q].data(),
                     trunk[q].output_values().data(), 1.0, e.data());
    }
    const double loss = mean_square(e);

    const double scale = 2.0 / static_cast<double>(n * m);
    for (double& v : e) v *= scale;  // dL/dU
    for (std::size_t q = 0; q < nets.size(); ++q) {
        const std::size_t p = nets[q].latent();
        std::vector<double> db(n * p), dt(m * p);
        simd::matmul(Trans::No, Trans::No, n, p, m, 1.0, e.data(), trunk[q].output_values().data(), 0.0, db.data());
        simd::matmul(Trans::Yes, Trans::No, m, p, n, 1.0, e.data(), bp.b[q].data(), 0.0, dt.data());
        const std::size_t off = block_offset(model, q);
        const std::size_t nb = nets[q].branch().params().size();
        nets[q].branch().backward(bp.tapes[q], db, grad.subspan(off, nb));
        nets[q].trunk().backward(trunk[q], dt, grad.subspan(off + nb, nets[q].trunk().params().size()));
    }
    return loss;
}

double loss_pinn_grad(const OperatorModel& model, const OperatorBatch& batch, const PinnWeights& w,
                      std::span<double> grad) {
    check_batch(model, batch);
    if (w.residual < 0.0 || w.boundary < 0.0) throw std::invalid_argument("loss_pinn: weights must be >= 0");
    if (grad.size() != model.num_params()) throw std::invalid_argument("loss_pinn_grad: gradient size mismatch");
    std::fill(grad.begin(), grad.end(), 0.0);
    const std::size_t n = batch.n;
    const std::size_t m1 = batch.grid_size();
    const std::size_t m2 = batch.boundary_size();
    const std::size_t dim = batch.dim;
    const auto& nets = model.nets();

    BranchPass bp = run_branches(model, batch);
    std::vector<MlpTape> tl(nets.size()), tb(nets.size());
    std::vector<std::vector<double>> s(nets.size());  // lap T + k T at interior points
    std::vector<double> r(n * m1), e(n * m2);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = batch.f.empty() ? 0.0 : -batch.f[i];
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = -batch.g[i];
    for (std::size_t q = 0; q < nets.size(); ++q) {
        const std::size_t p = nets[q].latent();
        nets[q].trunk().forward(batch.x, m1, JetOrder::Laplacian, tl[q]);
        nets[q].trunk().forward(batch.xb, m2, JetOrder::Values, tb[q]);
        s[q] = tl[q].output_laplacian();
        const auto t = tl[q].output_values();
        for (std::size_t i = 0; i < s[q].size(); ++i) s[q][i] += batch.k * t[i];
        simd::matmul(Trans::No, Trans::Yes, n, m1, p, 1.0, bp.b[q].data(), s[q].data(), 1.0, r.data());
        simd::matmul(Trans::No, Trans::Yes, n, m2, p, 1.0, bp.b[q].data(), tb[q].output_values().data(), 1.0,
                     e.data());
    }
    const double loss = w.residual * mean_square(r) + w.boundary * mean_square(e);

    const double sr = 2.0 * w.residual / static_cast<double>(n * m1);
    const double se = 2.0 * w.boundary / static_cast<double>(n * m2);
    for (double& v : r) v *= sr;
    for (double& v : e) v *= se;
    for (std::size_t q = 0; q < nets.size(); ++q) {
        const std::size_t p = nets[q].latent();
        std::vector<double> db(n * p), ds(m1 * p), dtb(m2 * p);
        simd::matmul(Trans::No, Trans::No, n, p, m1, 1.0, r.data(), s[q].data(), 0.0, db.data());
        simd::matmul(Trans::No, Trans::No, n, p, m2, 1.0, e.data(), tb[q].output_values().data(), 1.0, db.data());
        simd::matmul(Trans::Yes, Trans::No, m1, p, n, 1.0, r.data(), bp.b[q].data(), 0.0, ds.data());
        simd::matmul(Trans::Yes, Trans::No, m2, p, n, 1.0, e.data(), bp.b[q].data(), 0.0, dtb.data());

        // Stacked adjoint of the jet channels: value, first derivatives, pure second derivatives.
        const std::size_t block = m1 * p;
        std::vector<double> adj((1 + 2 * dim) * block, 0.0);
        for (std::size_t i = 0; i < block; ++i) adj[i] = batch.k * ds[i];
        for (std::size_t d = 0; d < dim; ++d) {
            std::copy(ds.begin(), ds.end(), adj.begin() + (1 + dim + d) * block);
        }
        const std::size_t off = block_offset(model, q);
        const std::size_t nb = nets[q].branch().params().size();
        const auto tgrad = grad.subspan(off + nb, nets[q].trunk().params().size());
        nets[q].branch().backward(bp.tapes[q], db, grad.subspan(off, nb));
        nets[q].trunk().backward(tl[q], adj, tgrad);
        nets[q].trunk().backward(tb[q], dtb, tgrad);
    }
    return loss;
}

}  // namespace mad::nn
