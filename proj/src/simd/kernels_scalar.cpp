#include "mad/simd.hpp"

namespace mad::simd::detail {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
    return s;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void axpby_scalar(double a, const double* x, double b, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] = a * x[i] + b * y[i];
}

void gemm_scalar(double alpha, MatView a, MatView b, double beta, MutMatView c) {
    for (std::size_t i = 0; i < c.rows; ++i) {
        double* crow = c.data + i * c.ld;
        if (beta == 0.0) {
            for (std::size_t j = 0; j < c.cols; ++j) crow[j] = 0.0;
        } else if (beta != 1.0) {
            for (std::size_t j = 0; j < c.cols; ++j) crow[j] *= beta;
        }
        const double* arow = a.data + i * a.ld;
        for (std::size_t p = 0; p < a.cols; ++p) {
            const double s = alpha * arow[p];
            const double* brow = b.data + p * b.ld;
            for (std::size_t j = 0; j < c.cols; ++j) crow[j] += s * brow[j];
        }
    }
}

void stencil5_scalar(const StencilGrid& g, const double* mask, const double* x, double* out) {
    const std::size_t ny = g.ny;
    for (std::size_t i = 0; i < g.nx; ++i) {
        for (std::size_t j = 0; j < ny; ++j) {
            const std::size_t idx = i * ny + j;
            if (mask[idx] == 0.0) {
                out[idx] = 0.0;
                continue;
            }
            const double nb = x[idx - ny] + x[idx + ny] + x[idx - 1] + x[idx + 1];
            out[idx] = (nb - 4.0 * x[idx]) * g.inv_h2 + g.shift * x[idx];
        }
    }
}

}  // namespace

const KernelTable& scalar_table() {
    static const KernelTable table{Backend::Scalar, dot_scalar,  axpy_scalar,
                                   axpby_scalar,    gemm_scalar, stencil5_scalar};
    return table;
}

}  // namespace mad::simd::detail
