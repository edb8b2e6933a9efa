#pragma once

// Data-parallel inner loops shared by the FD solver, the fundamental-solution
// sampler and the neural stack. Every kernel has a scalar reference version;
// wider variants are selected once at startup from CPU features and can be
// overridden with MAD_SIMD=scalar|avx2 or set_backend().

#include <cstddef>
#include <span>
#include <string_view>

namespace mad::simd {

enum class Backend { Scalar, Avx2 };

std::string_view backend_name(Backend b);

/// Row-major matrix view used by gemm. `ld` is the row stride in elements.
struct MatView {
    const double* data;
    std::size_t rows;
    std::size_t cols;
    std::size_t ld;
};

struct MutMatView {
    double* data;
    std::size_t rows;
    std::size_t cols;
    std::size_t ld;
};

/// Five-point stencil on an (nx x ny) node grid stored x-major
/// (index = i * ny + j). Only nodes with mask[idx] != 0 are written; all other
/// entries of `out` are set to zero. Neighbours outside the array are never
/// touched because the outermost ring must carry mask 0.
struct StencilGrid {
    std::size_t nx;
    std::size_t ny;
    double inv_h2;
    double shift;  // coefficient k of the zeroth-order term
};

struct KernelTable {
    Backend backend;
    double (*dot)(const double* x, const double* y, std::size_t n);
    void (*axpy)(double a, const double* x, double* y, std::size_t n);
    // y = a * x + b * y
    void (*axpby)(double a, const double* x, double b, double* y, std::size_t n);
    // C = alpha * A * B + beta * C
    void (*gemm)(double alpha, MatView a, MatView b, double beta, MutMatView c);
    void (*stencil5)(const StencilGrid& g, const double* mask, const double* x, double* out);
};

/// Kernels for the active backend.
const KernelTable& kernels();

/// Kernels for an explicit backend; throws if the backend is not available on
/// this CPU or in this build.
const KernelTable& kernels_for(Backend b);

bool backend_available(Backend b);
Backend active_backend();
void set_backend(Backend b);

// Convenience wrappers over the active table.

double dot(std::span<const double> x, std::span<const double> y);
void axpy(double a, std::span<const double> x, std::span<double> y);
void axpby(double a, std::span<const double> x, double b, std::span<double> y);
void gemm(double alpha, MatView a, MatView b, double beta, MutMatView c);

enum class Trans { No, Yes };

/// C = alpha * op(A) * op(B) + beta * C for contiguous row-major operands.
/// Transposed operands are packed into scratch storage before calling gemm.
void matmul(Trans ta, Trans tb, std::size_t m, std::size_t n, std::size_t k, double alpha,
            const double* a, const double* b, double beta, double* c);

/// Out-of-place transpose of a rows x cols row-major matrix.
void transpose(const double* src, std::size_t rows, std::size_t cols, double* dst);

namespace detail {
// Per-backend entry points, exposed for the equivalence tests.
const KernelTable& scalar_table();
#if defined(MAD_HAVE_AVX2)
const KernelTable& avx2_table();
#endif
}  // namespace detail

}  // namespace mad::simd
