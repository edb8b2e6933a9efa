#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include "mad/simd.hpp"

namespace mad::simd {
namespace {

bool cpu_has_avx2() {
#if defined(MAD_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Backend initial_backend() {
    if (const char* env = std::getenv("MAD_SIMD")) {
        const std::string v(env);
        if (v == "scalar") return Backend::Scalar;
        if (v == "avx2" && cpu_has_avx2()) return Backend::Avx2;
    }
    return cpu_has_avx2() ? Backend::Avx2 : Backend::Scalar;
}

std::atomic<const KernelTable*>& active_table() {
    static std::atomic<const KernelTable*> table{&kernels_for(initial_backend())};
    return table;
}

}  // namespace

std::string_view backend_name(Backend b) {
    switch (b) {
        case Backend::Scalar: return "scalar";
        case Backend::Avx2: return "avx2";
    }
    return "unknown";
}

bool backend_available(Backend b) {
    return b == Backend::Scalar || (b == Backend::Avx2 && cpu_has_avx2());
}

const KernelTable& kernels_for(Backend b) {
    if (b == Backend::Scalar) return detail::scalar_table();
#if defined(MAD_HAVE_AVX2)
    if (b == Backend::Avx2 && cpu_has_avx2()) return detail::avx2_table();
#endif
    throw std::runtime_error("simd backend not available: " + std::string(backend_name(b)));
}

const KernelTable& kernels() { return *active_table().load(std::memory_order_acquire); }

Backend active_backend() { return kernels().backend; }

void set_backend(Backend b) { active_table().store(&kernels_for(b), std::memory_order_release); }

double dot(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("dot: length mismatch");
    return kernels().dot(x.data(), y.data(), x.size());
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("axpy: length mismatch");
    kernels().axpy(a, x.data(), y.data(), x.size());
}

void axpby(double a, std::span<const double> x, double b, std::span<double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("axpby: length mismatch");
    kernels().axpby(a, x.data(), b, y.data(), x.size());
}

void gemm(double alpha, MatView a, MatView b, double beta, MutMatView c) {
    if (a.rows != c.rows || b.cols != c.cols || a.cols != b.rows) {
        throw std::invalid_argument("gemm: shape mismatch");
    }
    kernels().gemm(alpha, a, b, beta, c);
}

void transpose(const double* src, std::size_t rows, std::size_t cols, double* dst) {
    constexpr std::size_t kTile = 32;
    for (std::size_t i0 = 0; i0 < rows; i0 += kTile) {
        for (std::size_t j0 = 0; j0 < cols; j0 += kTile) {
            const std::size_t i1 = std::min(rows, i0 + kTile);
            const std::size_t j1 = std::min(cols, j0 + kTile);
            for (std::size_t i = i0; i < i1; ++i) {
                for (std::size_t j = j0; j < j1; ++j) dst[j * rows + i] = src[i * cols + j];
            }
        }
    }
}

void matmul(Trans ta, Trans tb, std::size_t m, std::size_t n, std::size_t k, double alpha,
            const double* a, const double* b, double beta, double* c) {
    thread_local std::vector<double> scratch_a;
    thread_local std::vector<double> scratch_b;
    const double* pa = a;
    const double* pb = b;
    if (ta == Trans::Yes) {
        // a is stored k x m
        scratch_a.resize(m * k);
        transpose(a, k, m, scratch_a.data());
        pa = scratch_a.data();
    }
    if (tb == Trans::Yes) {
        // b is stored n x k
        scratch_b.resize(k * n);
        transpose(b, n, k, scratch_b.data());
        pb = scratch_b.data();
    }
    kernels().gemm(alpha, MatView{pa, m, k, k}, MatView{pb, k, n, n}, beta, MutMatView{c, m, n, n});
}

}  // namespace mad::simd
