// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.

#include <immintrin.h>

#include <algorithm>

#include "mad/simd.hpp"

namespace mad::simd::detail {
namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += x[i] * y[i];
    return s;
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void axpby_avx2(double a, const double* x, double b, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    const __m256d vb = _mm256_set1_pd(b);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d by = _mm256_mul_pd(vb, _mm256_loadu_pd(y + i));
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), by));
    }
    for (; i < n; ++i) y[i] = a * x[i] + b * y[i];
}

// 4 x 8 register tile: C[i0:i0+4, j0:j0+8] += alpha * A[i0:i0+4, k0:k1] * B[k0:k1, j0:j0+8]
inline void tile_4x8(double alpha, const MatView& a, const MatView& b, MutMatView& c, std::size_t i0,
                     std::size_t j0, std::size_t k0, std::size_t k1) {
    __m256d c00 = _mm256_setzero_pd(), c01 = _mm256_setzero_pd();
    __m256d c10 = _mm256_setzero_pd(), c11 = _mm256_setzero_pd();
    __m256d c20 = _mm256_setzero_pd(), c21 = _mm256_setzero_pd();
    __m256d c30 = _mm256_setzero_pd(), c31 = _mm256_setzero_pd();
    const double* a0 = a.data + i0 * a.ld;
    const double* a1 = a0 + a.ld;
    const double* a2 = a1 + a.ld;
    const double* a3 = a2 + a.ld;
    for (std::size_t p = k0; p < k1; ++p) {
        const double* brow = b.data + p * b.ld + j0;
        const __m256d b0 = _mm256_loadu_pd(brow);
        const __m256d b1 = _mm256_loadu_pd(brow + 4);
        __m256d av = _mm256_broadcast_sd(a0 + p);
        c00 = _mm256_fmadd_pd(av, b0, c00);
        c01 = _mm256_fmadd_pd(av, b1, c01);
        av = _mm256_broadcast_sd(a1 + p);
        c10 = _mm256_fmadd_pd(av, b0, c10);
        c11 = _mm256_fmadd_pd(av, b1, c11);
        av = _mm256_broadcast_sd(a2 + p);
        c20 = _mm256_fmadd_pd(av, b0, c20);
        c21 = _mm256_fmadd_pd(av, b1, c21);
        av = _mm256_broadcast_sd(a3 + p);
        c30 = _mm256_fmadd_pd(av, b0, c30);
        c31 = _mm256_fmadd_pd(av, b1, c31);
    }
    const __m256d va = _mm256_set1_pd(alpha);
    auto store = [&](std::size_t row, __m256d lo, __m256d hi) {
        double* dst = c.data + (i0 + row) * c.ld + j0;
        _mm256_storeu_pd(dst, _mm256_fmadd_pd(va, lo, _mm256_loadu_pd(dst)));
        _mm256_storeu_pd(dst + 4, _mm256_fmadd_pd(va, hi, _mm256_loadu_pd(dst + 4)));
    };
    store(0, c00, c01);
    store(1, c10, c11);
    store(2, c20, c21);
    store(3, c30, c31);
}

// Single row, 8-wide columns.
inline void tile_1x8(double alpha, const MatView& a, const MatView& b, MutMatView& c, std::size_t i,
                     std::size_t j0, std::size_t k0, std::size_t k1) {
    __m256d lo = _mm256_setzero_pd(), hi = _mm256_setzero_pd();
    const double* arow = a.data + i * a.ld;
    for (std::size_t p = k0; p < k1; ++p) {
        const double* brow = b.data + p * b.ld + j0;
        const __m256d av = _mm256_broadcast_sd(arow + p);
        lo = _mm256_fmadd_pd(av, _mm256_loadu_pd(brow), lo);
        hi = _mm256_fmadd_pd(av, _mm256_loadu_pd(brow + 4), hi);
    }
    const __m256d va = _mm256_set1_pd(alpha);
    double* dst = c.data + i * c.ld + j0;
    _mm256_storeu_pd(dst, _mm256_fmadd_pd(va, lo, _mm256_loadu_pd(dst)));
    _mm256_storeu_pd(dst + 4, _mm256_fmadd_pd(va, hi, _mm256_loadu_pd(dst + 4)));
}

void gemm_avx2(double alpha, MatView a, MatView b, double beta, MutMatView c) {
    for (std::size_t i = 0; i < c.rows; ++i) {
        double* crow = c.data + i * c.ld;
        if (beta == 0.0) {
            std::fill(crow, crow + c.cols, 0.0);
        } else if (beta != 1.0) {
            for (std::size_t j = 0; j < c.cols; ++j) crow[j] *= beta;
        }
    }
    const std::size_t m = c.rows;
    const std::size_t n = c.cols;
    const std::size_t kk = a.cols;
    const std::size_t n8 = n - n % 8;
    constexpr std::size_t kBlock = 256;
    constexpr std::size_t jBlock = 256;
    for (std::size_t k0 = 0; k0 < kk; k0 += kBlock) {
        const std::size_t k1 = std::min(kk, k0 + kBlock);
        for (std::size_t jb = 0; jb < n8; jb += jBlock) {
            const std::size_t je = std::min(n8, jb + jBlock);
            std::size_t i = 0;
            for (; i + 4 <= m; i += 4) {
                for (std::size_t j = jb; j < je; j += 8) tile_4x8(alpha, a, b, c, i, j, k0, k1);
            }
            for (; i < m; ++i) {
                for (std::size_t j = jb; j < je; j += 8) tile_1x8(alpha, a, b, c, i, j, k0, k1);
            }
        }
        if (n8 < n) {
            for (std::size_t i = 0; i < m; ++i) {
                const double* arow = a.data + i * a.ld;
                double* crow = c.data + i * c.ld;
                for (std::size_t p = k0; p < k1; ++p) {
                    const double s = alpha * arow[p];
                    const double* brow = b.data + p * b.ld;
                    for (std::size_t j = n8; j < n; ++j) crow[j] += s * brow[j];
                }
            }
        }
    }
}

void stencil5_avx2(const StencilGrid& g, const double* mask, const double* x, double* out) {
    const std::size_t nx = g.nx;
    const std::size_t ny = g.ny;
    const __m256d inv_h2 = _mm256_set1_pd(g.inv_h2);
    const __m256d shift = _mm256_set1_pd(g.shift);
    const __m256d four = _mm256_set1_pd(4.0);
    std::fill(out, out + ny, 0.0);
    if (nx > 1) std::fill(out + (nx - 1) * ny, out + nx * ny, 0.0);
    for (std::size_t i = 1; i + 1 < nx; ++i) {
        const std::size_t row = i * ny;
        out[row] = 0.0;
        out[row + ny - 1] = 0.0;
        std::size_t j = 1;
        for (; j + 4 <= ny - 1; j += 4) {
            const std::size_t idx = row + j;
            const __m256d c = _mm256_loadu_pd(x + idx);
            __m256d nb = _mm256_add_pd(_mm256_loadu_pd(x + idx - ny), _mm256_loadu_pd(x + idx + ny));
            nb = _mm256_add_pd(nb, _mm256_add_pd(_mm256_loadu_pd(x + idx - 1), _mm256_loadu_pd(x + idx + 1)));
            const __m256d lap = _mm256_mul_pd(_mm256_fnmadd_pd(four, c, nb), inv_h2);
            const __m256d v = _mm256_fmadd_pd(shift, c, lap);
            _mm256_storeu_pd(out + idx, _mm256_mul_pd(_mm256_loadu_pd(mask + idx), v));
        }
        for (; j + 1 < ny; ++j) {
            const std::size_t idx = row + j;
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

const KernelTable& avx2_table() {
    static const KernelTable table{Backend::Avx2, dot_avx2,  axpy_avx2,
                                   axpby_avx2,    gemm_avx2, stencil5_avx2};
    return table;
}

}  // namespace mad::simd::detail
