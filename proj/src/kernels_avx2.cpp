#include "seplam/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

namespace seplam::kernels::detail {

namespace {

__attribute__((target("avx2,fma"))) double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

__attribute__((target("avx2,fma"))) void matvec_avx2(const double* m, std::size_t rows, std::size_t cols,
                                                     const double* x, double* y) {
    for (std::size_t i = 0; i < rows; ++i) {
        const double* row = m + i * cols;
        __m256d acc0 = _mm256_setzero_pd();
        __m256d acc1 = _mm256_setzero_pd();
        std::size_t j = 0;
        for (; j + 8 <= cols; j += 8) {
            acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(row + j), _mm256_loadu_pd(x + j), acc0);
            acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(row + j + 4), _mm256_loadu_pd(x + j + 4), acc1);
        }
        for (; j + 4 <= cols; j += 4)
            acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(row + j), _mm256_loadu_pd(x + j), acc0);
        double acc = hsum(_mm256_add_pd(acc0, acc1));
        for (; j < cols; ++j) acc += row[j] * x[j];
        y[i] = acc;
    }
}

// Four evaluation points per register; the coefficient loop is shared.
__attribute__((target("avx2,fma"))) void clenshaw_avx2(const double* c, std::size_t n, const double* x,
                                                       std::size_t n_points, double* out) {
    std::size_t i = 0;
    if (n == 0) {
        for (; i < n_points; ++i) out[i] = 0.0;
        return;
    }
    const __m256d two = _mm256_set1_pd(2.0);
    for (; i + 4 <= n_points; i += 4) {
        const __m256d t = _mm256_loadu_pd(x + i);
        const __m256d t2 = _mm256_mul_pd(two, t);
        __m256d b1 = _mm256_setzero_pd();
        __m256d b2 = _mm256_setzero_pd();
        for (std::size_t k = n - 1; k >= 1; --k) {
            const __m256d b0 = _mm256_sub_pd(_mm256_fmadd_pd(t2, b1, _mm256_set1_pd(c[k])), b2);
            b2 = b1;
            b1 = b0;
        }
        _mm256_storeu_pd(out + i, _mm256_sub_pd(_mm256_fmadd_pd(t, b1, _mm256_set1_pd(c[0])), b2));
    }
    if (i < n_points) scalar_table.clenshaw(c, n, x + i, n_points - i, out + i);
}

}  // namespace

const KernelTable avx2_table{Isa::avx2, &matvec_avx2, &clenshaw_avx2};

}  // namespace seplam::kernels::detail

#endif
