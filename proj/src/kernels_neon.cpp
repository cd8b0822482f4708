#include "seplam/kernels.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

namespace seplam::kernels::detail {

namespace {

void matvec_neon(const double* m, std::size_t rows, std::size_t cols, const double* x, double* y) {
    for (std::size_t i = 0; i < rows; ++i) {
        const double* row = m + i * cols;
        float64x2_t acc0 = vdupq_n_f64(0.0);
        float64x2_t acc1 = vdupq_n_f64(0.0);
        std::size_t j = 0;
        for (; j + 4 <= cols; j += 4) {
            acc0 = vfmaq_f64(acc0, vld1q_f64(row + j), vld1q_f64(x + j));
            acc1 = vfmaq_f64(acc1, vld1q_f64(row + j + 2), vld1q_f64(x + j + 2));
        }
        double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
        for (; j < cols; ++j) acc += row[j] * x[j];
        y[i] = acc;
    }
}

void clenshaw_neon(const double* c, std::size_t n, const double* x, std::size_t n_points, double* out) {
    std::size_t i = 0;
    if (n == 0) {
        for (; i < n_points; ++i) out[i] = 0.0;
        return;
    }
    for (; i + 2 <= n_points; i += 2) {
        const float64x2_t t = vld1q_f64(x + i);
        const float64x2_t t2 = vaddq_f64(t, t);
        float64x2_t b1 = vdupq_n_f64(0.0);
        float64x2_t b2 = vdupq_n_f64(0.0);
        for (std::size_t k = n - 1; k >= 1; --k) {
            const float64x2_t b0 = vsubq_f64(vfmaq_f64(vdupq_n_f64(c[k]), t2, b1), b2);
            b2 = b1;
            b1 = b0;
        }
        vst1q_f64(out + i, vsubq_f64(vfmaq_f64(vdupq_n_f64(c[0]), t, b1), b2));
    }
    if (i < n_points) scalar_table.clenshaw(c, n, x + i, n_points - i, out + i);
}

}  // namespace

const KernelTable neon_table{Isa::neon, &matvec_neon, &clenshaw_neon};

}  // namespace seplam::kernels::detail

#endif
