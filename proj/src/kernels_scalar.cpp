#include "seplam/kernels.hpp"

namespace seplam::kernels::detail {

namespace {

void matvec_scalar(const double* m, std::size_t rows, std::size_t cols, const double* x, double* y) {
    for (std::size_t i = 0; i < rows; ++i) {
        const double* row = m + i * cols;
        double acc = 0.0;
        for (std::size_t j = 0; j < cols; ++j) acc += row[j] * x[j];
        y[i] = acc;
    }
}

void clenshaw_scalar(const double* c, std::size_t n, const double* x, std::size_t n_points, double* out) {
    for (std::size_t i = 0; i < n_points; ++i) {
        if (n == 0) {
            out[i] = 0.0;
            continue;
        }
        const double t = x[i];
        double b1 = 0.0;
        double b2 = 0.0;
        for (std::size_t k = n - 1; k >= 1; --k) {
            const double b0 = c[k] + 2.0 * t * b1 - b2;
            b2 = b1;
            b1 = b0;
        }
        out[i] = c[0] + t * b1 - b2;
    }
}

}  // namespace

const KernelTable scalar_table{Isa::scalar, &matvec_scalar, &clenshaw_scalar};

}  // namespace seplam::kernels::detail
