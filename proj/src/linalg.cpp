#include "seplam/linalg.hpp"

#include <lapacke.h>

#include <cmath>
#include <stdexcept>
#include <string>

#include "seplam/error.hpp"

namespace seplam {

namespace {

lapack_complex_double* as_lapack(Complex* p) { return reinterpret_cast<lapack_complex_double*>(p); }

}  // namespace

void require_square_finite(const CMatrix& m, const char* name) {
    if (m.rows() == 0 || m.rows() != m.cols())
        throw std::invalid_argument(std::string(name) + " must be square and nonempty, got " +
                                    std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    if (!m.allFinite()) throw std::invalid_argument(std::string(name) + " has non-finite entries");
}

CMatrix shifted(const CMatrix& m, Complex z) {
    CMatrix out = m;
    out.diagonal().array() -= z;
    return out;
}

SingularTriplet smallest_singular_triplet(const CMatrix& m) {
    const lapack_int n = static_cast<lapack_int>(m.rows());
    CMatrix work = m;
    CMatrix u(n, n);
    CMatrix vh(n, n);
    Eigen::VectorXd s(n);
    Eigen::VectorXd superb(std::max<lapack_int>(1, n - 1));
    const lapack_int info =
        LAPACKE_zgesvd(LAPACK_COL_MAJOR, 'A', 'A', n, n, as_lapack(work.data()), n, s.data(),
                       as_lapack(u.data()), n, as_lapack(vh.data()), n, superb.data());
    if (info != 0) throw computation_error("zgesvd failed with info " + std::to_string(info), n);
    SingularTriplet t;
    t.sigma = s(n - 1);
    t.left = u.col(n - 1);
    t.right = vh.row(n - 1).adjoint();
    return t;
}

Eigen::VectorXd singular_values(const CMatrix& m) {
    const lapack_int n = static_cast<lapack_int>(m.rows());
    const lapack_int c = static_cast<lapack_int>(m.cols());
    CMatrix work = m;
    Eigen::VectorXd s(std::min(n, c));
    Eigen::VectorXd superb(std::max<lapack_int>(1, std::min(n, c) - 1));
    const lapack_int info = LAPACKE_zgesvd(LAPACK_COL_MAJOR, 'N', 'N', n, c, as_lapack(work.data()), n,
                                           s.data(), nullptr, 1, nullptr, 1, superb.data());
    if (info != 0) throw computation_error("zgesvd failed with info " + std::to_string(info), n);
    return s;
}

double smallest_singular_value(const CMatrix& m) {
    const Eigen::VectorXd s = singular_values(m);
    return s(s.size() - 1);
}

double sigma_min_shifted(const CMatrix& m, Complex z) { return smallest_singular_triplet(shifted(m, z)).sigma; }

double sigma_min_at(const CMatrix& m, Complex z) { return smallest_singular_value(shifted(m, z)); }

std::vector<Complex> eigenvalues(const CMatrix& m) {
    const lapack_int n = static_cast<lapack_int>(m.rows());
    CMatrix work = m;
    std::vector<Complex> w(static_cast<std::size_t>(n));
    lapack_complex_double dummy;
    const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, as_lapack(work.data()), n,
                                          as_lapack(w.data()), &dummy, 1, &dummy, 1);
    if (info != 0) throw computation_error("zgeev failed with info " + std::to_string(info), n);
    return w;
}

}  // namespace seplam
