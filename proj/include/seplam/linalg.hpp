#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace seplam {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Smallest singular value with a consistent pair of unit singular vectors:
/// M * right = sigma * left and M^H * left = sigma * right.
struct SingularTriplet {
    double sigma = 0.0;
    CVector left;
    CVector right;
};

/// Throws std::invalid_argument unless `m` is square, nonempty and finite.
void require_square_finite(const CMatrix& m, const char* name);

/// M - z I.
CMatrix shifted(const CMatrix& m, Complex z);

/// Full SVD route. Throws computation_error on non-convergence.
SingularTriplet smallest_singular_triplet(const CMatrix& m);

/// All singular values, descending. Values-only LAPACK path.
Eigen::VectorXd singular_values(const CMatrix& m);

/// Values-only smallest singular value; agrees with the triplet route to
/// rounding but not bitwise.
double smallest_singular_value(const CMatrix& m);

/// sigma_min(M - z I), computed through smallest_singular_triplet.
double sigma_min_shifted(const CMatrix& m, Complex z);

/// sigma_min(M - z I) via the values-only path. Used in the hot loops.
double sigma_min_at(const CMatrix& m, Complex z);

/// All eigenvalues, unsorted, multiplicity included.
std::vector<Complex> eigenvalues(const CMatrix& m);

}  // namespace seplam
