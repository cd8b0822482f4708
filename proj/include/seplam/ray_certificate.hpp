#pragma once

#include <atomic>
#include <cstdint>
#include <string_view>
#include <vector>

#include "seplam/linalg.hpp"

namespace seplam {

/// Where the angular certificate is anchored and how directions are read.
///
/// With `use_lines` the parameter t of a crossing is signed and the point is
/// z0 + t e^{i theta} for any real t, so theta only needs to cover [0, pi].
/// Otherwise crossings lie on the ray t > 0 and theta covers (-pi, pi].
struct SearchFrame {
    Complex z0{0.0, 0.0};
    bool use_lines = true;
    double imag_axis_tol = 1e-8;

    Complex point(double theta, double t) const { return z0 + t * std::polar(1.0, theta); }
    double domain_lo() const;
    double domain_hi() const;
};

/// Sorted crossing parameters of one direction with the eps-level set of
/// sigma_min(M - zI), plus the inside/outside pattern of the gaps between.
///
/// `inside[j]` describes the open interval (params[j-1], params[j]), where
/// params[-1] is 0 for rays and -inf for lines and params[size] is +inf.
/// Only parameters adjacent to at least one outside interval are kept, so
/// every reported point lies on the boundary of the pseudospectrum.
struct RayCrossings {
    std::vector<double> params;
    std::vector<bool> inside;
    double lower = 0.0;  // 0 for rays, -inf for lines
};

enum class Branch { sum, overlap, gap };

std::string_view branch_name(Branch b);

struct CertificateSample {
    double theta = 0.0;
    double value = 0.0;
    Branch branch = Branch::sum;
    /// Endpoints of the positive-length overlap intervals (OVERLAP only).
    std::vector<Complex> overlap_boundary;
};

/// Diagnostic counters shared by certificate evaluations. Thread-safe.
struct CertificateStats {
    std::atomic<std::uint64_t> evaluations{0};
    std::atomic<std::uint64_t> clamped_gaps{0};
    std::atomic<std::uint64_t> missed_crossings{0};
};

/// i * [ e^{-i theta}(M - z0 I), -eps e^{-i theta} I ; -eps e^{i theta} I, e^{i theta}(M - z0 I)^H ].
/// Its eigenvalues are those of the skew-Hamiltonian/Hamiltonian pencil whose
/// imaginary eigenvalues i t mark where eps is a singular value of
/// M - (z0 + t e^{i theta}) I.
CMatrix build_rotated_matrix(const CMatrix& m, double eps, const SearchFrame& frame, double theta);

/// Eigenvalues of the rotated matrix with real parts inside the relative
/// imaginary-axis tolerance set to exactly zero.
std::vector<Complex> snapped_pencil_eigenvalues(const CMatrix& m, double eps, const SearchFrame& frame,
                                                double theta);

RayCrossings imaginary_crossings(const CMatrix& m, double eps, const SearchFrame& frame, double theta,
                                 CertificateStats* stats = nullptr);

/// Crossings from already snapped eigenvalues (saves a second eigensolve).
RayCrossings crossings_from_eigenvalues(const CMatrix& m, double eps, const SearchFrame& frame, double theta,
                                        const std::vector<Complex>& snapped, CertificateStats* stats = nullptr);

/// Squared smallest angle between a left-half-plane pencil eigenvalue and the
/// positive imaginary axis (or either half of the axis for lines). Zero iff the
/// ray/line meets the eps-pseudospectrum. Range [0, pi^2].
double arg_min_sq(const CMatrix& m, double eps, const SearchFrame& frame, double theta);
double arg_min_sq_from_eigenvalues(const std::vector<Complex>& snapped, const SearchFrame& frame);

struct OverlapMeasure {
    double l = 0.0;  // minus the length of the common part of the two sets along the direction
    std::vector<Complex> boundary;
};

OverlapMeasure overlap_measure(const CMatrix& a, const CMatrix& b, double eps_a, double eps_b,
                               const SearchFrame& frame, double theta);
OverlapMeasure overlap_from_crossings(const RayCrossings& ca, const RayCrossings& cb, const SearchFrame& frame,
                                      double theta);

/// min(d^A, d^B): how far each matrix's sigma_min sits above its level at the
/// other matrix's boundary crossings. Negative rounding noise is clamped to 0.
/// Throws std::logic_error if either crossing set is empty.
double boundary_gap(const CMatrix& a, const CMatrix& b, double eps_a, double eps_b, const SearchFrame& frame,
                    double theta, CertificateStats* stats = nullptr);
double boundary_gap_from_crossings(const CMatrix& a, const CMatrix& b, double eps_a, double eps_b,
                                   const RayCrossings& ca, const RayCrossings& cb, const SearchFrame& frame,
                                   double theta, CertificateStats* stats = nullptr);

/// The three-branch certificate: a + b when positive, else l when negative,
/// else the boundary gap.
CertificateSample certificate_value(const CMatrix& a, const CMatrix& b, double eps, const SearchFrame& frame,
                                    double theta, CertificateStats* stats = nullptr);

/// Same with separate levels for A and B.
CertificateSample certificate_value_varah(const CMatrix& a, const CMatrix& b, double eps1, double eps2,
                                          const SearchFrame& frame, double theta,
                                          CertificateStats* stats = nullptr);

}  // namespace seplam
