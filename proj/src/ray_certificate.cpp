#include "seplam/ray_certificate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace seplam {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMergeTol = 1e-10;

}  // namespace

double SearchFrame::domain_lo() const { return use_lines ? 0.0 : -std::numbers::pi; }
double SearchFrame::domain_hi() const { return std::numbers::pi; }

std::string_view branch_name(Branch b) {
    switch (b) {
        case Branch::sum:
            return "SUM";
        case Branch::overlap:
            return "OVERLAP";
        case Branch::gap:
            return "GAP";
    }
    return "?";
}

CMatrix build_rotated_matrix(const CMatrix& m, double eps, const SearchFrame& frame, double theta) {
    const Eigen::Index k = m.rows();
    const Complex i{0.0, 1.0};
    const Complex e_minus = std::polar(1.0, -theta);
    const Complex e_plus = std::conj(e_minus);
    const CMatrix s = shifted(m, frame.z0);

    CMatrix c = CMatrix::Zero(2 * k, 2 * k);
    c.topLeftCorner(k, k) = (i * e_minus) * s;
    c.bottomRightCorner(k, k) = (i * e_plus) * s.adjoint();
    c.topRightCorner(k, k).diagonal().setConstant(-i * eps * e_minus);
    c.bottomLeftCorner(k, k).diagonal().setConstant(-i * eps * e_plus);
    return c;
}

std::vector<Complex> snapped_pencil_eigenvalues(const CMatrix& m, double eps, const SearchFrame& frame,
                                                double theta) {
    std::vector<Complex> ev = eigenvalues(build_rotated_matrix(m, eps, frame, theta));
    for (Complex& lam : ev) {
        if (std::abs(lam.real()) <= frame.imag_axis_tol * std::max(1.0, std::abs(lam)))
            lam = Complex(0.0, lam.imag());
    }
    return ev;
}

RayCrossings crossings_from_eigenvalues(const CMatrix& m, double eps, const SearchFrame& frame, double theta,
                                        const std::vector<Complex>& snapped, CertificateStats* stats) {
    std::vector<double> raw;
    for (const Complex& lam : snapped) {
        if (lam.real() != 0.0) continue;
        const double t = lam.imag();
        if (frame.use_lines ? t != 0.0 : t > 0.0) raw.push_back(t);
    }
    std::sort(raw.begin(), raw.end());
    std::vector<double> params;
    for (double t : raw) {
        if (!params.empty() && std::abs(t - params.back()) <= kMergeTol * (1.0 + std::abs(t))) continue;
        params.push_back(t);
    }

    const double lower = frame.use_lines ? -kInf : 0.0;
    const std::size_t n = params.size();
    std::vector<bool> inside(n + 1, false);
    for (std::size_t j = 0; j <= n; ++j) {
        const double lo = j == 0 ? lower : params[j - 1];
        const double hi = j == n ? kInf : params[j];
        const bool unbounded = std::isinf(lo) || std::isinf(hi);
        double probe;
        if (std::isinf(hi))
            probe = (n == 0 ? (std::isinf(lo) ? 0.0 : lo) : params[n - 1]) + 1.0;
        else if (std::isinf(lo))
            probe = hi - 1.0;
        else
            probe = 0.5 * (lo + hi);
        const bool in = sigma_min_at(m, frame.point(theta, probe)) <= eps;
        if (unbounded && in) {
            // Pseudospectra are bounded; a hit here means a crossing was lost
            // to the imaginary-axis tolerance.
            if (stats) ++stats->missed_crossings;
            inside[j] = false;
        } else {
            inside[j] = in;
        }
    }

    // Crossings with inside on both sides are interior level-set points, not
    // boundary points; drop them and merge the neighbouring intervals.
    RayCrossings out;
    out.lower = lower;
    out.inside.push_back(inside[0]);
    for (std::size_t j = 0; j < n; ++j) {
        if (inside[j] && inside[j + 1]) continue;
        out.params.push_back(params[j]);
        out.inside.push_back(inside[j + 1]);
    }
    return out;
}

RayCrossings imaginary_crossings(const CMatrix& m, double eps, const SearchFrame& frame, double theta,
                                 CertificateStats* stats) {
    return crossings_from_eigenvalues(m, eps, frame, theta, snapped_pencil_eigenvalues(m, eps, frame, theta),
                                      stats);
}

double arg_min_sq_from_eigenvalues(const std::vector<Complex>& snapped, const SearchFrame& frame) {
    double best = std::numbers::pi * std::numbers::pi;
    for (const Complex& lam : snapped) {
        if (lam.real() > 0.0) continue;
        // Arg(-i lam) for Re lam <= 0 lies in [0, pi]; lines also measure
        // against the negative half of the axis.
        const double x = std::abs(lam.real());
        const double y = frame.use_lines ? std::abs(lam.imag()) : lam.imag();
        const double ang = std::atan2(x, y);
        best = std::min(best, ang * ang);
    }
    return best;
}

double arg_min_sq(const CMatrix& m, double eps, const SearchFrame& frame, double theta) {
    return arg_min_sq_from_eigenvalues(snapped_pencil_eigenvalues(m, eps, frame, theta), frame);
}

namespace {

struct Interval {
    double lo;
    double hi;
};

std::vector<Interval> inside_intervals(const RayCrossings& c) {
    std::vector<Interval> out;
    const std::size_t n = c.params.size();
    for (std::size_t j = 0; j <= n; ++j) {
        if (!c.inside[j]) continue;
        const double lo = j == 0 ? c.lower : c.params[j - 1];
        const double hi = j == n ? kInf : c.params[j];
        out.push_back({lo, hi});
    }
    return out;
}

}  // namespace

OverlapMeasure overlap_from_crossings(const RayCrossings& ca, const RayCrossings& cb, const SearchFrame& frame,
                                      double theta) {
    const std::vector<Interval> ia = inside_intervals(ca);
    const std::vector<Interval> ib = inside_intervals(cb);
    OverlapMeasure out;
    std::size_t p = 0;
    std::size_t q = 0;
    while (p < ia.size() && q < ib.size()) {
        const double lo = std::max(ia[p].lo, ib[q].lo);
        const double hi = std::min(ia[p].hi, ib[q].hi);
        if (hi > lo && std::isfinite(hi)) {
            out.l -= hi - lo;
            // z0 itself is never reported as a restart point.
            if (!(frame.use_lines == false && lo == 0.0)) out.boundary.push_back(frame.point(theta, lo));
            out.boundary.push_back(frame.point(theta, hi));
        }
        if (ia[p].hi < ib[q].hi)
            ++p;
        else
            ++q;
    }
    return out;
}

OverlapMeasure overlap_measure(const CMatrix& a, const CMatrix& b, double eps_a, double eps_b,
                               const SearchFrame& frame, double theta) {
    return overlap_from_crossings(imaginary_crossings(a, eps_a, frame, theta),
                                  imaginary_crossings(b, eps_b, frame, theta), frame, theta);
}

double boundary_gap_from_crossings(const CMatrix& a, const CMatrix& b, double eps_a, double eps_b,
                                   const RayCrossings& ca, const RayCrossings& cb, const SearchFrame& frame,
                                   double theta, CertificateStats* stats) {
    if (ca.params.empty() || cb.params.empty())
        throw std::logic_error("boundary_gap requires crossings of both pseudospectra");
    double d_a = kInf;
    for (double t : cb.params) d_a = std::min(d_a, sigma_min_at(a, frame.point(theta, t)) - eps_a);
    double d_b = kInf;
    for (double t : ca.params) d_b = std::min(d_b, sigma_min_at(b, frame.point(theta, t)) - eps_b);
    double d = std::min(d_a, d_b);
    if (d < 0.0) {
        if (stats) ++stats->clamped_gaps;
        d = 0.0;
    }
    return d;
}

double boundary_gap(const CMatrix& a, const CMatrix& b, double eps_a, double eps_b, const SearchFrame& frame,
                    double theta, CertificateStats* stats) {
    return boundary_gap_from_crossings(a, b, eps_a, eps_b, imaginary_crossings(a, eps_a, frame, theta, stats),
                                       imaginary_crossings(b, eps_b, frame, theta, stats), frame, theta, stats);
}

CertificateSample certificate_value_varah(const CMatrix& a, const CMatrix& b, double eps1, double eps2,
                                          const SearchFrame& frame, double theta, CertificateStats* stats) {
    if (stats) ++stats->evaluations;
    CertificateSample s;
    s.theta = theta;

    const std::vector<Complex> ev_a = snapped_pencil_eigenvalues(a, eps1, frame, theta);
    const double arg_a = arg_min_sq_from_eigenvalues(ev_a, frame);
    const std::vector<Complex> ev_b = snapped_pencil_eigenvalues(b, eps2, frame, theta);
    const double arg_b = arg_min_sq_from_eigenvalues(ev_b, frame);
    if (arg_a + arg_b > 0.0) {
        s.branch = Branch::sum;
        s.value = arg_a + arg_b;
        return s;
    }

    const RayCrossings ca = crossings_from_eigenvalues(a, eps1, frame, theta, ev_a, stats);
    const RayCrossings cb = crossings_from_eigenvalues(b, eps2, frame, theta, ev_b, stats);
    OverlapMeasure ov = overlap_from_crossings(ca, cb, frame, theta);
    if (ov.l < 0.0) {
        s.branch = Branch::overlap;
        s.value = ov.l;
        s.overlap_boundary = std::move(ov.boundary);
        return s;
    }
    s.branch = Branch::gap;
    s.value = boundary_gap_from_crossings(a, b, eps1, eps2, ca, cb, frame, theta, stats);
    return s;
}

CertificateSample certificate_value(const CMatrix& a, const CMatrix& b, double eps, const SearchFrame& frame,
                                    double theta, CertificateStats* stats) {
    return certificate_value_varah(a, b, eps, eps, frame, theta, stats);
}

}  // namespace seplam
