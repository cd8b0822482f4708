#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "seplam/objective.hpp"
#include "seplam/ray_certificate.hpp"

namespace seplam {

struct SolveOptions {
    Variant variant = Variant::demmel;
    std::optional<Complex> z_init;
    std::optional<Complex> z0_override;
    double rel_term_tol = 1e-12;
    double fit_tol = 1e-8;
    int max_restarts = 30;
    bool use_lines = true;
    std::uint64_t seed = 0;
    unsigned threads = 0;  // 0: default_thread_count()
    std::size_t max_samples = 100000;
    double opt_tol = 1e-14;
};

/// For VARAH, CERTIFIED_GLOBAL means the necessary optimality condition was
/// certified (the interiors of the two pseudospectra do not overlap), which
/// makes epsilon an upper bound rather than a proven global minimum.
enum class SepStatus { certified_global, tol_stalled, budget_exceeded };

std::string_view status_name(SepStatus s);

struct RoundTrace {
    double epsilon = 0.0;  // incumbent entering the certificate
    Complex minimizer{0.0, 0.0};
    Complex search_point{0.0, 0.0};
    std::size_t certificate_evals = 0;
    std::string outcome;  // aborted, converged, argmin_overlap, budget, skipped
    std::vector<Complex> restart_points;
};

struct SepResult {
    double epsilon = 0.0;
    Complex minimizer{0.0, 0.0};
    SepStatus status = SepStatus::tol_stalled;
    int restarts = 0;
    std::size_t certificate_evals = 0;
    std::size_t objective_evals = 0;
    std::optional<double> eps1;
    std::optional<double> eps2;
    std::optional<double> varah_eig_check;
    std::optional<Complex> varah_eig_location;

    Complex search_point{0.0, 0.0};  // z0 before per-round validation
    bool use_lines = true;
    /// Samples of the last certificate, including the argmin re-evaluations.
    std::vector<CertificateSample> final_certificate;
    std::vector<RoundTrace> trace;
    std::uint64_t clamped_gaps = 0;
    std::uint64_t missed_crossings = 0;
    std::vector<std::string> warnings;
};

/// Mean of the distinct eigenvalues of A and B; real when both spectra are
/// closed under conjugation.
Complex select_search_point(const CMatrix& a, const CMatrix& b);

/// Moves z0 by a seeded offset of size 1e-6 (1 + |z0|) until no level in
/// `eps` is a singular value of A - z0 I or B - z0 I. Throws config_error
/// after 20 attempts.
Complex validate_search_point(const CMatrix& a, const CMatrix& b, const std::vector<double>& eps, Complex z0,
                              std::uint64_t seed);

SepResult compute_sep_demmel(const CMatrix& a, const CMatrix& b, const SolveOptions& opts);

SepResult estimate_sep_varah(const CMatrix& a, const CMatrix& b, const SolveOptions& opts);

/// Dispatches on opts.variant.
SepResult solve(const CMatrix& a, const CMatrix& b, const SolveOptions& opts);

/// min( min over eigenvalues l of B of sigma_min(A - l I),
///      min over eigenvalues l of A of sigma_min(B - l I) ), with its l.
std::pair<double, Complex> varah_eigenvalue_check(const CMatrix& a, const CMatrix& b);

}  // namespace seplam
