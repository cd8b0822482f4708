#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "seplam/ray_certificate.hpp"

namespace seplam {

/// One Chebyshev series on [lo, hi] (first-kind coefficients).
struct ChebPiece {
    double lo = 0.0;
    double hi = 0.0;
    std::vector<double> coeffs;
    double error_estimate = 0.0;
    bool over_tolerance = false;  // accepted at the depth cap without meeting tol
};

struct PiecewiseInterpolant {
    std::vector<ChebPiece> pieces;  // sorted, contiguous
    std::size_t sample_count = 0;

    double lo() const { return pieces.front().lo; }
    double hi() const { return pieces.back().hi; }
};

/// Samples a batch of angles; may return fewer samples than requested when an
/// aborting sample cut the batch short (see evaluate_batch).
using BatchSampler = std::function<std::vector<CertificateSample>(std::span<const double>)>;

struct FitOptions {
    double tol = 1e-8;
    std::size_t max_samples = 100000;
    int max_depth = 30;
    int min_degree = 8;
    int max_degree = 128;
    /// An OVERLAP sample aborts the fit when its value is below this.
    double abort_below = 0.0;
};

enum class FitStatus { converged, aborted };

struct FitOutcome {
    FitStatus status = FitStatus::converged;
    PiecewiseInterpolant interpolant;  // meaningful when converged
    CertificateSample witness;         // meaningful when aborted
    std::vector<CertificateSample> samples;  // every consumed sample, in request order

    bool converged() const { return status == FitStatus::converged; }
};

class sample_budget_exceeded : public std::runtime_error {
public:
    sample_budget_exceeded(PiecewiseInterpolant partial, std::vector<CertificateSample> samples)
        : std::runtime_error("certificate sample budget exceeded"),
          partial_(std::move(partial)),
          samples_(std::move(samples)) {}

    const PiecewiseInterpolant& partial() const noexcept { return partial_; }
    const std::vector<CertificateSample>& samples() const noexcept { return samples_; }

private:
    PiecewiseInterpolant partial_;
    std::vector<CertificateSample> samples_;
};

/// Adaptive piecewise Chebyshev fit. Each piece is sampled on nested
/// Chebyshev-Lobatto grids of degree min_degree, 2*min_degree, ... up to
/// max_degree; a piece is accepted once its trailing coefficients fall below
/// tol * max(1, max |f|), otherwise it is bisected. A piece is also bisected
/// early when doubling the degree fails to shrink the tail tenfold, or when the
/// first tail is above 1e-3 of the scale. Children reuse the parent's endpoint
/// values. Pieces still unresolved at max_depth are kept with over_tolerance set.
/// Throws sample_budget_exceeded once max_samples would be passed.
FitOutcome fit_adaptive(const BatchSampler& f, double lo, double hi, const FitOptions& opts);

/// Convenience overload for a plain scalar function (samples tagged SUM, or
/// OVERLAP when negative).
FitOutcome fit_adaptive(const std::function<double(double)>& f, double lo, double hi, const FitOptions& opts);

/// Local minimizers of every piece, ascending by value. Never empty; throws
/// std::invalid_argument for an interpolant without pieces.
std::vector<std::pair<double, double>> global_min(const PiecewiseInterpolant& p);

/// Throws std::invalid_argument outside [lo, hi].
double evaluate(const PiecewiseInterpolant& p, double theta);

/// Batch evaluation through the vectorized Clenshaw kernel.
std::vector<double> evaluate(const PiecewiseInterpolant& p, std::span<const double> thetas);

// Building blocks, exposed for tests.
std::vector<double> chebyshev_lobatto_points(int degree);  // cos(j pi / degree), j = 0..degree
std::vector<double> chebyshev_coefficients(std::span<const double> values);
std::vector<double> chebyshev_derivative(std::span<const double> coeffs);
std::vector<double> chebyshev_real_roots(std::span<const double> coeffs);  // in [-1, 1]

}  // namespace seplam
