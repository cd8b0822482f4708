#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "seplam/ray_certificate.hpp"

namespace seplam {

using PointEvaluator = std::function<CertificateSample(double theta)>;
using StopPredicate = std::function<bool(const CertificateSample&)>;

/// Evaluates `f` at every theta using up to `threads` workers.
///
/// When `stop` fires for index i, work on indices above i may be abandoned;
/// the result is then truncated to the lowest firing index + 1. Every index
/// below the cut is always evaluated, so the result does not depend on
/// scheduling.
std::vector<CertificateSample> evaluate_batch(std::span<const double> thetas, const PointEvaluator& f,
                                              unsigned threads, const StopPredicate& stop = {});

/// Thread count from SEPLAM_THREADS, else the available parallelism.
unsigned default_thread_count();

}  // namespace seplam
