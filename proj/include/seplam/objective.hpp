#pragma once

#include <array>
#include <cstddef>
#include <string_view>
#include <vector>

#include "seplam/linalg.hpp"

namespace seplam {

/// DEMMEL bounds max(||E||, ||F||); VARAH bounds ||E|| + ||F||.
enum class Variant { demmel, varah };

std::string_view variant_name(Variant v);

enum class Active { a, b, tie };

using Vec2 = std::array<double, 2>;  // (d/dx, d/dy) with z = x + iy

struct ObjectiveEval {
    double value = 0.0;
    Vec2 gradient{};
    Active active = Active::tie;
    double sigma_a = 0.0;
    double sigma_b = 0.0;
    Vec2 grad_a{};
    Vec2 grad_b{};
};

/// Gradient of sigma_min(M - zI) in (x, y) from its singular vectors:
/// (-Re(u^H v), Im(u^H v)). Valid where sigma_min is simple and positive.
Vec2 sigma_gradient(const SingularTriplet& t);

/// max (DEMMEL) or sum (VARAH) of sigma_min(A - zI) and sigma_min(B - zI).
ObjectiveEval eval_objective(const CMatrix& a, const CMatrix& b, Complex z, Variant variant);

struct LocalMinResult {
    Complex z_star{0.0, 0.0};
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
    std::size_t evaluations = 0;
    std::vector<double> trace;  // accepted iterate values, starting with f(z_init)
};

struct LocalMinOptions {
    double opt_tol = 1e-14;
    int max_iterations = 500;
};

/// BFGS with a weak Wolfe line search, monotone in f. Stops on a small
/// stationarity measure, the iteration cap, or when the line search can no
/// longer decrease f (the usual outcome at a nonsmooth minimizer).
LocalMinResult minimize_local(const CMatrix& a, const CMatrix& b, Complex z_init, Variant variant,
                              const LocalMinOptions& opts = {});

}  // namespace seplam
