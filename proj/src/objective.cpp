#include "seplam/objective.hpp"

#include <algorithm>
#include <cmath>

namespace seplam {

namespace {

constexpr double kTieTol = 1e-14;
constexpr double kNearTie = 1e-8;

double dot(const Vec2& p, const Vec2& q) { return p[0] * q[0] + p[1] * q[1]; }
double norm(const Vec2& p) { return std::hypot(p[0], p[1]); }

// Smallest-norm point of the segment [g, h].
Vec2 min_norm_combination(const Vec2& g, const Vec2& h) {
    const Vec2 diff{g[0] - h[0], g[1] - h[1]};
    const double dd = dot(diff, diff);
    const double t = dd > 0.0 ? std::clamp(-dot(h, diff) / dd, 0.0, 1.0) : 0.0;
    return {h[0] + t * diff[0], h[1] + t * diff[1]};
}

double stationarity(const ObjectiveEval& e, Variant variant) {
    if (variant == Variant::demmel &&
        std::abs(e.sigma_a - e.sigma_b) <= kNearTie * std::max(1.0, e.value))
        return norm(min_norm_combination(e.grad_a, e.grad_b));
    return norm(e.gradient);
}

using Mat2 = std::array<double, 4>;  // row-major

Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

Vec2 mat_vec(const Mat2& h, const Vec2& v) { return {h[0] * v[0] + h[1] * v[1], h[2] * v[0] + h[3] * v[1]}; }

// Inverse BFGS update; skipped when curvature is not positive.
void bfgs_update(Mat2& h, const Vec2& s, const Vec2& y, bool first) {
    const double sy = dot(s, y);
    if (!(sy > 0.0)) return;
    if (first) {
        const double scale = sy / dot(y, y);
        h = {scale, 0.0, 0.0, scale};
    }
    const double rho = 1.0 / sy;
    const Vec2 hy = mat_vec(h, y);
    const double yhy = dot(y, hy);
    // H+ = H - rho (s hy^T + hy s^T) + (rho^2 yHy + rho) s s^T
    const double c = rho * rho * yhy + rho;
    Mat2 out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            out[2 * i + j] = h[2 * i + j] - rho * (s[i] * hy[j] + hy[i] * s[j]) + c * s[i] * s[j];
    h = out;
}

struct Point {
    Complex z;
    ObjectiveEval e;
};

}  // namespace

std::string_view variant_name(Variant v) { return v == Variant::demmel ? "demmel" : "varah"; }

Vec2 sigma_gradient(const SingularTriplet& t) {
    const Complex uv = t.left.dot(t.right);  // u^H v
    return {-uv.real(), uv.imag()};
}

ObjectiveEval eval_objective(const CMatrix& a, const CMatrix& b, Complex z, Variant variant) {
    const SingularTriplet ta = smallest_singular_triplet(shifted(a, z));
    const SingularTriplet tb = smallest_singular_triplet(shifted(b, z));
    ObjectiveEval e;
    e.sigma_a = ta.sigma;
    e.sigma_b = tb.sigma;
    e.grad_a = sigma_gradient(ta);
    e.grad_b = sigma_gradient(tb);
    if (variant == Variant::varah) {
        e.value = e.sigma_a + e.sigma_b;
        e.gradient = {e.grad_a[0] + e.grad_b[0], e.grad_a[1] + e.grad_b[1]};
        e.active = Active::tie;
        return e;
    }
    e.value = std::max(e.sigma_a, e.sigma_b);
    if (std::abs(e.sigma_a - e.sigma_b) <= kTieTol * e.value) {
        e.active = Active::tie;
        e.gradient = e.grad_a;
    } else if (e.sigma_a > e.sigma_b) {
        e.active = Active::a;
        e.gradient = e.grad_a;
    } else {
        e.active = Active::b;
        e.gradient = e.grad_b;
    }
    return e;
}

LocalMinResult minimize_local(const CMatrix& a, const CMatrix& b, Complex z_init, Variant variant,
                              const LocalMinOptions& opts) {
    LocalMinResult res;
    auto evaluate = [&](Complex z) {
        ++res.evaluations;
        return Point{z, eval_objective(a, b, z, variant)};
    };

    Point cur = evaluate(z_init);
    res.trace.push_back(cur.e.value);
    Mat2 h = identity();
    bool fresh = true;
    bool reset_tried = false;

    // Weak Wolfe bracketing; falls back to the best Armijo point found.
    auto line_search = [&](const Vec2& d, Point& out) {
        constexpr double c1 = 1e-4;
        constexpr double c2 = 0.9;
        const double slope = dot(cur.e.gradient, d);
        if (!(slope < 0.0)) return false;
        double lo = 0.0;
        double hi = HUGE_VAL;
        double t = 1.0;
        bool have_armijo = false;
        for (int k = 0; k < 60; ++k) {
            Point trial = evaluate(cur.z + Complex(t * d[0], t * d[1]));
            if (!std::isfinite(trial.e.value) || trial.e.value > cur.e.value + c1 * t * slope ||
                !(trial.e.value < cur.e.value)) {
                hi = t;
            } else {
                if (!have_armijo || trial.e.value < out.e.value) out = trial;
                have_armijo = true;
                if (dot(trial.e.gradient, d) >= c2 * slope) {
                    out = trial;
                    return true;
                }
                lo = t;
            }
            t = std::isinf(hi) ? 2.0 * lo : 0.5 * (lo + hi);
            if (t * std::hypot(d[0], d[1]) <= 1e-17 * (1.0 + std::abs(cur.z))) break;
        }
        return have_armijo;
    };

    for (res.iterations = 0; res.iterations < opts.max_iterations; ++res.iterations) {
        if (stationarity(cur.e, variant) <= opts.opt_tol) {
            res.converged = true;
            break;
        }
        const Vec2 hg = mat_vec(h, cur.e.gradient);
        const Vec2 d{-hg[0], -hg[1]};
        Point next;
        if (!line_search(d, next)) {
            if (!reset_tried && !fresh) {
                h = identity();
                fresh = true;
                reset_tried = true;
                continue;
            }
            res.converged = true;  // cannot decrease further
            break;
        }
        reset_tried = false;
        const Vec2 s{next.z.real() - cur.z.real(), next.z.imag() - cur.z.imag()};
        const Vec2 y{next.e.gradient[0] - cur.e.gradient[0], next.e.gradient[1] - cur.e.gradient[1]};
        bfgs_update(h, s, y, fresh);
        fresh = false;
        cur = next;
        res.trace.push_back(cur.e.value);
    }
    res.z_star = cur.z;
    res.value = cur.e.value;
    return res;
}

}  // namespace seplam
