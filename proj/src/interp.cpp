#include "seplam/interp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <numbers>
#include <unordered_map>

#include <Eigen/Eigenvalues>

#include "seplam/kernels.hpp"

namespace seplam {

namespace {

constexpr double kStallRatio = 0.1;
constexpr double kHopeless = 1e-3;
constexpr double kUnknown = std::numeric_limits<double>::quiet_NaN();

// Row-major (n+1) x (n+1) map from Lobatto samples to coefficients.
std::shared_ptr<const std::vector<double>> transform_matrix(std::size_t n) {
    static std::mutex mutex;
    static std::unordered_map<std::size_t, std::shared_ptr<const std::vector<double>>> cache;
    std::lock_guard lock(mutex);
    if (auto it = cache.find(n); it != cache.end()) return it->second;

    auto mat = std::make_shared<std::vector<double>>((n + 1) * (n + 1));
    const double nn = static_cast<double>(n);
    for (std::size_t k = 0; k <= n; ++k) {
        const double row_scale = (k == 0 || k == n) ? 0.5 : 1.0;
        for (std::size_t j = 0; j <= n; ++j) {
            const double w = (j == 0 || j == n) ? 0.5 : 1.0;
            const std::size_t idx = (j * k) % (2 * n);
            (*mat)[k * (n + 1) + j] =
                row_scale * (2.0 / nn) * w * std::cos(std::numbers::pi * static_cast<double>(idx) / nn);
        }
    }
    cache.emplace(n, mat);
    return mat;
}

double clenshaw_one(std::span<const double> c, double x) {
    double out = 0.0;
    kernels::clenshaw(c, std::span<const double>(&x, 1), std::span<double>(&out, 1));
    return out;
}

double to_unit(const ChebPiece& p, double theta) {
    const double x = (2.0 * theta - (p.lo + p.hi)) / (p.hi - p.lo);
    return std::clamp(x, -1.0, 1.0);
}

std::size_t trimmed_length(std::span<const double> c, double rel) {
    double scale = 0.0;
    for (double v : c) scale = std::max(scale, std::abs(v));
    std::size_t len = c.size();
    while (len > 1 && std::abs(c[len - 1]) <= rel * scale) --len;
    return len;
}

}  // namespace

std::vector<double> chebyshev_lobatto_points(int degree) {
    std::vector<double> x(static_cast<std::size_t>(degree) + 1);
    if (degree == 0) {
        x[0] = 0.0;
        return x;
    }
    for (int j = 0; j <= degree; ++j) x[j] = std::cos(std::numbers::pi * j / degree);
    return x;
}

std::vector<double> chebyshev_coefficients(std::span<const double> values) {
    const std::size_t n = values.size() - 1;
    if (n == 0) return {values[0]};
    const auto mat = transform_matrix(n);
    std::vector<double> c(n + 1);
    kernels::matvec(*mat, n + 1, values, c);
    return c;
}

std::vector<double> chebyshev_derivative(std::span<const double> c) {
    const std::size_t n = c.size() - 1;
    if (n == 0) return {0.0};
    std::vector<double> d(n + 1, 0.0);  // d[n] stays 0
    for (std::size_t k = n; k >= 1; --k) {
        const double next = k + 1 <= n ? d[k + 1] : 0.0;
        d[k - 1] = next + 2.0 * static_cast<double>(k) * c[k];
    }
    d[0] *= 0.5;
    d.pop_back();
    return d;
}

std::vector<double> chebyshev_real_roots(std::span<const double> coeffs) {
    const std::size_t len = trimmed_length(coeffs, 1e-14);
    std::span<const double> c = coeffs.first(len);
    const std::size_t d = len - 1;
    std::vector<double> roots;
    if (d == 0) return roots;
    if (d == 1) {
        const double r = -c[0] / c[1];
        if (r >= -1.0 && r <= 1.0) roots.push_back(r);
        return roots;
    }

    // Colleague matrix: eigenvalues are the roots of sum_k c_k T_k.
    Eigen::MatrixXd col = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    col(0, 1) = 1.0;
    for (std::size_t i = 1; i < d; ++i) {
        col(i, i - 1) = 0.5;
        if (i + 1 < d) col(i, i + 1) = 0.5;
    }
    for (std::size_t j = 0; j < d; ++j) col(d - 1, j) -= c[j] / (2.0 * c[d]);
    Eigen::EigenSolver<Eigen::MatrixXd> es(col, false);
    if (es.info() != Eigen::Success) return roots;

    const std::vector<double> dc = chebyshev_derivative(c);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const std::complex<double> z = es.eigenvalues()(i);
        if (std::abs(z.imag()) > 1e-6 || std::abs(z.real()) > 1.0 + 1e-8) continue;
        double x = std::clamp(z.real(), -1.0, 1.0);
        for (int it = 0; it < 3; ++it) {  // Newton polish
            const double fx = clenshaw_one(c, x);
            const double dfx = clenshaw_one(dc, x);
            if (dfx == 0.0) break;
            const double next = std::clamp(x - fx / dfx, -1.0, 1.0);
            if (std::abs(next - x) > 1e-6) break;
            x = next;
        }
        roots.push_back(x);
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

FitOutcome fit_adaptive(const BatchSampler& f, double lo, double hi, const FitOptions& opts) {
    if (!(opts.tol > 0.0)) throw std::invalid_argument("fit tolerance must be positive");
    if (!(hi > lo)) throw std::invalid_argument("fit domain must be a nonempty interval");
    if (opts.min_degree < 2 || opts.min_degree % 2 != 0 || opts.max_degree < opts.min_degree)
        throw std::invalid_argument("degrees must be even with min_degree <= max_degree");

    FitOutcome out;
    PiecewiseInterpolant& interp = out.interpolant;

    // Fills values[slots[i]] from a batch; true when it produced an aborting sample.
    auto take = [&](const std::vector<double>& thetas, std::vector<double>& values,
                    const std::vector<std::size_t>& slots) {
        if (out.samples.size() + thetas.size() > opts.max_samples) {
            interp.sample_count = out.samples.size();
            throw sample_budget_exceeded(interp, out.samples);
        }
        std::vector<CertificateSample> got = f(thetas);
        for (std::size_t i = 0; i < got.size(); ++i) {
            out.samples.push_back(got[i]);
            const CertificateSample& s = out.samples.back();
            if (s.branch == Branch::overlap && s.value < opts.abort_below) {
                out.status = FitStatus::aborted;
                out.witness = s;
                return true;
            }
            values[slots[i]] = s.value;
        }
        if (got.size() != thetas.size()) throw std::logic_error("sampler cut a batch short without an aborting sample");
        return false;
    };

    struct Pending {
        double lo;
        double hi;
        int depth;
        double f_lo = kUnknown;  // endpoint values inherited from the parent
        double f_hi = kUnknown;
    };
    std::vector<Pending> stack{{lo, hi, 0}};
    while (!stack.empty()) {
        const Pending piece = stack.back();
        stack.pop_back();
        const double mid = 0.5 * (piece.lo + piece.hi);
        const double half = 0.5 * (piece.hi - piece.lo);

        int n = opts.min_degree;
        double prev_tail = HUGE_VAL;
        std::vector<double> values(static_cast<std::size_t>(n) + 1);
        {
            const std::vector<double> xs = chebyshev_lobatto_points(n);
            std::vector<double> thetas;
            std::vector<std::size_t> slots;
            for (std::size_t j = 0; j < xs.size(); ++j) {
                if (j == 0 && !std::isnan(piece.f_hi)) {
                    values[j] = piece.f_hi;
                } else if (j + 1 == xs.size() && !std::isnan(piece.f_lo)) {
                    values[j] = piece.f_lo;
                } else {
                    thetas.push_back(mid + half * xs[j]);
                    slots.push_back(j);
                }
            }
            if (take(thetas, values, slots)) return out;
        }
        for (;;) {
            std::vector<double> c = chebyshev_coefficients(values);
            double vscale = 1.0;
            for (double v : values) vscale = std::max(vscale, std::abs(v));
            const std::size_t tail_len = std::max<std::size_t>(2, static_cast<std::size_t>(n) / 4 + 1);
            double tail = 0.0;
            for (std::size_t k = c.size() - std::min(tail_len, c.size()); k < c.size(); ++k)
                tail = std::max(tail, std::abs(c[k]));

            if (tail <= opts.tol * vscale) {
                interp.pieces.push_back({piece.lo, piece.hi, std::move(c), tail, false});
                break;
            }
            // Coefficients that stop decaying mean a kink or jump; bisect now.
            const bool stalled = tail > kStallRatio * prev_tail || (n == opts.min_degree && tail > kHopeless * vscale);
            prev_tail = tail;
            if (2 * n > opts.max_degree || stalled) {
                if (piece.depth >= opts.max_depth) {
                    interp.pieces.push_back({piece.lo, piece.hi, std::move(c), tail, true});
                } else {
                    const double f_mid = values[static_cast<std::size_t>(n) / 2];
                    stack.push_back({mid, piece.hi, piece.depth + 1, f_mid, values.front()});
                    stack.push_back({piece.lo, mid, piece.depth + 1, values.back(), f_mid});
                }
                break;
            }
            // Refine on the nested grid: even nodes are reused.
            const int n2 = 2 * n;
            std::vector<double> refined(static_cast<std::size_t>(n2) + 1);
            for (int j = 0; j <= n; ++j) refined[2 * j] = values[j];
            std::vector<double> thetas;
            std::vector<std::size_t> slots;
            for (int j = 1; j < n2; j += 2) {
                thetas.push_back(mid + half * std::cos(std::numbers::pi * j / n2));
                slots.push_back(static_cast<std::size_t>(j));
            }
            if (take(thetas, refined, slots)) return out;
            values = std::move(refined);
            n = n2;
        }
    }
    interp.sample_count = out.samples.size();
    return out;
}

FitOutcome fit_adaptive(const std::function<double(double)>& f, double lo, double hi, const FitOptions& opts) {
    BatchSampler batch = [&f](std::span<const double> thetas) {
        std::vector<CertificateSample> out;
        out.reserve(thetas.size());
        for (double t : thetas) {
            CertificateSample s;
            s.theta = t;
            s.value = f(t);
            s.branch = s.value < 0.0 ? Branch::overlap : Branch::sum;
            out.push_back(std::move(s));
        }
        return out;
    };
    return fit_adaptive(batch, lo, hi, opts);
}

double evaluate(const PiecewiseInterpolant& p, double theta) {
    if (p.pieces.empty()) throw std::invalid_argument("empty interpolant");
    const double slack = 1e-14 * (1.0 + std::max(std::abs(p.lo()), std::abs(p.hi())));
    if (!(theta >= p.lo() - slack && theta <= p.hi() + slack))
        throw std::invalid_argument("theta outside the interpolation domain");
    auto it = std::upper_bound(p.pieces.begin(), p.pieces.end(), theta,
                               [](double t, const ChebPiece& piece) { return t < piece.hi; });
    if (it == p.pieces.end()) --it;
    return clenshaw_one(it->coeffs, to_unit(*it, theta));
}

std::vector<double> evaluate(const PiecewiseInterpolant& p, std::span<const double> thetas) {
    if (p.pieces.empty()) throw std::invalid_argument("empty interpolant");
    std::vector<double> out(thetas.size());
    std::vector<std::vector<std::size_t>> owner(p.pieces.size());
    const double slack = 1e-14 * (1.0 + std::max(std::abs(p.lo()), std::abs(p.hi())));
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        const double t = thetas[i];
        if (!(t >= p.lo() - slack && t <= p.hi() + slack))
            throw std::invalid_argument("theta outside the interpolation domain");
        auto it = std::upper_bound(p.pieces.begin(), p.pieces.end(), t,
                                   [](double v, const ChebPiece& piece) { return v < piece.hi; });
        if (it == p.pieces.end()) --it;
        owner[static_cast<std::size_t>(it - p.pieces.begin())].push_back(i);
    }
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t k = 0; k < p.pieces.size(); ++k) {
        if (owner[k].empty()) continue;
        xs.clear();
        for (std::size_t i : owner[k]) xs.push_back(to_unit(p.pieces[k], thetas[i]));
        ys.resize(xs.size());
        kernels::clenshaw(p.pieces[k].coeffs, xs, ys);
        for (std::size_t j = 0; j < owner[k].size(); ++j) out[owner[k][j]] = ys[j];
    }
    return out;
}

std::vector<std::pair<double, double>> global_min(const PiecewiseInterpolant& p) {
    if (p.pieces.empty()) throw std::invalid_argument("empty interpolant");
    std::vector<std::pair<double, double>> mins;
    for (const ChebPiece& piece : p.pieces) {
        const std::span<const double> c(piece.coeffs);
        const std::size_t len = trimmed_length(c, 1e-13);
        std::vector<double> xs{-1.0};
        for (double r : chebyshev_real_roots(chebyshev_derivative(c.first(len)))) xs.push_back(r);
        xs.push_back(1.0);
        std::sort(xs.begin(), xs.end());
        xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
        std::vector<double> vals(xs.size());
        kernels::clenshaw(c, xs, vals);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const bool left_ok = i == 0 || vals[i] <= vals[i - 1];
            const bool right_ok = i + 1 == xs.size() || vals[i] <= vals[i + 1];
            if (left_ok && right_ok) {
                const double theta = 0.5 * (piece.lo + piece.hi) + 0.5 * (piece.hi - piece.lo) * xs[i];
                mins.emplace_back(theta, vals[i]);
            }
        }
    }
    std::sort(mins.begin(), mins.end(), [](const auto& x, const auto& y) {
        return x.second != y.second ? x.second < y.second : x.first < y.first;
    });
    // A minimizer on a shared piece endpoint is reported by both neighbours.
    const double same = 1e-12 * (p.hi() - p.lo());
    std::vector<std::pair<double, double>> unique;
    for (const auto& m : mins)
        if (std::none_of(unique.begin(), unique.end(), [&](const auto& u) { return std::abs(u.first - m.first) <= same; }))
            unique.push_back(m);
    return unique;
}

}  // namespace seplam
