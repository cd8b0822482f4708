#include "seplam/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "seplam/driver.hpp"
#include "seplam/parallel.hpp"

namespace seplam::oracle {

namespace {

constexpr int kCoarseStride = 8;

struct Best {
    Complex z{0.0, 0.0};
    double value = std::numeric_limits<double>::infinity();
};

class Pruned {
public:
    Pruned(const CMatrix& a, const CMatrix& b, Variant v) : a_(a), b_(b), variant_(v) {}

    // Full value, both singular values.
    double full(Complex z) {
        evals_ += 2;
        const double sa = sigma_min_at(a_, z);
        const double sb = sigma_min_at(b_, z);
        return variant_ == Variant::demmel ? std::max(sa, sb) : sa + sb;
    }

    // Exact when the result is below `bound`, otherwise only known to be >= bound.
    double bounded(Complex z, double bound) {
        ++evals_;
        const double sa = sigma_min_at(a_, z);
        if (sa >= bound) return sa;
        ++evals_;
        const double sb = sigma_min_at(b_, z);
        return variant_ == Variant::demmel ? std::max(sa, sb) : sa + sb;
    }

    double lipschitz() const { return variant_ == Variant::demmel ? 1.0 : 2.0; }
    std::size_t evaluations() const { return evals_; }

private:
    const CMatrix& a_;
    const CMatrix& b_;
    Variant variant_;
    std::size_t evals_ = 0;
};

struct GridRound {
    Best local;                                    // best evaluated point of this grid
    std::vector<std::pair<double, Complex>> seeds;  // coarse local minima, ascending
};

// One n x n grid. Coarse nodes (every kCoarseStride-th index) are always
// evaluated; a fine node is skipped when the nearest coarse value minus the
// Lipschitz constant times the distance already reaches the global incumbent.
GridRound evaluate_grid(Pruned& f, Complex center, double hw, int n, Best& global) {
    const double h = 2.0 * hw / (n - 1);
    auto node = [&](int i, int j) { return center + Complex(-hw + i * h, -hw + j * h); };
    std::vector<int> coarse_idx;
    for (int i = 0; i < n; i += kCoarseStride) coarse_idx.push_back(i);
    if (coarse_idx.back() != n - 1) coarse_idx.push_back(n - 1);
    const int m = static_cast<int>(coarse_idx.size());

    GridRound out;
    auto consider = [&](Complex z, double v) {
        if (v < out.local.value) out.local = {z, v};
        if (v < global.value) global = {z, v};
    };

    std::vector<double> coarse(static_cast<std::size_t>(m) * m);
    for (int p = 0; p < m; ++p)
        for (int q = 0; q < m; ++q) {
            const Complex z = node(coarse_idx[p], coarse_idx[q]);
            const double v = f.full(z);
            coarse[p * m + q] = v;
            consider(z, v);
        }

    auto nearest = [&](int i) {
        const auto it = std::lower_bound(coarse_idx.begin(), coarse_idx.end(), i);
        const int hi = static_cast<int>(it - coarse_idx.begin());
        if (hi == 0) return 0;
        if (hi == m) return m - 1;
        return (i - coarse_idx[hi - 1] <= coarse_idx[hi] - i) ? hi - 1 : hi;
    };

    const double lip = f.lipschitz();
    for (int i = 0; i < n; ++i) {
        const int p = nearest(i);
        for (int j = 0; j < n; ++j) {
            const int q = nearest(j);
            if (coarse_idx[p] == i && coarse_idx[q] == j) continue;
            const double dist = h * std::hypot(i - coarse_idx[p], j - coarse_idx[q]);
            if (coarse[p * m + q] - lip * dist >= global.value) continue;
            const Complex z = node(i, j);
            consider(z, f.bounded(z, global.value));
        }
    }

    for (int p = 0; p < m; ++p)
        for (int q = 0; q < m; ++q) {
            const double v = coarse[p * m + q];
            bool is_min = true;
            for (int dp = -1; dp <= 1 && is_min; ++dp)
                for (int dq = -1; dq <= 1; ++dq) {
                    const int pp = p + dp;
                    const int qq = q + dq;
                    if ((dp || dq) && pp >= 0 && pp < m && qq >= 0 && qq < m && coarse[pp * m + qq] < v) {
                        is_min = false;
                        break;
                    }
                }
            if (is_min) out.seeds.emplace_back(v, node(coarse_idx[p], coarse_idx[q]));
        }
    std::sort(out.seeds.begin(), out.seeds.end(), [](const auto& x, const auto& y) {
        if (x.first != y.first) return x.first < y.first;
        return x.second.real() != y.second.real() ? x.second.real() < y.second.real()
                                                  : x.second.imag() < y.second.imag();
    });
    return out;
}

}  // namespace

GridSpec default_grid(const CMatrix& a, const CMatrix& b) {
    double xmin = HUGE_VAL, xmax = -HUGE_VAL, ymin = HUGE_VAL, ymax = -HUGE_VAL;
    for (const CMatrix* m : {&a, &b})
        for (const Complex& l : eigenvalues(*m)) {
            xmin = std::min(xmin, l.real());
            xmax = std::max(xmax, l.real());
            ymin = std::min(ymin, l.imag());
            ymax = std::max(ymax, l.imag());
        }
    GridSpec spec;
    spec.center = Complex(0.5 * (xmin + xmax), 0.5 * (ymin + ymax));
    spec.half_width = 0.5 * std::max(xmax - xmin, ymax - ymin) + std::max(1.0, varah_eigenvalue_check(a, b).first);
    return spec;
}

GridMin grid_min(const CMatrix& a, const CMatrix& b, Variant variant, const GridSpec& spec) {
    if (spec.points_per_axis < 16) throw std::invalid_argument("points_per_axis must be at least 16");
    if (!(spec.zoom_factor > 1.0)) throw std::invalid_argument("zoom_factor must exceed 1");
    if (!(spec.half_width > 0.0)) throw std::invalid_argument("half_width must be positive");

    Pruned f(a, b, variant);
    Best global;
    const GridRound first = evaluate_grid(f, spec.center, spec.half_width, spec.points_per_axis, global);

    std::vector<Complex> starts{first.local.z};
    for (const auto& [v, z] : first.seeds) {
        if (static_cast<int>(starts.size()) >= std::max(1, spec.zoom_starts)) break;
        const bool dup = std::any_of(starts.begin(), starts.end(), [&](Complex s) {
            return std::abs(s - z) <= 2.0 * kCoarseStride * 2.0 * spec.half_width / (spec.points_per_axis - 1);
        });
        if (!dup) starts.push_back(z);
    }

    for (Complex center : starts) {
        double hw = spec.half_width;
        for (int r = 0; r < spec.zoom_rounds; ++r) {
            hw /= spec.zoom_factor;
            center = evaluate_grid(f, center, hw, spec.points_per_axis, global).local.z;
        }
    }
    return {global.z, global.value, f.evaluations()};
}

double normal_sep(const std::vector<Complex>& eigs_a, const std::vector<Complex>& eigs_b, Variant variant) {
    if (eigs_a.empty() || eigs_b.empty()) throw std::invalid_argument("spectra must be nonempty");
    double gap = HUGE_VAL;
    for (const Complex& l : eigs_a)
        for (const Complex& m : eigs_b) gap = std::min(gap, std::abs(l - m));
    return variant == Variant::demmel ? 0.5 * gap : gap;
}

ThetaScan theta_scan(const CMatrix& a, const CMatrix& b, double eps1, double eps2, const SearchFrame& frame,
                     int n_points, unsigned threads) {
    if (n_points < 256) throw std::invalid_argument("theta_scan needs at least 256 points");
    ThetaScan out;
    out.frame = frame;
    out.frame.z0 = validate_search_point(a, b, eps1 == eps2 ? std::vector<double>{eps1}
                                                            : std::vector<double>{eps1, eps2},
                                         frame.z0, 0);
    const double lo = out.frame.domain_lo();
    const double hi = out.frame.domain_hi();
    std::vector<double> thetas(static_cast<std::size_t>(n_points));
    for (int k = 0; k < n_points; ++k) thetas[k] = lo + (hi - lo) * (k + 1) / n_points;
    const SearchFrame fr = out.frame;
    out.samples = evaluate_batch(
        thetas, [&](double t) { return certificate_value_varah(a, b, eps1, eps2, fr, t); }, threads);
    out.min_value = HUGE_VAL;
    for (const CertificateSample& s : out.samples)
        if (s.value < out.min_value) {
            out.min_value = s.value;
            out.min_theta = s.theta;
        }
    return out;
}

}  // namespace seplam::oracle
