#include "seplam/driver.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <random>

#include "seplam/error.hpp"
#include "seplam/interp.hpp"
#include "seplam/parallel.hpp"

namespace seplam {

namespace {

constexpr double kDedupTol = 1e-10;
constexpr double kSingularTol = 1e-10;
constexpr int kMaxPerturbations = 20;
constexpr std::size_t kFanOut = 5;
constexpr std::size_t kArgminChecks = 10;
constexpr int kFlaggedProbes = 9;

bool conjugate_closed(const std::vector<Complex>& ev) {
    for (const Complex& l : ev) {
        const Complex target = std::conj(l);
        const bool found = std::any_of(ev.begin(), ev.end(), [&](const Complex& m) {
            return std::abs(m - target) <= kDedupTol * std::max(1.0, std::abs(l));
        });
        if (!found) return false;
    }
    return true;
}

bool lex_less(Complex p, Complex q) {
    return p.real() != q.real() ? p.real() < q.real() : p.imag() < q.imag();
}

void check_options(const SolveOptions& o) {
    if (!(o.rel_term_tol > 0.0) || !(o.fit_tol > 0.0) || !(o.opt_tol > 0.0))
        throw config_error("tolerances must be positive");
    if (o.max_restarts < 1) throw config_error("max_restarts must be at least 1");
    if (o.max_samples < 1) throw config_error("max_samples must be at least 1");
}

struct Incumbent {
    Complex z;
    double value;
};

// Optimization with restarts driven by the angular certificate. Shared by
// both variants; only the objective and the certificate levels differ.
SepResult run_with_restarts(const CMatrix& a, const CMatrix& b, const SolveOptions& opts) {
    require_square_finite(a, "A");
    require_square_finite(b, "B");
    check_options(opts);

    const Variant variant = opts.variant;
    const bool demmel = variant == Variant::demmel;
    const unsigned threads = opts.threads > 0 ? opts.threads : default_thread_count();
    const LocalMinOptions lmo{opts.opt_tol, 500};

    SepResult res;
    res.use_lines = opts.use_lines;
    const Complex z0 = opts.z0_override.value_or(select_search_point(a, b));
    res.search_point = z0;

    LocalMinResult lm = minimize_local(a, b, opts.z_init.value_or(z0), variant, lmo);
    res.objective_evals += lm.evaluations;
    Incumbent inc{lm.z_star, lm.value};

    const double tiny = 1e-12 * std::max({1.0, a.norm(), b.norm()});

    for (;;) {
        RoundTrace round;
        round.epsilon = inc.value;
        round.minimizer = inc.z;

        const ObjectiveEval at = eval_objective(a, b, inc.z, variant);
        ++res.objective_evals;
        const double eps_a = demmel ? inc.value : at.sigma_a;
        const double eps_b = demmel ? inc.value : at.sigma_b;
        if (std::min(eps_a, eps_b) <= tiny) {
            // Nothing below a zero level; no certificate needed.
            round.outcome = "skipped";
            round.search_point = z0;
            res.trace.push_back(std::move(round));
            res.final_certificate.clear();
            res.status = SepStatus::certified_global;
            break;
        }

        const std::vector<double> levels = demmel ? std::vector<double>{eps_a} : std::vector<double>{eps_a, eps_b};
        SearchFrame frame;
        frame.z0 = validate_search_point(a, b, levels, z0, opts.seed);
        frame.use_lines = opts.use_lines;
        round.search_point = frame.z0;

        auto stats = std::make_unique<CertificateStats>();
        const double slack = 1e-6 * (1.0 + inc.value);
        const PointEvaluator point = [&](double theta) {
            return certificate_value_varah(a, b, eps_a, eps_b, frame, theta, stats.get());
        };
        const StopPredicate stop = [slack](const CertificateSample& s) {
            return s.branch == Branch::overlap && s.value < -slack;
        };
        const BatchSampler sampler = [&](std::span<const double> thetas) {
            return evaluate_batch(thetas, point, threads, stop);
        };

        FitOptions fo;
        fo.tol = opts.fit_tol;
        fo.max_samples = opts.max_samples;
        fo.abort_below = -slack;

        std::optional<CertificateSample> witness;
        try {
            FitOutcome out = fit_adaptive(sampler, frame.domain_lo(), frame.domain_hi(), fo);
            res.final_certificate = std::move(out.samples);
            if (!out.converged()) {
                witness = out.witness;
                round.outcome = "aborted";
            } else {
                // Pieces accepted at the depth cap straddle jumps and ring there,
                // so they are checked by direct probes instead.
                PiecewiseInterpolant resolved;
                for (const ChebPiece& piece : out.interpolant.pieces)
                    if (!piece.over_tolerance) resolved.pieces.push_back(piece);
                const auto mins =
                    resolved.pieces.empty() ? std::vector<std::pair<double, double>>{} : global_min(resolved);
                std::vector<double> thetas;
                for (std::size_t k = 0; k < mins.size() && k < kArgminChecks; ++k) thetas.push_back(mins[k].first);
                for (const ChebPiece& piece : out.interpolant.pieces) {
                    if (!piece.over_tolerance) continue;
                    for (int j = 1; j <= kFlaggedProbes; ++j)
                        thetas.push_back(piece.lo + (piece.hi - piece.lo) * j / (kFlaggedProbes + 1));
                }
                std::vector<CertificateSample> check = evaluate_batch(thetas, point, threads, stop);
                for (CertificateSample& s : check) {
                    if (stop(s)) witness = s;
                    res.final_certificate.push_back(std::move(s));
                }
                if (witness) {
                    round.outcome = "argmin_overlap";
                } else {
                    round.outcome = "converged";
                    if (!mins.empty() && mins.front().second < -slack) {
                        res.warnings.push_back("interpolant dips below the certificate slack without an overlap sample");
                        res.status = SepStatus::tol_stalled;
                    } else {
                        res.status = SepStatus::certified_global;
                    }
                }
            }
        } catch (const sample_budget_exceeded& e) {
            res.final_certificate = e.samples();
            round.outcome = "budget";
            res.warnings.push_back(e.what());
            res.status = SepStatus::budget_exceeded;
        }
        round.certificate_evals = res.final_certificate.size();
        res.certificate_evals += res.final_certificate.size();
        res.clamped_gaps = stats->clamped_gaps.load();
        res.missed_crossings = stats->missed_crossings.load();

        if (!witness) {
            res.trace.push_back(std::move(round));
            break;
        }
        if (res.restarts >= opts.max_restarts) {
            res.trace.push_back(std::move(round));
            res.warnings.push_back("restart limit reached");
            res.status = SepStatus::budget_exceeded;
            break;
        }
        if (witness->overlap_boundary.empty()) {
            res.trace.push_back(std::move(round));
            res.warnings.push_back("overlap sample without boundary points");
            res.status = SepStatus::tol_stalled;
            break;
        }

        // Most promising boundary points first.
        std::vector<std::pair<double, Complex>> ranked;
        for (const Complex& p : witness->overlap_boundary) {
            ranked.emplace_back(eval_objective(a, b, p, variant).value, p);
            ++res.objective_evals;
        }
        std::sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) {
            return x.first != y.first ? x.first < y.first : lex_less(x.second, y.second);
        });
        if (ranked.size() > kFanOut) ranked.resize(kFanOut);

        ++res.restarts;
        Incumbent best = inc;
        for (const auto& [fv, start] : ranked) {
            round.restart_points.push_back(start);
            lm = minimize_local(a, b, start, variant, lmo);
            res.objective_evals += lm.evaluations;
            if (lm.value < best.value || (lm.value == best.value && lex_less(lm.z_star, best.z)))
                best = {lm.z_star, lm.value};
            if (inc.value - best.value > opts.rel_term_tol * inc.value) break;
        }
        res.trace.push_back(std::move(round));
        const bool stalled = inc.value - best.value <= opts.rel_term_tol * inc.value;
        if (best.value < inc.value) inc = best;
        if (stalled) {
            res.warnings.push_back("restart did not improve the incumbent");
            res.status = SepStatus::tol_stalled;
            break;
        }
    }

    res.epsilon = inc.value;
    res.minimizer = inc.z;
    return res;
}

}  // namespace

std::string_view status_name(SepStatus s) {
    switch (s) {
        case SepStatus::certified_global:
            return "CERTIFIED_GLOBAL";
        case SepStatus::tol_stalled:
            return "TOL_STALLED";
        case SepStatus::budget_exceeded:
            return "BUDGET_EXCEEDED";
    }
    return "?";
}

Complex select_search_point(const CMatrix& a, const CMatrix& b) {
    const std::vector<Complex> ea = eigenvalues(a);
    const std::vector<Complex> eb = eigenvalues(b);
    std::vector<Complex> distinct;
    for (const auto* ev : {&ea, &eb}) {
        for (const Complex& l : *ev) {
            const bool dup = std::any_of(distinct.begin(), distinct.end(),
                                         [&](const Complex& m) { return std::abs(m - l) <= kDedupTol; });
            if (!dup) distinct.push_back(l);
        }
    }
    Complex sum{0.0, 0.0};
    for (const Complex& l : distinct) sum += l;
    Complex z0 = sum / static_cast<double>(distinct.size());
    if (conjugate_closed(ea) && conjugate_closed(eb)) z0.imag(0.0);
    return z0;
}

Complex validate_search_point(const CMatrix& a, const CMatrix& b, const std::vector<double>& eps, Complex z0,
                              std::uint64_t seed) {
    auto acceptable = [&](Complex z) {
        for (const CMatrix* m : {&a, &b}) {
            const Eigen::VectorXd sv = singular_values(shifted(*m, z));
            for (double e : eps)
                for (Eigen::Index i = 0; i < sv.size(); ++i)
                    if (std::abs(sv(i) - e) <= kSingularTol * (1.0 + e)) return false;
        }
        return true;
    };
    if (acceptable(z0)) return z0;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    const double radius = 1e-6 * (1.0 + std::abs(z0));
    for (int k = 0; k < kMaxPerturbations; ++k) {
        const Complex z = z0 + std::polar(radius, angle(rng));
        if (acceptable(z)) return z;
    }
    throw config_error("no admissible search point near the requested one");
}

SepResult compute_sep_demmel(const CMatrix& a, const CMatrix& b, const SolveOptions& opts) {
    SolveOptions o = opts;
    o.variant = Variant::demmel;
    return run_with_restarts(a, b, o);
}

SepResult estimate_sep_varah(const CMatrix& a, const CMatrix& b, const SolveOptions& opts) {
    SolveOptions o = opts;
    o.variant = Variant::varah;
    SepResult res = run_with_restarts(a, b, o);

    ObjectiveEval at = eval_objective(a, b, res.minimizer, Variant::varah);
    ++res.objective_evals;
    const auto [eps_tilde, location] = varah_eigenvalue_check(a, b);
    res.varah_eig_check = eps_tilde;
    res.varah_eig_location = location;
    if (eps_tilde <= res.epsilon) {
        const ObjectiveEval at_eig = eval_objective(a, b, location, Variant::varah);
        ++res.objective_evals;
        if (at_eig.value <= res.epsilon) {
            at = at_eig;
            res.minimizer = location;
            res.epsilon = at_eig.value;
        }
    }
    res.eps1 = at.sigma_a;
    res.eps2 = at.sigma_b;
    return res;
}

SepResult solve(const CMatrix& a, const CMatrix& b, const SolveOptions& opts) {
    return opts.variant == Variant::demmel ? compute_sep_demmel(a, b, opts) : estimate_sep_varah(a, b, opts);
}

std::pair<double, Complex> varah_eigenvalue_check(const CMatrix& a, const CMatrix& b) {
    require_square_finite(a, "A");
    require_square_finite(b, "B");
    double best = HUGE_VAL;
    Complex where{0.0, 0.0};
    auto scan = [&](const CMatrix& m, const CMatrix& other) {
        for (const Complex& l : eigenvalues(other)) {
            const double s = sigma_min_shifted(m, l);
            if (s < best) {
                best = s;
                where = l;
            }
        }
    };
    scan(a, b);
    scan(b, a);
    return {best, where};
}

}  // namespace seplam
