// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "seplam/cli.hpp"
#include "seplam/driver.hpp"
#include "seplam/io.hpp"
#include "seplam/oracle.hpp"
#include "seplam/ray_certificate.hpp"
#include "test_support.hpp"

using namespace seplam;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Verdict {
    bool pass = true;
    std::string detail;
    std::string first_failure;

    void require(bool ok, const std::string& what) {
        if (!ok && pass) first_failure = what;
        pass = pass && ok;
    }
};

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Dense pairs shared by the oracle, sign and sandwich checks.
struct DensePair {
    CMatrix a, b;
    int n = 0;
    SepResult demmel;
    oracle::GridMin grid;
};

std::vector<DensePair>& dense_pairs() {
    static std::vector<DensePair> pairs = [] {
        std::vector<DensePair> out;
        const int sizes[3] = {5, 8, 10};
        for (int k = 0; k < 20; ++k) {
            std::mt19937_64 rng(1000 + k);
            DensePair p;
            p.n = sizes[k % 3];
            p.a = test::random_scaled(p.n, rng);
            p.b = test::random_scaled(p.n, rng);
            p.demmel = compute_sep_demmel(p.a, p.b, SolveOptions{});
            p.grid = oracle::grid_min(p.a, p.b, Variant::demmel, oracle::default_grid(p.a, p.b));
            out.push_back(std::move(p));
        }
        return out;
    }();
    return pairs;
}

Verdict normal_pairs() {
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
        std::mt19937_64 rng(500 + k);
        std::uniform_int_distribution<int> size(2, 8);
        const int m = size(rng);
        const int n = size(rng);
        const auto [ea, eb] = test::separated_spectra(m, n, 0.1, rng);
        const double expected = test::brute_half_gap(ea, eb);
        const SepResult r = compute_sep_demmel(test::from_diagonal(ea), test::from_diagonal(eb), SolveOptions{});
        const double rel = std::abs(r.epsilon - expected) / expected;
        worst = std::max(worst, rel);
        v.require(rel <= 1e-8, "case " + std::to_string(k) + " rel error " + fmt("%.3g", rel));
        v.require(r.status == SepStatus::certified_global, "case " + std::to_string(k) + " not certified");
        v.require(std::abs(oracle::normal_sep(ea, eb, Variant::demmel) - expected) <= 1e-15 * expected,
                  "normal_sep disagrees with enumeration");
    }
    const double wall = seconds_since(t0);
    v.require(wall < 60.0, "runtime " + fmt("%.1f s", wall));
    v.detail = "50 pairs, max rel error " + fmt("%.2g", worst) + ", " + fmt("%.1f s", wall);
    return v;
}

Verdict oracle_agreement() {
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (std::size_t k = 0; k < dense_pairs().size(); ++k) {
        const DensePair& p = dense_pairs()[k];
        const double rel = std::abs(p.demmel.epsilon - p.grid.value) / p.grid.value;
        worst = std::max(worst, rel);
        v.require(rel <= 1e-4, "pair " + std::to_string(k) + " rel diff " + fmt("%.3g", rel));
        v.require(p.demmel.epsilon <= p.grid.value + 1e-8, "pair " + std::to_string(k) + " exceeds the oracle");
    }
    v.detail = "20 pairs (n = 5/8/10), max rel diff " + fmt("%.2g", worst) + ", " + fmt("%.1f s", seconds_since(t0));
    return v;
}

// t with eps a singular value of M - (z0 + t e^{i theta}) I, as eigenvalues of
// the Hermitian-block pencil [-eps I, M - z0; (M - z0)^H, -eps I] - t [0, e I; conj(e) I, 0].
std::vector<Complex> pencil_parameters(const CMatrix& m, double eps, Complex z0, double theta) {
    const Eigen::Index n = m.rows();
    const Complex e = std::polar(1.0, theta);
    CMatrix shifted = m;
    shifted.diagonal().array() -= z0;
    CMatrix a0 = CMatrix::Zero(2 * n, 2 * n);
    a0.topLeftCorner(n, n).diagonal().setConstant(-eps);
    a0.bottomRightCorner(n, n).diagonal().setConstant(-eps);
    a0.topRightCorner(n, n) = shifted;
    a0.bottomLeftCorner(n, n) = shifted.adjoint();
    CMatrix b0 = CMatrix::Zero(2 * n, 2 * n);
    b0.topRightCorner(n, n).diagonal().setConstant(e);
    b0.bottomLeftCorner(n, n).diagonal().setConstant(std::conj(e));
    // b0 is unitary.
    Eigen::ComplexEigenSolver<CMatrix> es(b0.adjoint() * a0, false);
    return {es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size()};
}

// Largest distance from an element of `x` to its greedy partner in `y`.
double matching_distance(std::vector<Complex> x, std::vector<Complex> y) {
    double worst = 0.0;
    for (const Complex& p : x) {
        auto it = std::min_element(y.begin(), y.end(),
                                   [&](const Complex& u, const Complex& w) { return std::abs(u - p) < std::abs(w - p); });
        worst = std::max(worst, std::abs(*it - p));
        y.erase(it);
    }
    return worst;
}

Verdict pencil_consistency() {
    Verdict v;
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<int> size(2, 8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst_level = 0.0, worst_sym = 0.0, worst_agree = 0.0;
    int crossings = 0;
    for (int k = 0; k < 200; ++k) {
        const CMatrix m = test::random_complex(size(rng), rng);
        const Complex z0(4 * u(rng) - 2, 4 * u(rng) - 2);
        SearchFrame frame;
        frame.z0 = z0;
        frame.use_lines = k % 2 == 0;
        const double eps = test::sigma_min_ref(m, z0) * (0.3 + 2.7 * u(rng));
        const double theta = frame.domain_lo() + (frame.domain_hi() - frame.domain_lo()) * u(rng);

        for (double r : imaginary_crossings(m, eps, frame, theta).params) {
            ++crossings;
            const double err = std::abs(test::sigma_min_ref(m, frame.point(theta, r)) - eps);
            worst_level = std::max(worst_level, err);
            v.require(err <= 1e-6, "level error " + fmt("%.3g", err) + " at sample " + std::to_string(k));
        }

        const CMatrix c = build_rotated_matrix(m, eps, frame, theta);
        Eigen::ComplexEigenSolver<CMatrix> es(c, false);
        std::vector<Complex> lam(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
        std::vector<Complex> mirrored;
        for (const Complex& l : lam) mirrored.push_back(-std::conj(l));
        const double sym = matching_distance(lam, mirrored);
        worst_sym = std::max(worst_sym, sym);
        v.require(sym <= 1e-8, "asymmetric spectrum " + fmt("%.3g", sym) + " at sample " + std::to_string(k));

        if (k < 20) {
            std::vector<Complex> from_pencil;
            for (const Complex& t : pencil_parameters(m, eps, z0, theta)) from_pencil.push_back(Complex(0, 1) * t);
            const double diff = matching_distance(lam, from_pencil) / std::max(1.0, c.norm());
            worst_agree = std::max(worst_agree, diff);
            v.require(diff <= 1e-8, "pencil and reduced form differ by " + fmt("%.3g", diff));
        }
    }
    v.require(crossings > 0, "no crossings sampled");
    v.detail = "200 samples, " + std::to_string(crossings) + " crossings, max level error " + fmt("%.2g", worst_level) +
               ", symmetry " + fmt("%.2g", worst_sym) + ", pencil agreement " + fmt("%.2g", worst_agree);
    return v;
}

Verdict sign_test() {
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    double at_star_lo = HUGE_VAL, at_star_hi = -HUGE_VAL;
    for (std::size_t k = 0; k < 10; ++k) {
        const DensePair& p = dense_pairs()[k];
        const double star = p.grid.value;
        SearchFrame frame;
        frame.z0 = select_search_point(p.a, p.b);
        const auto scan = [&](double eps) { return oracle::theta_scan(p.a, p.b, eps, eps, frame, 4096, 0).min_value; };
        const double above = scan(1.05 * star);
        const double below = scan(0.95 * star);
        const double at = scan(star);
        at_star_lo = std::min(at_star_lo, at);
        at_star_hi = std::max(at_star_hi, at);
        const std::string tag = "pair " + std::to_string(k);
        v.require(above < 0.0, tag + " no overlap at 1.05 eps*");
        v.require(below >= -1e-9, tag + " overlap at 0.95 eps*: " + fmt("%.3g", below));
        v.require(at >= -1e-6 && at <= 1e-3, tag + " min at eps* is " + fmt("%.3g", at));
    }
    v.detail = "10 pairs, 4096 angles, min at eps* in [" + fmt("%.2g", at_star_lo) + ", " + fmt("%.2g", at_star_hi) +
               "], " + fmt("%.1f s", seconds_since(t0));
    return v;
}

Verdict gradient_check() {
    Verdict v;
    std::mt19937_64 rng(88);
    std::normal_distribution<double> g;
    double worst = 0.0;
    int done = 0;
    const double h = 1e-6;
    while (done < 100) {
        const CMatrix a = test::random_complex(6, rng);
        const CMatrix b = test::random_complex(6, rng);
        const Complex z(2 * g(rng), 2 * g(rng));
        for (Variant var : {Variant::demmel, Variant::varah}) {
            const ObjectiveEval e = eval_objective(a, b, z, var);
            // Smooth: a clear active branch and simple smallest singular values.
            const Eigen::VectorXd sa = singular_values(shifted(a, z));
            const Eigen::VectorXd sb = singular_values(shifted(b, z));
            const bool simple = sa(4) - sa(5) > 1e-3 && sb(4) - sb(5) > 1e-3;
            if (!simple || (var == Variant::demmel && std::abs(e.sigma_a - e.sigma_b) < 1e-3)) continue;
            const auto f = [&](Complex w) { return eval_objective(a, b, w, var).value; };
            const double gx = (f(z + h) - f(z - h)) / (2 * h);
            const double gy = (f(z + Complex(0, h)) - f(z - Complex(0, h))) / (2 * h);
            const double rel = std::hypot(e.gradient[0] - gx, e.gradient[1] - gy) / std::max(1e-12, std::hypot(gx, gy));
            worst = std::max(worst, rel);
            v.require(rel <= 1e-5, "relative error " + fmt("%.3g", rel));
            ++done;
        }
    }
    v.detail = std::to_string(done) + " points, both variants, max rel error " + fmt("%.2g", worst);
    return v;
}

Verdict restart_behavior() {
    Verdict v;
    for (int seed = 0; seed < 10; ++seed) {
        std::mt19937_64 rng(seed);
        const CMatrix a = test::random_scaled(10, rng) - 10.0 * CMatrix::Identity(10, 10);
        const CMatrix b = test::random_scaled(10, rng) + 10.0 * CMatrix::Identity(10, 10);
        const SepResult ref = compute_sep_demmel(a, b, SolveOptions{});

        // A start whose plain local minimization stalls above the global value.
        const oracle::GridSpec box = oracle::default_grid(a, b);
        std::optional<Complex> bad;
        for (int i = 0; i < 7 && !bad; ++i)
            for (int j = 0; j < 7 && !bad; ++j) {
                const Complex z = box.center + box.half_width * Complex(-1 + i / 3.0, -1 + j / 3.0);
                if (minimize_local(a, b, z, Variant::demmel).value > ref.epsilon * (1 + 1e-4)) bad = z;
            }
        if (!bad) continue;

        SolveOptions opts;
        opts.z_init = *bad;
        const SepResult r = compute_sep_demmel(a, b, opts);
        v.require(r.restarts >= 1, "no restart from the bad start");
        bool decreasing = true;
        for (std::size_t k = 1; k < r.trace.size(); ++k) decreasing = decreasing && r.trace[k].epsilon < r.trace[k - 1].epsilon;
        v.require(decreasing, "incumbent sequence not strictly decreasing");
        const double diff = std::abs(r.epsilon - ref.epsilon);
        v.require(diff <= 1e-8, "differs from the spectral-mean run by " + fmt("%.3g", diff));
        std::ostringstream s;
        s << "seed " << seed << ", z_init " << bad->real() << fmt("%+g", bad->imag()) << "i, " << r.restarts
          << " restart(s), |eps - eps_mean| = " << fmt("%.2g", diff);
        v.detail = s.str();
        return v;
    }
    v.require(false, "no seed produced a non-global local minimum");
    return v;
}

Verdict varah_sandwich() {
    Verdict v;
    double worst_enum = 0.0;
    SolveOptions opts;
    opts.variant = Variant::varah;
    for (std::size_t k = 0; k < dense_pairs().size(); ++k) {
        const DensePair& p = dense_pairs()[k];
        const SepResult r = estimate_sep_varah(p.a, p.b, opts);
        const std::string tag = "pair " + std::to_string(k);
        v.require(r.eps1 && r.eps2 && r.varah_eig_check, tag + " missing fields");
        if (!(r.eps1 && r.eps2 && r.varah_eig_check)) continue;
        const double split = *r.eps1 + *r.eps2;
        v.require(p.demmel.epsilon <= std::min(split, *r.varah_eig_check) + 1e-8, tag + " sandwich violated");

        double brute = HUGE_VAL;
        Eigen::ComplexEigenSolver<CMatrix> ea(p.a, false), eb(p.b, false);
        for (Eigen::Index i = 0; i < p.n; ++i) {
            brute = std::min(brute, test::sigma_min_ref(p.a, eb.eigenvalues()(i)));
            brute = std::min(brute, test::sigma_min_ref(p.b, ea.eigenvalues()(i)));
        }
        const double d = std::abs(*r.varah_eig_check - brute);
        worst_enum = std::max(worst_enum, d);
        v.require(d <= 1e-12, tag + " eigenvalue check differs from enumeration by " + fmt("%.3g", d));
    }
    v.detail = "20 pairs, max |eps~ - enumeration| " + fmt("%.2g", worst_enum);
    return v;
}

Verdict shared_spectrum() {
    Verdict v;
    double worst = 0.0;
    for (int k = 0; k < 5; ++k) {
        std::mt19937_64 rng(300 + k);
        const CMatrix a = test::random_scaled(5 + k, rng);
        const double eps = compute_sep_demmel(a, a, SolveOptions{}).epsilon;
        worst = std::max(worst, eps);
        v.require(eps <= 1e-7, "case " + std::to_string(k) + " gives " + fmt("%.3g", eps));
    }
    v.detail = "5 cases, max sep " + fmt("%.2g", worst);
    return v;
}

struct CliRun {
    int code;
    std::string out;
};

CliRun run_cli_args(std::vector<std::string> args) {
    args.insert(args.begin(), "seplam");
    std::vector<const char*> argv;
    for (const std::string& s : args) argv.push_back(s.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str()};
}

std::string without_wall_time(const std::string& text) {
    std::istringstream in(text);
    std::string out, line;
    while (std::getline(in, line))
        if (line.find("\"wall_time_seconds\"") == std::string::npos) out += line + '\n';
    return out;
}

fs::path scratch(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / ("seplam_acceptance_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

Verdict determinism() {
    Verdict v;
    const fs::path d = scratch("determinism");
    std::mt19937_64 rng(99);
    io::write_matrix_market(d / "a.mtx", test::random_scaled(6, rng));
    io::write_matrix_market(d / "b.mtx", test::random_scaled(6, rng));
    for (const char* variant : {"demmel", "varah"}) {
        const std::vector<std::string> args{"--matrix-a", (d / "a.mtx").string(), "--matrix-b", (d / "b.mtx").string(),
                                            "--variant", variant, "--seed", "7"};
        const CliRun r1 = run_cli_args(args);
        const CliRun r2 = run_cli_args(args);
        v.require(r1.code == 0 && r2.code == 0, std::string(variant) + " run failed");
        v.require(without_wall_time(r1.out) == without_wall_time(r2.out), std::string(variant) + " outputs differ");
    }
    v.detail = "demmel and varah, two runs each, identical JSON apart from wall_time_seconds";
    return v;
}

Verdict cli_io() {
    Verdict v;
    const fs::path d = scratch("cli");

    std::mt19937_64 rng(123);
    CMatrix m = test::random_complex(9, rng);
    for (Eigen::Index k = 0; k < m.size(); ++k) m(k) *= std::pow(10.0, static_cast<double>(k % 61) - 30.0);
    io::write_matrix_market(d / "m.mtx", m);
    const CMatrix back = io::read_matrix(d / "m.mtx");
    bool exact = back.rows() == m.rows() && back.cols() == m.cols();
    for (Eigen::Index k = 0; exact && k < m.size(); ++k)
        exact = back(k).real() == m(k).real() && back(k).imag() == m(k).imag();
    v.require(exact, "round trip not bit exact");

    io::write_matrix_market(d / "a.mtx", test::random_scaled(4, rng));
    io::write_matrix_market(d / "b.mtx", test::random_scaled(4, rng));
    const std::vector<const char*> keys{"epsilon", "minimizer", "status", "restarts", "certificate_evals",
                                        "objective_evals", "variant", "eps1", "eps2", "varah_eig_check",
                                        "wall_time_seconds", "config"};
    for (const char* variant : {"demmel", "varah"}) {
        const CliRun r = run_cli_args({"--matrix-a", (d / "a.mtx").string(), "--matrix-b", (d / "b.mtx").string(),
                                       "--variant", variant});
        v.require(r.code == 0, std::string(variant) + " exit " + std::to_string(r.code));
        if (r.code != 0) continue;
        const nlohmann::json j = nlohmann::json::parse(r.out);
        for (const char* key : keys) v.require(j.contains(key), std::string("missing key ") + key);
        v.require(j["minimizer"].contains("re") && j["minimizer"].contains("im"), "minimizer lacks re/im");
    }

    const int missing = run_cli_args({"--matrix-a", (d / "none.mtx").string(), "--matrix-b", (d / "b.mtx").string()}).code;
    v.require(missing == 1, "missing file exit " + std::to_string(missing));

    io::write_matrix_market(d / "ca.mtx", test::diag({0.0, 10.0, 20.0}));
    io::write_matrix_market(d / "cb.mtx", test::diag({3.0, 11.5, 20.6}));
    const int budget = run_cli_args({"--matrix-a", (d / "ca.mtx").string(), "--matrix-b", (d / "cb.mtx").string(),
                                     "--z-init", "1.5,0", "--max-restarts", "1"})
                           .code;
    v.require(budget == 2, "budget run exit " + std::to_string(budget));
    v.detail = "bit-exact round trip, all keys present, exit codes 0/1/2";
    return v;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
        {"normal-pair exactness", normal_pairs},
        {"oracle agreement", oracle_agreement},
        {"pencil consistency", pencil_consistency},
        {"certificate sign test", sign_test},
        {"gradient check", gradient_check},
        {"restart behavior", restart_behavior},
        {"varah sandwich", varah_sandwich},
        {"shared-spectrum zero", shared_spectrum},
        {"determinism", determinism},
        {"cli/io", cli_io},
    };
    int failed = 0;
    for (const auto& [name, check] : criteria) {
        Verdict v;
        try {
            v = check();
        } catch (const std::exception& e) {
            v.require(false, std::string("exception: ") + e.what());
        }
        if (!v.pass) ++failed;
        std::printf("%s  %-24s %s%s%s\n", v.pass ? "PASS" : "FAIL", name, v.detail.c_str(),
                    v.pass ? "" : " | first failure: ", v.first_failure.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
