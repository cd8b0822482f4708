#include "seplam/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "seplam/error.hpp"
#include "seplam/io.hpp"

namespace seplam {

namespace {

std::optional<Complex> parse_point(const std::string& text, const char* flag) {
    if (text.empty()) return std::nullopt;
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw config_error(std::string(flag) + " expects RE,IM");
    try {
        std::size_t used_re = 0, used_im = 0;
        const std::string re = text.substr(0, comma);
        const std::string im = text.substr(comma + 1);
        const double x = std::stod(re, &used_re);
        const double y = std::stod(im, &used_im);
        if (used_re != re.size() || used_im != im.size()) throw std::invalid_argument("trailing");
        return Complex(x, y);
    } catch (const std::exception&) {
        throw config_error(std::string(flag) + " expects RE,IM, got '" + text + "'");
    }
}

nlohmann::json point_json(const std::optional<Complex>& z) {
    return z ? nlohmann::json{{"re", z->real()}, {"im", z->imag()}} : nlohmann::json(nullptr);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Eigenvalue separation sep-lambda of two square matrices"};
    std::string path_a, path_b, variant = "demmel", z_init_text, z0_text, emit_plot, output;
    SolveOptions opts;
    bool rays = false;
    unsigned threads = 0;
    app.add_option("--matrix-a", path_a, "First matrix (Matrix Market or CSV)")->required();
    app.add_option("--matrix-b", path_b, "Second matrix (Matrix Market or CSV)")->required();
    app.add_option("--variant", variant, "demmel or varah")->check(CLI::IsMember({"demmel", "varah"}));
    app.add_option("--tol", opts.rel_term_tol, "Relative termination tolerance");
    app.add_option("--fit-tol", opts.fit_tol, "Certificate interpolation tolerance");
    app.add_option("--z-init", z_init_text, "Optimizer start RE,IM");
    app.add_option("--z0", z0_text, "Certificate search point RE,IM");
    app.add_flag("--rays", rays, "Parameterize the certificate by rays instead of lines");
    app.add_option("--seed", opts.seed, "Seed for search point perturbation");
    app.add_option("--max-restarts", opts.max_restarts, "Restart limit");
    app.add_option("--emit-plot", emit_plot, "Directory for plot data CSV files");
    app.add_option("--output", output, "Write the JSON result here instead of stdout");
    app.add_option("--threads", threads, "Certificate worker threads (default SEPLAM_THREADS or all cores)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }

    try {
        opts.variant = variant == "varah" ? Variant::varah : Variant::demmel;
        opts.z_init = parse_point(z_init_text, "--z-init");
        opts.z0_override = parse_point(z0_text, "--z0");
        opts.use_lines = !rays;
        opts.threads = threads;

        const CMatrix a = io::read_matrix(path_a);
        const CMatrix b = io::read_matrix(path_b);

        const auto start = std::chrono::steady_clock::now();
        const SepResult r = solve(a, b, opts);
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        nlohmann::json config{{"matrix_a", path_a},
                              {"matrix_b", path_b},
                              {"variant", variant},
                              {"tol", opts.rel_term_tol},
                              {"fit_tol", opts.fit_tol},
                              {"z_init", point_json(opts.z_init)},
                              {"z0", point_json(opts.z0_override)},
                              {"rays", rays},
                              {"seed", opts.seed},
                              {"max_restarts", opts.max_restarts},
                              {"emit_plot", emit_plot.empty() ? nlohmann::json(nullptr) : nlohmann::json(emit_plot)},
                              {"output", output.empty() ? nlohmann::json(nullptr) : nlohmann::json(output)},
                              {"threads", threads == 0 ? nlohmann::json(nullptr) : nlohmann::json(threads)}};
        const std::string text = io::result_json(r, opts.variant, wall, config).dump(2) + "\n";

        if (!emit_plot.empty()) io::emit_plot_data(emit_plot, a, b, r);
        if (output.empty()) {
            out << text;
        } else {
            std::ofstream f(output);
            if (!(f << text)) throw std::runtime_error("cannot write " + output);
        }
        for (const std::string& w : r.warnings) err << "warning: " << w << '\n';
        return r.status == SepStatus::budget_exceeded ? 2 : 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace seplam
