#include "seplam/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "seplam/error.hpp"

namespace seplam::io {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool parse_double(std::string_view text, double& out) {
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    if (text.empty()) return false;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc() && ptr == text.data() + text.size();
}

enum class Field { real, integer, complex };
enum class Symmetry { general, symmetric, hermitian, skew };

struct Header {
    bool coordinate = false;
    Field field = Field::real;
    Symmetry symmetry = Symmetry::general;
};

Header parse_header(const std::string& line, long lineno) {
    std::istringstream ss(lower(line));
    std::string banner, object, format, field, symmetry;
    ss >> banner >> object >> format >> field >> symmetry;
    if (object != "matrix") throw parse_error("only 'matrix' objects are supported", lineno);
    Header h;
    if (format == "coordinate") h.coordinate = true;
    else if (format != "array") throw parse_error("unknown format '" + format + "'", lineno);
    if (field == "real" || field == "double") h.field = Field::real;
    else if (field == "integer") h.field = Field::integer;
    else if (field == "complex") h.field = Field::complex;
    else throw parse_error("unsupported field '" + field + "'", lineno);
    if (symmetry == "general") h.symmetry = Symmetry::general;
    else if (symmetry == "symmetric") h.symmetry = Symmetry::symmetric;
    else if (symmetry == "hermitian") h.symmetry = Symmetry::hermitian;
    else if (symmetry == "skew-symmetric") h.symmetry = Symmetry::skew;
    else throw parse_error("unknown symmetry '" + symmetry + "'", lineno);
    if (h.symmetry == Symmetry::hermitian && h.field != Field::complex)
        throw parse_error("hermitian requires a complex field", lineno);
    return h;
}

Complex read_value(std::istringstream& ss, Field field, long lineno) {
    std::string re, im;
    if (!(ss >> re)) throw parse_error("missing value", lineno);
    double x = 0.0, y = 0.0;
    if (!parse_double(re, x)) throw parse_error("bad number '" + re + "'", lineno);
    if (field == Field::integer && x != std::trunc(x)) throw parse_error("non-integer value '" + re + "'", lineno);
    if (field == Field::complex) {
        if (!(ss >> im)) throw parse_error("missing imaginary part", lineno);
        if (!parse_double(im, y)) throw parse_error("bad number '" + im + "'", lineno);
    }
    return {x, y};
}

void place(CMatrix& m, long i, long j, Complex v, Symmetry sym, long lineno) {
    if (sym != Symmetry::general && j > i) throw parse_error("entry above the diagonal in a symmetric file", lineno);
    if (sym == Symmetry::skew && i == j) throw parse_error("diagonal entry in a skew-symmetric file", lineno);
    m(i, j) = v;
    if (i == j) return;
    switch (sym) {
        case Symmetry::general:
            break;
        case Symmetry::symmetric:
            m(j, i) = v;
            break;
        case Symmetry::hermitian:
            m(j, i) = std::conj(v);
            break;
        case Symmetry::skew:
            m(j, i) = -v;
            break;
    }
}

CMatrix parse_matrix_market(std::istream& in, const std::string& banner) {
    long lineno = 1;
    const Header h = parse_header(banner, lineno);
    std::string line;
    auto next_line = [&]() {
        while (std::getline(in, line)) {
            ++lineno;
            const std::string t = trim(line);
            if (t.empty() || t.front() == '%') continue;
            line = t;
            return true;
        }
        return false;
    };

    if (!next_line()) throw parse_error("missing size line", lineno);
    std::istringstream size(line);
    long rows = 0, cols = 0, nnz = 0;
    if (!(size >> rows >> cols) || (h.coordinate && !(size >> nnz)) || rows <= 0 || cols <= 0 || nnz < 0)
        throw parse_error("bad size line", lineno);
    if (rows != cols)
        throw parse_error("matrix must be square, got " + std::to_string(rows) + "x" + std::to_string(cols), lineno);

    CMatrix m = CMatrix::Zero(rows, cols);
    if (h.coordinate) {
        for (long k = 0; k < nnz; ++k) {
            if (!next_line()) throw parse_error("expected " + std::to_string(nnz) + " entries", lineno);
            std::istringstream ss(line);
            long i = 0, j = 0;
            if (!(ss >> i >> j)) throw parse_error("bad entry indices", lineno);
            if (i < 1 || i > rows || j < 1 || j > cols) throw parse_error("index out of range", lineno);
            place(m, i - 1, j - 1, read_value(ss, h.field, lineno), h.symmetry, lineno);
        }
    } else {
        // Column major; symmetric variants store the lower triangle only.
        for (long j = 0; j < cols; ++j) {
            const long first = h.symmetry == Symmetry::general ? 0 : (h.symmetry == Symmetry::skew ? j + 1 : j);
            for (long i = first; i < rows; ++i) {
                if (!next_line()) throw parse_error("too few array entries", lineno);
                std::istringstream ss(line);
                place(m, i, j, read_value(ss, h.field, lineno), h.symmetry, lineno);
            }
        }
    }
    if (next_line()) throw parse_error("unexpected data after the last entry", lineno);
    return m;
}

CMatrix parse_csv(std::istream& in, const std::string& first_line) {
    std::vector<std::vector<Complex>> rows;
    long lineno = 0;
    long first_row_line = 0;
    std::string line = first_line;
    bool have = true;
    while (have) {
        ++lineno;
        const std::string t = trim(line);
        if (!t.empty()) {
            if (rows.empty()) first_row_line = lineno;
            std::vector<Complex> row;
            std::stringstream ss(t);
            std::string cell;
            while (std::getline(ss, cell, ',')) {
                try {
                    row.push_back(parse_complex(cell));
                } catch (const parse_error& e) {
                    throw parse_error(e.what(), lineno);
                }
            }
            if (t.back() == ',') throw parse_error("empty entry", lineno);
            if (!rows.empty() && row.size() != rows.front().size())
                throw parse_error("row has " + std::to_string(row.size()) + " entries, expected " +
                                      std::to_string(rows.front().size()),
                                  lineno);
            rows.push_back(std::move(row));
        }
        have = static_cast<bool>(std::getline(in, line));
    }
    if (rows.empty()) throw parse_error("empty matrix file", 0);
    const long n = static_cast<long>(rows.size());
    if (static_cast<long>(rows.front().size()) != n)
        throw parse_error("matrix must be square, got " + std::to_string(n) + "x" +
                              std::to_string(rows.front().size()),
                          first_row_line);
    CMatrix m(n, n);
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) m(i, j) = rows[i][j];
    return m;
}

}  // namespace

Complex parse_complex(const std::string& token) {
    std::string t = trim(token);
    t.erase(std::remove_if(t.begin(), t.end(), [](unsigned char c) { return std::isspace(c); }), t.end());
    if (t.empty()) throw parse_error("empty entry", 0);
    const bool imaginary = t.back() == 'i' || t.back() == 'j' || t.back() == 'I' || t.back() == 'J';
    if (!imaginary) {
        double x = 0.0;
        if (!parse_double(t, x)) throw parse_error("bad number '" + t + "'", 0);
        return {x, 0.0};
    }
    const std::string body = t.substr(0, t.size() - 1);
    // Split at the last sign that is not part of an exponent.
    std::size_t split = std::string::npos;
    for (std::size_t k = body.size(); k-- > 1;) {
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    const std::string re = split == std::string::npos ? "" : body.substr(0, split);
    std::string im = split == std::string::npos ? body : body.substr(split);
    if (im.empty() || im == "+") im = "1";
    else if (im == "-") im = "-1";
    double x = 0.0, y = 0.0;
    if (!re.empty() && !parse_double(re, x)) throw parse_error("bad number '" + t + "'", 0);
    if (!parse_double(im, y)) throw parse_error("bad number '" + t + "'", 0);
    return {x, y};
}

CMatrix parse_matrix(std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
        const std::string t = trim(line);
        if (t.rfind("%%MatrixMarket", 0) == 0) return parse_matrix_market(in, t);
        if (!t.empty()) return parse_csv(in, line);
    }
    throw parse_error("empty matrix file", 0);
}

CMatrix read_matrix(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    try {
        return parse_matrix(in);
    } catch (const parse_error& e) {
        throw parse_error(path.string() + ": " + e.what(), e.line());
    }
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_matrix_market(std::ostream& out, const CMatrix& m) {
    out << "%%MatrixMarket matrix array complex general\n" << m.rows() << ' ' << m.cols() << '\n';
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            out << format_double(m(i, j).real()) << ' ' << format_double(m(i, j).imag()) << '\n';
}

void write_matrix_market(const std::filesystem::path& path, const CMatrix& m) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    write_matrix_market(out, m);
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

nlohmann::json result_json(const SepResult& r, Variant variant, double wall_time_seconds,
                           const nlohmann::json& config) {
    auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
    nlohmann::json j;
    j["epsilon"] = r.epsilon;
    j["minimizer"] = {{"re", r.minimizer.real()}, {"im", r.minimizer.imag()}};
    j["status"] = std::string(status_name(r.status));
    j["restarts"] = r.restarts;
    j["certificate_evals"] = r.certificate_evals;
    j["objective_evals"] = r.objective_evals;
    j["variant"] = std::string(variant_name(variant));
    j["eps1"] = opt(r.eps1);
    j["eps2"] = opt(r.eps2);
    j["varah_eig_check"] = opt(r.varah_eig_check);
    j["varah_eig_location"] = r.varah_eig_location
                                  ? nlohmann::json{{"re", r.varah_eig_location->real()},
                                                   {"im", r.varah_eig_location->imag()}}
                                  : nlohmann::json(nullptr);
    j["search_point"] = {{"re", r.search_point.real()}, {"im", r.search_point.imag()}};
    j["warnings"] = r.warnings;
    j["wall_time_seconds"] = wall_time_seconds;
    j["config"] = config;
    return j;
}

void emit_plot_data(const std::filesystem::path& dir, const CMatrix& a, const CMatrix& b, const SepResult& r,
                    int grid) {
    std::filesystem::create_directories(dir);
    auto open = [&](const char* name) {
        std::ofstream out(dir / name);
        if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
        return out;
    };
    const auto fd = format_double;

    {
        std::ofstream out = open("certificate.csv");
        out << "theta,value,branch\n";
        for (const CertificateSample& s : r.final_certificate)
            out << fd(s.theta) << ',' << fd(s.value) << ',' << branch_name(s.branch) << '\n';
    }
    {
        double xmin = HUGE_VAL, xmax = -HUGE_VAL, ymin = HUGE_VAL, ymax = -HUGE_VAL;
        for (const CMatrix* m : {&a, &b})
            for (const Complex& l : eigenvalues(*m)) {
                xmin = std::min(xmin, l.real());
                xmax = std::max(xmax, l.real());
                ymin = std::min(ymin, l.imag());
                ymax = std::max(ymax, l.imag());
            }
        const Complex center(0.5 * (xmin + xmax), 0.5 * (ymin + ymax));
        const double hw = 0.5 * std::max(xmax - xmin, ymax - ymin) + std::max(1.0, 2.0 * r.epsilon);
        const double h = 2.0 * hw / (grid - 1);
        std::ofstream out = open("pseudospectra.csv");
        out << "re,im,sigma_a,sigma_b\n";
        for (int j = 0; j < grid; ++j)
            for (int i = 0; i < grid; ++i) {
                const Complex z = center + Complex(-hw + i * h, -hw + j * h);
                out << fd(z.real()) << ',' << fd(z.imag()) << ',' << fd(sigma_min_at(a, z)) << ','
                    << fd(sigma_min_at(b, z)) << '\n';
            }
    }
    {
        std::ofstream out = open("trace.csv");
        out << "round,epsilon,minimizer_re,minimizer_im,search_point_re,search_point_im,outcome,"
               "certificate_evals,restart_re,restart_im\n";
        for (std::size_t k = 0; k < r.trace.size(); ++k) {
            const RoundTrace& t = r.trace[k];
            std::ostringstream head;
            head << k << ',' << fd(t.epsilon) << ',' << fd(t.minimizer.real()) << ',' << fd(t.minimizer.imag())
                 << ',' << fd(t.search_point.real()) << ',' << fd(t.search_point.imag()) << ',' << t.outcome
                 << ',' << t.certificate_evals << ',';
            if (t.restart_points.empty()) out << head.str() << ",\n";
            for (const Complex& p : t.restart_points)
                out << head.str() << fd(p.real()) << ',' << fd(p.imag()) << '\n';
        }
    }
}

}  // namespace seplam::io
