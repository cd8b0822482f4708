#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "seplam/driver.hpp"

namespace seplam::io {

/// Matrix Market (coordinate or array; real, integer or complex; general,
/// symmetric, hermitian or skew-symmetric) or CSV rows of `a+bi` entries.
/// Throws parse_error with the offending line, including for non-square input.
CMatrix read_matrix(const std::filesystem::path& path);
CMatrix parse_matrix(std::istream& in);

/// Parses one CSV entry: `3`, `-2.5e-3`, `1+2i`, `-i`, `4.5j`.
Complex parse_complex(const std::string& token);

/// Dense array-format complex general Matrix Market, 17 significant digits.
void write_matrix_market(std::ostream& out, const CMatrix& m);
void write_matrix_market(const std::filesystem::path& path, const CMatrix& m);

/// Result object with the stable key set; `config` is echoed verbatim.
nlohmann::json result_json(const SepResult& r, Variant variant, double wall_time_seconds,
                           const nlohmann::json& config);

/// certificate.csv, pseudospectra.csv (grid x grid) and trace.csv in `dir`.
void emit_plot_data(const std::filesystem::path& dir, const CMatrix& a, const CMatrix& b, const SepResult& r,
                    int grid = 257);

/// 17 significant digits; reads back to the same double.
std::string format_double(double v);

}  // namespace seplam::io
