#pragma once

#include <stdexcept>
#include <string>

namespace seplam {

/// Raised when a dense decomposition fails to converge.
class computation_error : public std::runtime_error {
public:
    computation_error(const std::string& what, long dimension)
        : std::runtime_error(what + " (dimension " + std::to_string(dimension) + ")"),
          dimension_(dimension) {}

    long dimension() const noexcept { return dimension_; }

private:
    long dimension_;
};

/// Invalid solver configuration, including an unusable search point.
class config_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed matrix input. `line()` is 1-based, 0 when not tied to a line.
class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& what, long line)
        : std::runtime_error(line > 0 ? what + " (line " + std::to_string(line) + ")" : what),
          line_(line) {}

    long line() const noexcept { return line_; }

private:
    long line_;
};

}  // namespace seplam
