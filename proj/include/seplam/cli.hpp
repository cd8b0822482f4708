#pragma once

#include <iosfwd>

namespace seplam {

/// Exit status: 0 on CERTIFIED_GLOBAL or TOL_STALLED, 2 on BUDGET_EXCEEDED,
/// 1 on bad input or any other failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace seplam
