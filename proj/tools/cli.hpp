#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace levyexp::cli {

/// Exit codes.
enum Exit : int { ok = 0, validation_failure = 1, numerical_failure = 2, usage_error = 3 };

/// Runs one command line. Results go to `out`; errors are written to `err` as a
/// single JSON object {"error", "class", "message"}.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Same, with argv[0] omitted.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses MIN:MAX:N[:log]; throws UsageError.
std::vector<double> parse_grid(const std::string& spec);

}  // namespace levyexp::cli
