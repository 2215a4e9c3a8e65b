#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mmsplit::cli {

/// Runs one command line (args exclude the program name). Exit codes: 0 when
/// every requested property holds, 1 when one is violated, 2 on usage,
/// parse or budget errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "lo:hi:step" to the values lo, lo + step, ... not exceeding hi.
std::vector<double> parse_grid(const std::string& spec);

}  // namespace mmsplit::cli
