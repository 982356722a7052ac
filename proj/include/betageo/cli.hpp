#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace betageo::cli {

inline constexpr int kExitDomain = 1;
inline constexpr int kExitNumerical = 2;
inline constexpr int kExitUsage = 64;

/// Run one command line (without the program name). JSON or CSV goes to
/// `out`, diagnostics to `err`; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// CSV cell formatting: 17 significant digits.
std::string csv_number(double x);

}  // namespace betageo::cli
