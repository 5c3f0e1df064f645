#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace psd::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;
inline constexpr int kUsage = 2;
inline constexpr int kPrecision = 3;

/// Runs one command line (without the program name). Records go to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace psd::cli
