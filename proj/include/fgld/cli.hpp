#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fgld::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsage = 2;

/// Runs the `fgld` command line. `args` excludes the program name. Reports go
/// to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Output of `reproduce NAME`; throws std::out_of_range for unknown names.
std::string reproduce(const std::string& name);

}  // namespace fgld::cli
