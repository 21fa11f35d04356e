#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace jepq::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs `jepq <subcommand> [options]`; args exclude the program name.
/// The report goes to `out` (or to --out), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace jepq::cli
