#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dynabt {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int unsat = 1;
inline constexpr int exhausted = 2;
inline constexpr int usage = 64;
inline constexpr int data = 65;
} // namespace exit_code

/// The dynabt command line. `args` excludes the program name. Reports go to
/// `out`, diagnostics to `err`; the return value is the process exit code.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace dynabt
