#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace orbergman {

inline constexpr const char* kToolName = "orb_bergman";
inline constexpr const char* kToolVersion = "1.0.0";

/// Exit codes: 0 success, 1 a reported verdict failed, 2 invalid input.
enum ExitCode : int { kExitOk = 0, kExitVerdict = 1, kExitInvalid = 2 };

/// Runs the command line (args excludes the program name). The report goes to
/// `out` and, with --out DIR, to files under DIR; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace orbergman
