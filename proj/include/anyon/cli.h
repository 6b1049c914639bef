#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace anyon::cli {

inline constexpr const char* kReportSchema = "anyonctl.report/1";

enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kUsageError = 2 };

// argv[0] is the program name. Reports go to `out` (and to --json <path>),
// diagnostics to `err`.
int run_command(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace anyon::cli
