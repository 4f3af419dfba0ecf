#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mpts::cli {

/// Environment variable naming the directory for `run` output when --out is
/// not given.
inline constexpr const char* kOutputDirEnv = "MPTS_OUTPUT_DIR";

/// Entry point shared by the `mpts` binary and the tests. `args` excludes
/// the program name. Returns the process exit status.
///
///   run        --scenario S [--policy P] [--T n] [--runs n] [--seed n]
///              [--threads n] [--out file.csv] [--log-selections file]
///   lowerbound S [--at T]
///   scenarios  [--json]
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mpts::cli
