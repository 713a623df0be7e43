// Command-line frontend: subcommands det, torsion, heat, verify with
// machine-readable output.  Exit codes: 0 success, 1 invalid input,
// 2 truncation failure, 3 verification failure.
#pragma once

#include <string>
#include <vector>

namespace mtorus::cli {

// Parse and run; output and diagnostics are appended to the streams.
int run(const std::vector<std::string>& args, std::string& out, std::string& err);

// Entry point used by the binary: writes to stdout/stderr.
int run_main(int argc, char** argv);

}  // namespace mtorus::cli
