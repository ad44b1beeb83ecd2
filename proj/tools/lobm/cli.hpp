#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lobm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitContract = 3;

/// Default output directory when -o is not given.
inline constexpr const char* kOutputDirEnv = "LOBM_OUTPUT_DIR";

/// Runs one command line (args[0] is the program name) and returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lobm::cli
