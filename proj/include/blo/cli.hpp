#pragma once

#include <string>
#include <vector>

namespace blo::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitReject = 2;
inline constexpr int kExitCapacity = 3;

struct CommandOutcome {
  int exit_code = kExitOk;
  std::string out;
  std::string err;
};

// Runs one command line, program name excluded, e.g. {"table", "--block-size", "5"}.
// Never throws; failures are reported through exit_code and err.
[[nodiscard]] CommandOutcome run(const std::vector<std::string>& args);

}  // namespace blo::cli
