#pragma once

#include <string>
#include <vector>

namespace oestylo::cli {

// Exit codes: 0 ok, 1 analysis error, 2 usage error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitAnalysisError = 1;
inline constexpr int kExitUsage = 2;

// args[0] is the program name.
int dispatch(const std::vector<std::string>& args);

}  // namespace oestylo::cli
