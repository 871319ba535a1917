#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace afm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // validation or grading failure
inline constexpr int kExitUsage = 2;    // bad flags, unreadable input, backend errors

// Runs one invocation. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace afm::cli
