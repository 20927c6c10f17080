// Command-line front end. Exit codes: 0 success, 1 a law, theorem or replay
// check failed, 2 usage or input error.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nft::cli {

inline constexpr int kOk = 0;
inline constexpr int kViolation = 1;
inline constexpr int kUsage = 2;

/// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nft::cli
