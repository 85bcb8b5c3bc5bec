#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace widthlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitInvariantFailure = 2;
inline constexpr int kExitUsage = 64;

// args excludes the program name. Reports go to out, diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace widthlab::cli
