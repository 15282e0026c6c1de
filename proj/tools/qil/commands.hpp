#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qil::cli {

constexpr int kSchemaVersion = 1;

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailure = 1;
constexpr int kExitUsage = 2;

/// Runs the qil command line. `args` excludes the program name.
/// Reads documents from `in` when no input path is given (or the path is "-").
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace qil::cli
