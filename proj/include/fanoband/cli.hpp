#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fanoband::cli {

enum ExitCode : int { kOk = 0, kValidationError = 1, kIoError = 2 };

/// Runs one subcommand. `args` excludes the program name, e.g.
/// {"select", "--cube", "scene.raw", ...}. Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fanoband::cli
