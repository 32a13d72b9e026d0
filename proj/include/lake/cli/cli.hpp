#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "lake/cli/profile.hpp"
#include "lake/common/error.hpp"

namespace lake::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 64;

int exit_code_for(ErrorCode code);

/// Runs one command line (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const EnvLookup& env);

struct CommandRoute {
  std::string_view method;
  std::string_view path;
  /// Subcommand path, e.g. "files upload".
  std::string_view command;
};

/// Which subcommand reaches each gateway route.
const std::vector<CommandRoute>& command_routes();

/// Backslashes become forward slashes so either separator style works.
std::string normalize_local_path(std::string_view path);

}  // namespace lake::cli
