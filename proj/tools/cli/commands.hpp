#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "config.hpp"
#include "table.hpp"

namespace hillspec::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNumerical = 1;
inline constexpr int kExitUsage = 2;

struct CommandResult {
  Table table;
  int exit_code = kExitOk;
  std::vector<std::string> warnings;
};

CommandResult cmd_bands(const RunConfig& config);
CommandResult cmd_density(const RunConfig& config);
CommandResult cmd_edge(const RunConfig& config);
CommandResult cmd_vcheck(const RunConfig& config);
/// Reference integrator next to the production trace (debugging aid).
CommandResult cmd_oracle(const RunConfig& config);

/// Full command line: parse, dispatch, write. Returns the exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hillspec::cli
