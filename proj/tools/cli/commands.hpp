#pragma once

#include "cli/config.hpp"

#include "gfront/flow.hpp"
#include "gfront/gsolve.hpp"
#include "gfront/homog.hpp"

#include <cstdint>
#include <string>

namespace gfront::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

struct RunOptions {
  std::string out_dir;
  int parallelism = 1;
  std::uint64_t master_seed = 0;
};

/// Commands: simulate, traveltime, homogenize, compare.
const std::vector<std::string>& command_names();
/// Keys accepted by `command`.
KeyTable key_table(const std::string& command);

/// Validates the config and runs; returns the exit code.  Throws ConfigError
/// for usage problems.
int run_command(const std::string& command, const ConfigFile& file, const RunOptions& opts);

// Pieces shared with tests.
VelocityField make_flow(Config& cfg, std::uint64_t seed);
FlowFamily make_flow_family(const Config& cfg);
HomogConfig make_homog_config(const Config& cfg, const RunOptions& opts);

}  // namespace gfront::cli
