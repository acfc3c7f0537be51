#pragma once

#include <iosfwd>

#include "config.hpp"

namespace gsn::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Full command-line entry point. Never throws; returns the exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Runs an already resolved configuration (cfg.command selects the
/// subcommand). Throws UsageError or runtime errors.
void execute(const RunConfig& cfg, std::ostream& out);

}  // namespace gsn::cli
