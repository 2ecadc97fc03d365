#pragma once

// Subcommands of the lieavg tool. Each reads a configuration file, writes its
// artifacts under an output directory and returns a process exit code.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lieavg/algebra.hpp"
#include "lieavg/config.hpp"
#include "lieavg/harness.hpp"

namespace lieavg::cli {

enum ExitCode : int { kOk = 0, kConfigError = 1, kDiverged = 2, kClaimFailed = 3 };

struct Options {
  std::filesystem::path config;
  std::filesystem::path out = ".";
  std::optional<std::uint64_t> seed;  // overrides [run] seed
};

const std::vector<std::string>& subcommands();

/// Runs one subcommand. Diagnostics go to `err`, summaries to `out`.
int run(const std::string& subcommand, const Options& opts, std::ostream& out, std::ostream& err);

/// [algebra] section: name (so3, heisenberg3, sine_truncated) or file, plus
/// optional N, sine_inertia (identity | laplacian) and inertia (n diagonal
/// entries or n*n row-major entries). Relative files resolve against
/// `base_dir`.
LieAlgebra algebra_from_config(const config::Config& cfg, const std::filesystem::path& base_dir);

/// [sweep] section on top of [algebra].
FastSlowScenario scenario_from_config(const config::Config& cfg,
                                      const std::filesystem::path& base_dir);

}  // namespace lieavg::cli
