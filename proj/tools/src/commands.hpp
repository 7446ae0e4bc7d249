#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "config.hpp"

namespace bosepath::cli {

struct RunRequest {
  std::string command;  // scatter, gp, hartree, simulate, ldp
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
};

struct RunManifest {
  std::string command;
  std::string config_hash;
  std::string version;
  std::uint64_t seed = 0;
  double wall_clock_seconds = 0.0;
  std::map<std::string, std::string> checksums;
};

/// Loads the config, dispatches to the module, writes outputs, the JSON
/// summary and the manifest. Throws ConfigError and module errors.
RunManifest run(const RunRequest& request);

/// Same as run with an already parsed configuration.
RunManifest run(const RunRequest& request, const Config& config);

/// Maps exceptions to exit codes: 2 config errors, 3 non-convergence, 1 other failures.
int run_and_report(const RunRequest& request);

}  // namespace bosepath::cli
