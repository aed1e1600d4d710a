#pragma once

// Executes a parsed scenario into an output directory.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "ponder/cli/config.hpp"

namespace ponder::cli {

struct RunOptions {
  std::filesystem::path output_dir;
  unsigned workers = 0;  // 0: all cores
  std::string config_path;
};

struct RunReport {
  std::vector<std::filesystem::path> files;  // relative to the output directory
  std::vector<std::string> warnings;
  nlohmann::json manifest;
};

/// Output directory: `override_dir` if given, else the config's `output`, else
/// the config file's stem. Relative paths resolve against $PONDER_OUTPUT_ROOT
/// when it is set.
std::filesystem::path resolve_output_dir(const ScenarioConfig& cfg, const std::filesystem::path& config_path,
                                         const std::filesystem::path& override_dir = {});

/// Computes every case into a staging directory next to the target and moves
/// it into place with manifest.json once everything succeeded; on failure the
/// staging directory is removed and the target is left untouched.
RunReport run(const ScenarioConfig& cfg, const RunOptions& options);

}  // namespace ponder::cli
