#pragma once

// Output files: grid and table CSVs with JSON sidecars, checksums and the
// run manifest. Layouts are described in docs/formats.md.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ponder/grid.hpp"

namespace ponder::cli {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double x);

/// Writes `stem`.csv and `stem`.json; `sidecar` is merged with the grid's
/// axes, normalization note and metadata. Returns both paths.
std::vector<std::filesystem::path> write_grid(const SpectralDensityGrid& grid, const std::filesystem::path& stem,
                                              const nlohmann::json& sidecar);

/// Reads a grid CSV and, when present, its sidecar metadata.
SpectralDensityGrid read_grid(const std::filesystem::path& csv);

struct Table {
  std::vector<std::string> columns;  // names carry their unit, e.g. "t_s"
  std::vector<std::vector<double>> values;  // values[c][row]
};

std::vector<std::filesystem::path> write_table(const Table& table, const std::filesystem::path& stem,
                                               const nlohmann::json& sidecar);
Table read_table(const std::filesystem::path& csv);

/// Writes through a temporary file in the same directory and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

}  // namespace ponder::cli
