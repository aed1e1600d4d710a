#pragma once

// Scenario files. JSON objects whose dimensional keys carry their unit as a
// suffix (`amplitude_meV`, `spatial_period_nm`, `group_velocity_c`); every
// value is converted to SI on read and unread keys are rejected.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ponder/beatwave.hpp"
#include "ponder/classical.hpp"
#include "ponder/ensemble.hpp"
#include "ponder/grid.hpp"
#include "ponder/qm_bloch.hpp"
#include "ponder/qm_parabolic.hpp"
#include "ponder/tracer.hpp"

namespace ponder::cli {

enum class Dimension { Energy, Length, Time, Velocity, Angle, ElectricField, Momentum };

/// Accepted suffixes and their SI factors, e.g. {"meV", 1.602e-22}.
const std::vector<std::pair<std::string, double>>& unit_suffixes(Dimension d);

/// One JSON object being read. Remembers the keys it handed out so that
/// finish() can reject everything else.
class Section {
 public:
  Section(const nlohmann::json& object, std::string path);

  /// `base` with exactly one unit suffix of dimension d, converted to SI.
  double quantity(std::string_view base, Dimension d);
  std::optional<double> maybe_quantity(std::string_view base, Dimension d);
  bool has_quantity(std::string_view base, Dimension d) const;

  double number(std::string_view key);
  std::optional<double> maybe_number(std::string_view key);
  std::uint64_t integer(std::string_view key);
  std::optional<std::uint64_t> maybe_integer(std::string_view key);
  std::string text(std::string_view key);
  std::optional<std::string> maybe_text(std::string_view key);
  std::optional<bool> maybe_flag(std::string_view key);

  Section child(std::string_view key);
  std::optional<Section> maybe_child(std::string_view key);
  std::vector<Section> children(std::string_view key);

  /// Either a list of values or {"start", "stop", "count"} (count >= 1, inclusive ends).
  std::vector<double> sweep(std::string_view base, Dimension d);
  /// {"min", "max", "bins"} under `base` with a unit suffix.
  Axis axis(std::string_view base, Dimension d, std::string name);

  /// Full path of the suffixed key actually present for `base` (or of `base`).
  std::string quantity_path(std::string_view base, Dimension d) const;

  bool has(std::string_view key) const;
  /// Throws ConfigError naming the first key nobody read.
  void finish() const;
  std::string key_path(std::string_view key) const;

 private:
  const nlohmann::json& at(std::string_view key);
  std::optional<std::string> find_quantity_key(std::string_view base, Dimension d, double* factor) const;

  const nlohmann::json* object_;
  std::string path_;
  std::set<std::string, std::less<>> used_;
};

enum class ScenarioKind {
  Trajectory,
  Periods,
  BoundFraction,
  Spectral,
  Scatter,
  Lho,
  Bloch,
  PulsedInelastic,
  PulsedElastic,
};

ScenarioKind scenario_from_string(const std::string& name);
std::string to_string(ScenarioKind k);

struct TrajectorySettings {
  std::vector<classical::InitialCondition> initial;
  std::vector<double> times;
};

struct PeriodsSettings {
  ensemble::EnsembleSpec ensemble;
  Axis period_axis;
};

struct BoundFractionSettings {
  ensemble::EnsembleSpec ensemble;
  std::vector<double> amplitudes;
};

struct SpectralSettings {
  ensemble::EnsembleSpec ensemble;
  std::vector<double> times;
  ensemble::Observable observable = ensemble::Observable::Energy;
  Axis observable_axis;
};

struct ScatterSettings {
  ensemble::EnsembleSpec ensemble;
  ensemble::ScatterGeometry geometry;
  std::vector<double> depths;
  Axis momentum_axis;
};

struct LhoSettings {
  qm::WavepacketSpec packet;
  std::size_t n_max = 64;
  std::vector<double> times;
  Axis energy_axis;
};

struct BlochSettings {
  double energy_mean = 0.0;
  double energy_fwhm = 0.0;
  std::size_t plane_waves = 0;
  double span_fwhm = 2.0;
  qm::WavepacketOptions options;
  std::vector<double> times;
  Axis energy_axis;
};

struct TracerSettings {
  tracer::TracerScenario scenario;
};

using Settings = std::variant<TrajectorySettings, PeriodsSettings, BoundFractionSettings, SpectralSettings,
                              ScatterSettings, LhoSettings, BlochSettings, TracerSettings>;

struct ScenarioCase {
  std::string name;
  nlohmann::json resolved;  // the case's config after merging overrides
  std::uint64_t seed = 0;
  PotentialParams potential;
  Settings settings;
};

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::Trajectory;
  std::string description;
  std::optional<std::filesystem::path> output;
  std::vector<ScenarioCase> cases;
  std::string sha256;  // of the canonical serialization of the source
  nlohmann::json source;
};

/// Validates everything; nothing is computed. Errors are ConfigError with the key path.
ScenarioConfig parse_config(const nlohmann::json& source);

/// Reads and parses a file; unreadable or malformed files raise ConfigError.
ScenarioConfig load_config(const std::filesystem::path& path);

}  // namespace ponder::cli
