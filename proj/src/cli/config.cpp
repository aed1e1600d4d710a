#include "ponder/cli/config.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ponder/cli/io.hpp"
#include "ponder/errors.hpp"

namespace ponder::cli {

using nlohmann::json;

const std::vector<std::pair<std::string, double>>& unit_suffixes(Dimension d) {
  static const std::vector<std::pair<std::string, double>> energy{
      {"J", 1.0}, {"eV", units::eV}, {"meV", units::meV}, {"keV", units::keV}};
  static const std::vector<std::pair<std::string, double>> length{
      {"m", 1.0}, {"mm", 1e-3}, {"um", units::um}, {"nm", units::nm}};
  static const std::vector<std::pair<std::string, double>> time{
      {"s", 1.0}, {"ns", 1e-9}, {"ps", units::ps}, {"fs", units::fs}};
  static const std::vector<std::pair<std::string, double>> velocity{
      {"m_per_s", 1.0}, {"c", codata.speed_of_light}};
  static const std::vector<std::pair<std::string, double>> angle{{"rad", 1.0}, {"deg", units::deg}};
  static const std::vector<std::pair<std::string, double>> field{{"V_per_m", 1.0}, {"GV_per_m", 1e9}};
  static const std::vector<std::pair<std::string, double>> momentum{
      {"kg_m_per_s", 1.0},
      {"eV_per_c", units::eV / codata.speed_of_light},
      {"keV_per_c", units::keV / codata.speed_of_light}};
  switch (d) {
    case Dimension::Energy: return energy;
    case Dimension::Length: return length;
    case Dimension::Time: return time;
    case Dimension::Velocity: return velocity;
    case Dimension::Angle: return angle;
    case Dimension::ElectricField: return field;
    case Dimension::Momentum: return momentum;
  }
  return energy;
}

Section::Section(const json& object, std::string path) : object_(&object), path_(std::move(path)) {
  if (!object.is_object()) throw ConfigError(path_, "expected an object");
}

std::string Section::key_path(std::string_view key) const {
  return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
}

bool Section::has(std::string_view key) const { return object_->contains(key); }

const json& Section::at(std::string_view key) {
  const auto it = object_->find(key);
  if (it == object_->end()) throw ConfigError(key_path(key), "missing required key");
  used_.emplace(key);
  return *it;
}

std::optional<std::string> Section::find_quantity_key(std::string_view base, Dimension d, double* factor) const {
  std::optional<std::string> found;
  for (const auto& [suffix, f] : unit_suffixes(d)) {
    std::string key = std::string(base) + "_" + suffix;
    if (!object_->contains(key)) continue;
    if (found) throw ConfigError(key_path(base), "given more than once with different units");
    found = key;
    if (factor) *factor = f;
  }
  if (!found && object_->contains(base)) throw ConfigError(key_path(base), "needs a unit suffix");
  return found;
}

std::string Section::quantity_path(std::string_view base, Dimension d) const {
  const auto key = find_quantity_key(base, d, nullptr);
  return key_path(key ? std::string_view(*key) : base);
}

bool Section::has_quantity(std::string_view base, Dimension d) const {
  return find_quantity_key(base, d, nullptr).has_value();
}

std::optional<double> Section::maybe_quantity(std::string_view base, Dimension d) {
  double factor = 1.0;
  const auto key = find_quantity_key(base, d, &factor);
  if (!key) return std::nullopt;
  const json& v = at(*key);
  if (!v.is_number()) throw ConfigError(key_path(*key), "expected a number");
  const double x = v.get<double>() * factor;
  if (!std::isfinite(x)) throw ConfigError(key_path(*key), "must be finite");
  return x;
}

double Section::quantity(std::string_view base, Dimension d) {
  if (auto x = maybe_quantity(base, d)) return *x;
  std::string options;
  for (const auto& [suffix, f] : unit_suffixes(d)) options += (options.empty() ? "" : ", ") + std::string(base) + "_" + suffix;
  throw ConfigError(key_path(base), "missing required key (one of " + options + ")");
}

std::optional<double> Section::maybe_number(std::string_view key) {
  if (!has(key)) return std::nullopt;
  const json& v = at(key);
  if (!v.is_number() || !std::isfinite(v.get<double>())) throw ConfigError(key_path(key), "expected a finite number");
  return v.get<double>();
}

double Section::number(std::string_view key) {
  at(key);
  return *maybe_number(key);
}

std::optional<std::uint64_t> Section::maybe_integer(std::string_view key) {
  if (!has(key)) return std::nullopt;
  const json& v = at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    throw ConfigError(key_path(key), "expected a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

std::uint64_t Section::integer(std::string_view key) {
  at(key);
  return *maybe_integer(key);
}

std::optional<std::string> Section::maybe_text(std::string_view key) {
  if (!has(key)) return std::nullopt;
  const json& v = at(key);
  if (!v.is_string()) throw ConfigError(key_path(key), "expected a string");
  return v.get<std::string>();
}

std::string Section::text(std::string_view key) {
  at(key);
  return *maybe_text(key);
}

std::optional<bool> Section::maybe_flag(std::string_view key) {
  if (!has(key)) return std::nullopt;
  const json& v = at(key);
  if (!v.is_boolean()) throw ConfigError(key_path(key), "expected true or false");
  return v.get<bool>();
}

Section Section::child(std::string_view key) { return Section(at(key), key_path(key)); }

std::optional<Section> Section::maybe_child(std::string_view key) {
  if (!has(key)) return std::nullopt;
  return child(key);
}

std::vector<Section> Section::children(std::string_view key) {
  const json& v = at(key);
  if (!v.is_array()) throw ConfigError(key_path(key), "expected a list of objects");
  std::vector<Section> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.emplace_back(v[i], key_path(key) + "[" + std::to_string(i) + "]");
  return out;
}

std::vector<double> Section::sweep(std::string_view base, Dimension d) {
  double factor = 1.0;
  const auto key = find_quantity_key(base, d, &factor);
  if (!key) return {quantity(base, d)};  // reports the missing key
  const json& v = at(*key);
  const std::string where = key_path(*key);
  std::vector<double> out;
  if (v.is_array()) {
    if (v.empty()) throw ConfigError(where, "list must not be empty");
    for (const auto& x : v) {
      if (!x.is_number()) throw ConfigError(where, "list entries must be numbers");
      out.push_back(x.get<double>() * factor);
    }
  } else if (v.is_object()) {
    Section s(v, where);
    const double start = s.number("start"), stop = s.number("stop");
    const auto count = s.integer("count");
    s.finish();
    if (count == 0) throw ConfigError(where + ".count", "must be at least 1");
    if (count > 100000) throw ConfigError(where + ".count", "must not exceed 100000");
    if (count == 1 && start != stop) throw ConfigError(where + ".count", "a single point needs start == stop");
    for (std::uint64_t i = 0; i < count; ++i) {
      const double x = count == 1 ? start : start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
      out.push_back(x * factor);
    }
  } else {
    throw ConfigError(where, "expected a list or {start, stop, count}");
  }
  for (double x : out) {
    if (!std::isfinite(x)) throw ConfigError(where, "values must be finite");
  }
  return out;
}

Axis Section::axis(std::string_view base, Dimension d, std::string name) {
  double factor = 1.0;
  const auto key = find_quantity_key(base, d, &factor);
  if (!key) quantity(base, d);  // reports the missing key
  const std::string where = key_path(*key);
  Section s(at(*key), where);
  const double lo = s.number("min"), hi = s.number("max");
  const auto bins = s.integer("bins");
  s.finish();
  if (!(hi > lo)) throw ConfigError(where + ".max", "must exceed min");
  if (bins == 0 || bins > 1000000) throw ConfigError(where + ".bins", "must lie in [1, 1000000]");
  // axes are stored in SI; the unit named in the file is only an input convenience
  const std::string si = d == Dimension::Energy     ? "J"
                         : d == Dimension::Length   ? "m"
                         : d == Dimension::Time     ? "s"
                         : d == Dimension::Angle    ? "rad"
                         : d == Dimension::Momentum ? "kg m/s"
                                                    : "SI";
  return Axis::uniform(std::move(name), si, lo * factor, hi * factor, static_cast<std::size_t>(bins));
}

void Section::finish() const {
  for (const auto& [key, value] : object_->items()) {
    if (!used_.contains(key)) throw ConfigError(key_path(key), "unknown key");
  }
}

ScenarioKind scenario_from_string(const std::string& name) {
  static const std::vector<std::pair<std::string, ScenarioKind>> names{
      {"trajectory", ScenarioKind::Trajectory},
      {"periods", ScenarioKind::Periods},
      {"bound-fraction", ScenarioKind::BoundFraction},
      {"spectral", ScenarioKind::Spectral},
      {"scatter", ScenarioKind::Scatter},
      {"lho", ScenarioKind::Lho},
      {"bloch", ScenarioKind::Bloch},
      {"pulsed-inelastic", ScenarioKind::PulsedInelastic},
      {"pulsed-elastic", ScenarioKind::PulsedElastic},
  };
  for (const auto& [n, k] : names) {
    if (n == name) return k;
  }
  throw ConfigError("scenario", "unknown scenario '" + name + "'");
}

std::string to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::Trajectory: return "trajectory";
    case ScenarioKind::Periods: return "periods";
    case ScenarioKind::BoundFraction: return "bound-fraction";
    case ScenarioKind::Spectral: return "spectral";
    case ScenarioKind::Scatter: return "scatter";
    case ScenarioKind::Lho: return "lho";
    case ScenarioKind::Bloch: return "bloch";
    case ScenarioKind::PulsedInelastic: return "pulsed-inelastic";
    case ScenarioKind::PulsedElastic: return "pulsed-elastic";
  }
  return "unknown";
}

namespace {

PotentialParams read_potential(Section& root) {
  if (root.has("potential") && root.has("fields")) throw ConfigError("fields", "give either potential or fields, not both");
  PotentialParams pot;
  if (auto s = root.maybe_child("potential")) {
    pot.amplitude = s->quantity("amplitude", Dimension::Energy);
    pot.group_velocity = s->quantity("group_velocity", Dimension::Velocity);
    pot.spatial_period = s->quantity("spatial_period", Dimension::Length);
    s->finish();
  } else if (auto f = root.maybe_child("fields")) {
    BeatWaveInputs in;
    in.field_amplitude = f->quantity("field_amplitude", Dimension::ElectricField);
    const double l1 = f->quantity("wavelength1", Dimension::Length);
    const double l2 = f->quantity("wavelength2", Dimension::Length);
    f->finish();
    if (!(l1 > 0.0 && l2 > 0.0)) throw ConfigError(f->quantity_path("wavelength1", Dimension::Length), "wavelengths must be positive");
    in.omega1 = beatwave::angular_frequency(std::min(l1, l2));
    in.omega2 = beatwave::angular_frequency(std::max(l1, l2));
    try {
      pot = beatwave::potential_from_fields(in);
    } catch (const DomainError& e) {
      throw ConfigError("fields", e.what());
    }
  } else {
    throw ConfigError("potential", "missing required key (or give fields)");
  }
  if (!(pot.amplitude >= 0.0)) throw ConfigError("potential.amplitude", "must be non-negative");
  if (!(pot.spatial_period > 0.0)) throw ConfigError("potential.spatial_period", "must be positive");
  if (!(std::abs(pot.group_velocity) < codata.speed_of_light)) {
    throw ConfigError("potential.group_velocity", "must be below c in magnitude");
  }
  return pot;
}

ensemble::EnsembleSpec read_ensemble(Section& root, std::uint64_t seed, const char* mean_key = "energy_mean",
                                     const char* fwhm_key = "energy_fwhm") {
  auto s = root.child("ensemble");
  ensemble::EnsembleSpec spec;
  spec.seed = seed;
  spec.n_particles = s.integer("particles");
  if (spec.n_particles == 0) throw ConfigError(s.key_path("particles"), "must be at least 1");
  if (s.has_quantity("reference_speed", Dimension::Velocity)) {
    const double v = s.quantity("reference_speed", Dimension::Velocity);
    if (!(v > 0.0 && v < codata.speed_of_light)) throw ConfigError(s.quantity_path("reference_speed", Dimension::Velocity), "must lie in (0, c)");
    spec.energy.mean = 0.5 * codata.electron_mass * v * v;
  } else {
    spec.energy.mean = s.quantity(mean_key, Dimension::Energy);
  }
  spec.energy.fwhm = s.quantity(fwhm_key, Dimension::Energy);
  if (!(spec.energy.fwhm >= 0.0)) throw ConfigError(s.quantity_path(fwhm_key, Dimension::Energy), "must be non-negative");
  s.finish();
  return spec;
}

std::vector<double> read_times(Section& root, const char* key = "times") {
  auto t = root.sweep(key, Dimension::Time);
  for (double x : t) {
    if (!(x >= 0.0)) throw ConfigError(root.quantity_path(key, Dimension::Time), "times must be non-negative");
  }
  if (!std::is_sorted(t.begin(), t.end())) throw ConfigError(root.quantity_path(key, Dimension::Time), "times must be ascending");
  return t;
}

TrajectorySettings read_trajectory(Section& root, const PotentialParams& pot) {
  TrajectorySettings out;
  for (auto& s : root.children("trajectories")) {
    classical::InitialCondition ic;
    ic.z0 = s.quantity("z0", Dimension::Length);
    const bool by_energy = s.has_quantity("energy_offset", Dimension::Energy);
    const bool by_velocity = s.has_quantity("delta_v", Dimension::Velocity);
    if (by_energy == by_velocity) throw ConfigError(s.quantity_path("energy_offset", Dimension::Energy), "give exactly one of energy_offset or delta_v");
    if (by_energy) {
      const double de = s.quantity("energy_offset", Dimension::Energy);
      if (pot.group_velocity * pot.group_velocity + 2.0 * de / codata.electron_mass < 0.0) {
        throw ConfigError(s.quantity_path("energy_offset", Dimension::Energy), "exceeds the synchronous kinetic energy");
      }
      ic.delta_v0 = classical::delta_v_from_energy_offset(de, pot.group_velocity);
    } else {
      ic.delta_v0 = s.quantity("delta_v", Dimension::Velocity);
    }
    s.finish();
    out.initial.push_back(ic);
  }
  if (out.initial.empty()) throw ConfigError("trajectories", "needs at least one trajectory");
  out.times = read_times(root);
  return out;
}

std::optional<ensemble::Observable> observable_from(const std::string& name) {
  if (name == "energy") return ensemble::Observable::Energy;
  if (name == "position") return ensemble::Observable::Position;
  return std::nullopt;
}

LhoSettings read_lho(Section& root, const PotentialParams& pot) {
  LhoSettings out;
  auto w = root.child("wavepacket");
  const std::string type = w.text("type");
  const double de = w.quantity("energy_offset", Dimension::Energy);
  const double mu_p = qm::momentum_for_energy_offset(de, pot.group_velocity);
  if (type == "gaussian") {
    const double fwhm = w.quantity("position_fwhm", Dimension::Length);
    if (!(fwhm > 0.0)) throw ConfigError(w.quantity_path("position_fwhm", Dimension::Length), "must be positive");
    out.packet = qm::GaussianPacket{mu_p, qm::gaussian_sigma_p(fwhm)};
  } else if (type == "super-gaussian") {
    const auto order = w.integer("order");
    if (order == 0 || order > 64) throw ConfigError(w.key_path("order"), "must lie in [1, 64]");
    out.packet = qm::SuperGaussianPacket{static_cast<unsigned>(order), mu_p};
  } else {
    throw ConfigError(w.key_path("type"), "expected gaussian or super-gaussian");
  }
  out.n_max = w.maybe_integer("basis_size").value_or(64);
  if (out.n_max == 0) throw ConfigError(w.key_path("basis_size"), "must be at least 1");
  w.finish();
  out.times = read_times(root);
  out.energy_axis = root.axis("energy_axis", Dimension::Energy, "energy offset");
  return out;
}

BlochSettings read_bloch(Section& root) {
  BlochSettings out;
  auto w = root.child("wavepacket");
  out.energy_mean = w.quantity("energy_mean", Dimension::Energy);
  out.energy_fwhm = w.quantity("energy_fwhm", Dimension::Energy);
  if (!(out.energy_fwhm > 0.0)) throw ConfigError(w.quantity_path("energy_fwhm", Dimension::Energy), "must be positive");
  out.plane_waves = w.integer("plane_waves");
  if (out.plane_waves == 0) throw ConfigError(w.key_path("plane_waves"), "must be at least 1");
  out.span_fwhm = w.maybe_number("span_fwhm").value_or(2.0);
  if (!(out.span_fwhm > 0.0)) throw ConfigError(w.key_path("span_fwhm"), "must be positive");
  out.options.blur_fwhm = w.maybe_quantity("blur_fwhm", Dimension::Energy).value_or(out.energy_fwhm);
  if (!(out.options.blur_fwhm >= 0.0)) throw ConfigError(w.quantity_path("blur_fwhm", Dimension::Energy), "must be non-negative");
  w.finish();
  out.times = read_times(root);
  out.energy_axis = root.axis("energy_axis", Dimension::Energy, "energy offset");
  return out;
}

tracer::TracerEnsemble read_tracer_ensemble(Section& root, std::uint64_t seed) {
  auto s = root.child("ensemble");
  tracer::TracerEnsemble e;
  e.seed = seed;
  e.n_particles = s.integer("particles");
  if (e.n_particles == 0) throw ConfigError(s.key_path("particles"), "must be at least 1");
  e.sigma_xy = s.maybe_quantity("sigma_xy", Dimension::Length).value_or(e.sigma_xy);
  e.sigma_z = s.maybe_quantity("sigma_z", Dimension::Length).value_or(e.sigma_z);
  if (!(e.sigma_xy >= 0.0 && e.sigma_z >= 0.0)) throw ConfigError(s.quantity_path("sigma_xy", Dimension::Length), "widths must be non-negative");
  if (auto v = s.maybe_quantity("speed", Dimension::Velocity)) e.reference_speed = *v;
  e.energy_mean = s.maybe_quantity("energy_mean", Dimension::Energy).value_or(0.0);
  e.energy_fwhm = s.maybe_quantity("energy_fwhm", Dimension::Energy).value_or(0.0);
  if (!(e.energy_fwhm >= 0.0)) throw ConfigError(s.quantity_path("energy_fwhm", Dimension::Energy), "must be non-negative");
  s.finish();
  return e;
}

void read_push(Section& root, tracer::TracerScenario& sc) {
  auto s = root.maybe_child("integrator");
  sc.push.rtol = 1e-9;
  if (!s) return;
  if (auto m = s->maybe_text("method")) {
    if (*m == "dormand-prince") sc.push.integrator = tracer::Integrator::DormandPrince;
    else if (*m == "rk4") sc.push.integrator = tracer::Integrator::RK4;
    else throw ConfigError(s->key_path("method"), "expected dormand-prince or rk4");
  }
  if (auto r = s->maybe_number("rtol")) {
    if (!(*r > 0.0 && *r < 1e-3)) throw ConfigError(s->key_path("rtol"), "must lie in (0, 1e-3)");
    sc.push.rtol = *r;
  }
  if (auto h = s->maybe_quantity("step", Dimension::Time)) {
    if (!(*h > 0.0)) throw ConfigError(s->quantity_path("step", Dimension::Time), "must be positive");
    sc.push.rk4_step = *h;
  }
  if (sc.push.integrator == tracer::Integrator::RK4 && sc.push.rk4_step == 0.0) {
    throw ConfigError(s->quantity_path("step", Dimension::Time), "rk4 needs a fixed step");
  }
  if (auto c = s->maybe_number("envelope_cutoff")) {
    if (!(*c > 0.0 && *c < 1.0)) throw ConfigError(s->key_path("envelope_cutoff"), "must lie in (0, 1)");
    sc.envelope_cutoff = *c;
  }
  sc.evaluation_budget = s->maybe_integer("evaluation_budget").value_or(0);
  s->finish();
}

std::vector<double> read_durations(Section& root) {
  auto t = root.sweep("t_fwhm", Dimension::Time);
  for (double x : t) {
    if (!(x >= 0.0)) throw ConfigError(root.quantity_path("t_fwhm", Dimension::Time), "durations must be non-negative");
  }
  auto sorted = t;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ConfigError(root.quantity_path("t_fwhm", Dimension::Time), "durations must be distinct");
  }
  return t;
}

TracerSettings read_inelastic(Section& root, std::uint64_t seed, PotentialParams& pot) {
  TracerSettings out;
  auto& sc = out.scenario;
  auto p = root.child("pulses");
  const double l1 = p.quantity("wavelength1", Dimension::Length);
  const double l2 = p.quantity("wavelength2", Dimension::Length);
  const double amplitude = p.quantity("amplitude", Dimension::Energy);
  const double waist = p.quantity("waist", Dimension::Length);
  const std::string env = p.text("envelope");
  const double incidence = p.maybe_quantity("incidence_angle", Dimension::Angle).value_or(90.0 * units::deg);
  p.finish();
  if (std::abs(incidence - 90.0 * units::deg) > 1e-12) {
    throw ConfigError(p.quantity_path("incidence_angle", Dimension::Angle), "only collinear counterpropagation (90 deg) is implemented");
  }
  tracer::Envelope envelope;
  if (env == "gaussian") {
    envelope = tracer::Envelope::Gaussian;
    sc.geometry = tracer::Geometry::InelasticGaussian;
  } else if (env == "super-gaussian") {
    envelope = tracer::Envelope::SuperGaussian;
    sc.geometry = tracer::Geometry::InelasticSuperGaussian;
  } else {
    throw ConfigError(p.key_path("envelope"), "expected gaussian or super-gaussian");
  }
  if (!(waist > 0.0)) throw ConfigError(p.quantity_path("waist", Dimension::Length), "must be positive");
  if (!(amplitude > 0.0)) throw ConfigError(p.quantity_path("amplitude", Dimension::Energy), "must be positive");
  try {
    sc.pulses = tracer::inelastic_pulses(l1, l2, amplitude, waist, envelope);
  } catch (const DomainError& e) {
    throw ConfigError(p.quantity_path("wavelength1", Dimension::Length), e.what());
  }
  sc.ensemble = read_tracer_ensemble(root, seed);
  const double vg = tracer::beat_velocity(sc.pulses);
  if (sc.ensemble.reference_speed == 0.0) sc.ensemble.reference_speed = vg;
  pot = {amplitude, vg, 1.0 / (1.0 / l1 + 1.0 / l2)};
  sc.t_fwhm = read_durations(root);
  sc.observable_axis = root.axis("energy_axis", Dimension::Energy, "energy offset");
  read_push(root, sc);
  return out;
}

TracerSettings read_elastic(Section& root, std::uint64_t seed, PotentialParams& pot) {
  TracerSettings out;
  auto& sc = out.scenario;
  sc.geometry = tracer::Geometry::ElasticGaussian;
  auto p = root.child("pulses");
  const double lambda = p.quantity("wavelength", Dimension::Length);
  const double e0 = p.quantity("field_amplitude", Dimension::ElectricField);
  const double waist = p.quantity("waist", Dimension::Length);
  const double alpha = p.quantity("alpha", Dimension::Angle);
  p.finish();
  if (!(lambda > 0.0)) throw ConfigError(p.quantity_path("wavelength", Dimension::Length), "must be positive");
  if (!(e0 > 0.0)) throw ConfigError(p.quantity_path("field_amplitude", Dimension::ElectricField), "must be positive");
  if (!(waist > 0.0)) throw ConfigError(p.quantity_path("waist", Dimension::Length), "must be positive");
  if (!(std::abs(alpha) < 45.0 * units::deg)) throw ConfigError(p.quantity_path("alpha", Dimension::Angle), "must lie within +-45 deg");
  sc.pulses = tracer::elastic_pulses(lambda, e0, waist, alpha);
  sc.ensemble = read_tracer_ensemble(root, seed);
  if (!(sc.ensemble.reference_speed > 0.0 && sc.ensemble.reference_speed < codata.speed_of_light)) {
    throw ConfigError("ensemble.speed", "missing required key (electron speed in (0, c))");
  }
  BeatWaveInputs in;
  in.field_amplitude = e0;
  in.omega1 = in.omega2 = beatwave::angular_frequency(lambda);
  pot = beatwave::potential_from_fields(in, codata, true);
  sc.t_fwhm = read_durations(root);
  sc.observable_axis = root.axis("angle_axis", Dimension::Angle, "deflection angle");
  read_push(root, sc);
  return out;
}

ScenarioCase parse_case(ScenarioKind kind, const json& resolved, std::string name) {
  Section root(resolved, "");
  root.text("scenario");
  root.maybe_text("description");
  root.maybe_text("output");
  ScenarioCase c;
  c.name = std::move(name);
  c.resolved = resolved;
  c.seed = root.maybe_integer("seed").value_or(1);
  const bool pulsed = kind == ScenarioKind::PulsedInelastic || kind == ScenarioKind::PulsedElastic;
  if (!pulsed) c.potential = read_potential(root);

  switch (kind) {
    case ScenarioKind::Trajectory: c.settings = read_trajectory(root, c.potential); break;
    case ScenarioKind::Periods: {
      PeriodsSettings s;
      s.ensemble = read_ensemble(root, c.seed);
      s.period_axis = root.axis("period_axis", Dimension::Time, "period");
      if (!(s.period_axis.edges.front() >= 0.0)) throw ConfigError("period_axis", "periods start at 0");
      c.settings = s;
      break;
    }
    case ScenarioKind::BoundFraction: {
      BoundFractionSettings s;
      s.ensemble = read_ensemble(root, c.seed);
      s.amplitudes = root.sweep("amplitudes", Dimension::Energy);
      if (!std::is_sorted(s.amplitudes.begin(), s.amplitudes.end()) || s.amplitudes.front() < 0.0) {
        throw ConfigError("amplitudes", "must be non-negative and ascending");
      }
      c.settings = s;
      break;
    }
    case ScenarioKind::Spectral: {
      SpectralSettings s;
      s.ensemble = read_ensemble(root, c.seed);
      s.times = read_times(root);
      const auto obs = observable_from(root.text("observable"));
      if (!obs) throw ConfigError("observable", "expected energy or position");
      s.observable = *obs;
      s.observable_axis = *obs == ensemble::Observable::Energy
                              ? root.axis("observable_axis", Dimension::Energy, "energy offset")
                              : root.axis("observable_axis", Dimension::Length, "position");
      c.settings = s;
      break;
    }
    case ScenarioKind::Scatter: {
      ScatterSettings s;
      s.ensemble = read_ensemble(root, c.seed, "kinetic_energy_mean", "kinetic_energy_fwhm");
      if (!(s.ensemble.energy.mean > 0.0)) throw ConfigError("ensemble.kinetic_energy_mean", "must be positive");
      s.geometry.alpha = root.quantity("alpha", Dimension::Angle);
      if (!(s.geometry.alpha > 0.0 && s.geometry.alpha < 90.0 * units::deg)) {
        throw ConfigError(root.quantity_path("alpha", Dimension::Angle), "must lie in (0, 90) deg");
      }
      s.depths = root.sweep("depths", Dimension::Length);
      for (double d : s.depths) {
        if (!(d >= 0.0)) throw ConfigError("depths", "must be non-negative");
      }
      s.momentum_axis = root.axis("momentum_axis", Dimension::Momentum, "parallel momentum offset");
      c.settings = s;
      break;
    }
    case ScenarioKind::Lho: c.settings = read_lho(root, c.potential); break;
    case ScenarioKind::Bloch: c.settings = read_bloch(root); break;
    case ScenarioKind::PulsedInelastic: c.settings = read_inelastic(root, c.seed, c.potential); break;
    case ScenarioKind::PulsedElastic: c.settings = read_elastic(root, c.seed, c.potential); break;
  }
  root.finish();
  return c;
}

bool valid_case_name(const std::string& n) {
  if (n.empty() || n.size() > 64) return false;
  return std::all_of(n.begin(), n.end(), [](char ch) {
    return (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') || ch == '_' || ch == '-';
  });
}

}  // namespace

ScenarioConfig parse_config(const json& source) {
  if (!source.is_object()) throw ConfigError("", "config must be a JSON object");
  ScenarioConfig cfg;
  cfg.source = source;
  cfg.sha256 = sha256_hex(source.dump());
  if (!source.contains("scenario") || !source["scenario"].is_string()) {
    throw ConfigError("scenario", "missing required key");
  }
  cfg.kind = scenario_from_string(source["scenario"].get<std::string>());
  if (source.contains("description")) {
    if (!source["description"].is_string()) throw ConfigError("description", "expected a string");
    cfg.description = source["description"].get<std::string>();
  }
  if (source.contains("output")) {
    if (!source["output"].is_string() || source["output"].get<std::string>().empty()) {
      throw ConfigError("output", "expected a directory path");
    }
    cfg.output = source["output"].get<std::string>();
  }

  json base = source;
  base.erase("cases");
  if (!source.contains("cases")) {
    cfg.cases.push_back(parse_case(cfg.kind, base, to_string(cfg.kind)));
    return cfg;
  }
  const json& cases = source["cases"];
  if (!cases.is_array() || cases.empty()) throw ConfigError("cases", "expected a non-empty list of objects");
  std::set<std::string> names;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const std::string where = "cases[" + std::to_string(i) + "]";
    if (!cases[i].is_object()) throw ConfigError(where, "expected an object");
    if (!cases[i].contains("name") || !cases[i]["name"].is_string()) throw ConfigError(where + ".name", "missing required key");
    const std::string name = cases[i]["name"].get<std::string>();
    if (!valid_case_name(name)) throw ConfigError(where + ".name", "use letters, digits, '-' and '_' only");
    if (!names.insert(name).second) throw ConfigError(where + ".name", "duplicate case name");
    json patch = cases[i];
    patch.erase("name");
    if (patch.contains("scenario")) throw ConfigError(where + ".scenario", "cases cannot change the scenario");
    json resolved = base;
    resolved.merge_patch(patch);
    try {
      cfg.cases.push_back(parse_case(cfg.kind, resolved, name));
    } catch (const ConfigError& e) {
      throw ConfigError(where + "." + e.key(), std::string(e.what()).substr(e.key().empty() ? 0 : e.key().size() + 2));
    }
  }
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot read config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  json source;
  try {
    source = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw ConfigError("", "malformed JSON in " + path.string() + ": " + e.what());
  }
  return parse_config(source);
}

}  // namespace ponder::cli
