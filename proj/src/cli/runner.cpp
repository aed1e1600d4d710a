#include "ponder/cli/runner.hpp"

#include <chrono>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include "ponder/cli/io.hpp"
#include "ponder/errors.hpp"
#include "ponder/parallel.hpp"

#ifndef PONDER_VERSION
#define PONDER_VERSION "unknown"
#endif

namespace ponder::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json potential_json(const PotentialParams& p) {
  return {{"amplitude_J", p.amplitude}, {"group_velocity_m_per_s", p.group_velocity}, {"spatial_period_m", p.spatial_period}};
}

struct CaseContext {
  const ScenarioConfig& cfg;
  const ScenarioCase& c;
  const fs::path& dir;
  unsigned workers;
  RunReport& report;

  json sidecar() const {
    return {{"scenario", to_string(cfg.kind)},
            {"case", c.name},
            {"seed", c.seed},
            {"code_version", PONDER_VERSION},
            {"potential", potential_json(c.potential)},
            {"config", c.resolved}};
  }
  fs::path stem() const { return dir / c.name; }
  void keep(const std::vector<fs::path>& paths) {
    for (const auto& p : paths) report.files.push_back(p.filename());
  }
  void warn(const std::string& w) { report.warnings.push_back(c.name + ": " + w); }
};

void drift_guard(CaseContext& ctx, const json& metadata) {
  if (!metadata.contains("max_drift_ratio")) return;
  const double r = metadata["max_drift_ratio"].get<double>();
  if (r > beatwave::default_drift_warning_ratio) {
    std::ostringstream msg;
    msg << "|dv0|/|v_g| reaches " << r << " (above " << beatwave::default_drift_warning_ratio
        << "); the moving-potential picture is stretched";
    ctx.warn(msg.str());
  }
}

void run_trajectory(CaseContext& ctx, const TrajectorySettings& s) {
  const auto& pot = ctx.c.potential;
  Table t;
  t.columns.push_back("t_s");
  t.values.push_back(s.times);
  json info = json::array();
  for (std::size_t i = 0; i < s.initial.size(); ++i) {
    const auto traj = classical::build_trajectory(s.initial[i], pot);
    std::vector<double> q, qd, de;
    for (double time : s.times) {
      q.push_back(traj.position(time));
      qd.push_back(traj.velocity(time));
      de.push_back(classical::energy_offset(qd.back(), pot.group_velocity));
    }
    const std::string n = std::to_string(i);
    t.columns.insert(t.columns.end(), {"q_m_" + n, "qdot_m_per_s_" + n, "energy_offset_J_" + n});
    t.values.push_back(std::move(q));
    t.values.push_back(std::move(qd));
    t.values.push_back(std::move(de));
    json entry = {{"index", i},
                  {"z0_m", s.initial[i].z0},
                  {"delta_v0_m_per_s", s.initial[i].delta_v0},
                  {"kappa", traj.kappa()},
                  {"class", classical::to_string(traj.trajectory_class())}};
    try {
      entry["period_s"] = classical::period(s.initial[i], pot);
    } catch (const InfinitePeriodError&) {
      entry["period_s"] = nullptr;
    }
    info.push_back(entry);
  }
  auto side = ctx.sidecar();
  side["trajectories"] = info;
  ctx.keep(write_table(t, ctx.stem(), side));
}

void run_periods(CaseContext& ctx, const PeriodsSettings& s) {
  const auto d = ensemble::period_distribution(s.ensemble, ctx.c.potential, s.period_axis, ctx.workers);
  Table t;
  const auto& e = s.period_axis.edges;
  t.columns = {"period_lo_s", "period_hi_s", "density_all_per_s", "density_bound_per_s", "density_unbound_per_s"};
  t.values = {std::vector<double>(e.begin(), e.end() - 1), std::vector<double>(e.begin() + 1, e.end()), d.density(),
              d.bound_density(), d.unbound_density()};
  auto side = ctx.sidecar();
  side["linearized_period_s"] = ctx.c.potential.amplitude > 0.0 ? classical::linearized_period(ctx.c.potential) : 0.0;
  side["separatrix_excluded"] = d.separatrix;
  side["total"] = d.total;
  side["outside_axis"] = d.all.outside;
  side["normalization"] = "density_all integrates to 1 over the in-range samples; bound + unbound = all";
  ctx.keep(write_table(t, ctx.stem(), side));
}

void run_bound_fraction(CaseContext& ctx, const BoundFractionSettings& s) {
  const auto curve = ensemble::bound_fraction_curve(s.ensemble, ctx.c.potential, s.amplitudes, ctx.workers);
  const auto here = ensemble::bound_fraction_curve(s.ensemble, ctx.c.potential, {ctx.c.potential.amplitude}, ctx.workers);
  Table t;
  t.columns = {"amplitude_J", "bound_fraction"};
  t.values = {curve.x, curve.y};
  auto side = ctx.sidecar();
  side["bound_fraction_at_potential_amplitude"] = here.y.front();
  ctx.keep(write_table(t, ctx.stem(), side));
}

void emit(CaseContext& ctx, const SpectralDensityGrid& g) {
  drift_guard(ctx, g.metadata);
  ctx.keep(write_grid(g, ctx.stem(), ctx.sidecar()));
}

void run_tracer(CaseContext& ctx, const TracerSettings& s) {
  const auto g = ctx.cfg.kind == ScenarioKind::PulsedInelastic ? tracer::run_inelastic(s.scenario, ctx.workers)
                                                               : tracer::run_elastic(s.scenario, ctx.workers);
  const auto failures = g.metadata.value("integrator_failures", std::uint64_t{0});
  if (failures > 0) ctx.warn(std::to_string(failures) + " particle traces failed and were left out");
  auto side = ctx.sidecar();
  side["pulses"] = json::array();
  for (const auto& p : s.scenario.pulses) {
    side["pulses"].push_back({{"wavelength_m", p.wavelength},
                              {"field_amplitude_V_per_m", p.field_amplitude},
                              {"waist_m", p.waist},
                              {"direction", p.direction},
                              {"polarization", p.polarization},
                              {"envelope", p.envelope == tracer::Envelope::Gaussian ? "gaussian" : "super-gaussian"}});
  }
  side["reference_speed_m_per_s"] = s.scenario.ensemble.reference_speed;
  ctx.keep(write_grid(g, ctx.stem(), side));
}

void run_case(CaseContext& ctx) {
  const auto& st = ctx.c.settings;
  const auto& pot = ctx.c.potential;
  switch (ctx.cfg.kind) {
    case ScenarioKind::Trajectory: run_trajectory(ctx, std::get<TrajectorySettings>(st)); break;
    case ScenarioKind::Periods: run_periods(ctx, std::get<PeriodsSettings>(st)); break;
    case ScenarioKind::BoundFraction: run_bound_fraction(ctx, std::get<BoundFractionSettings>(st)); break;
    case ScenarioKind::Spectral: {
      const auto& s = std::get<SpectralSettings>(st);
      emit(ctx, ensemble::spectral_evolution(s.ensemble, pot, s.times, s.observable, s.observable_axis, ctx.workers));
      break;
    }
    case ScenarioKind::Scatter: {
      const auto& s = std::get<ScatterSettings>(st);
      emit(ctx, ensemble::nonparallel_scatter(s.ensemble, s.geometry, pot, s.depths, s.momentum_axis, ctx.workers));
      break;
    }
    case ScenarioKind::Lho: {
      const auto& s = std::get<LhoSettings>(st);
      const auto basis = qm::lho_basis(pot, s.n_max);
      const auto coeffs = qm::decompose(basis, s.packet);
      emit(ctx, qm::evolve_momentum_density(basis, coeffs, s.times, s.energy_axis, pot.group_velocity, ctx.workers));
      break;
    }
    case ScenarioKind::Bloch: {
      const auto& s = std::get<BlochSettings>(st);
      const auto weights =
          qm::gaussian_energy_weights(s.energy_mean, s.energy_fwhm, pot.group_velocity, s.plane_waves, s.span_fwhm);
      emit(ctx, qm::wavepacket_evolution(weights, pot, s.times, s.energy_axis, s.options, ctx.workers));
      break;
    }
    case ScenarioKind::PulsedInelastic:
    case ScenarioKind::PulsedElastic: run_tracer(ctx, std::get<TracerSettings>(st)); break;
  }
}

bool looks_like_run(const fs::path& dir) { return fs::is_directory(dir) && fs::exists(dir / "manifest.json"); }

}  // namespace

fs::path resolve_output_dir(const ScenarioConfig& cfg, const fs::path& config_path, const fs::path& override_dir) {
  fs::path out;
  if (!override_dir.empty()) out = override_dir;
  else if (cfg.output) out = *cfg.output;
  else out = config_path.stem().empty() ? fs::path(to_string(cfg.kind)) : config_path.stem();
  if (out.is_relative()) {
    if (const char* root = std::getenv("PONDER_OUTPUT_ROOT"); root && *root) out = fs::path(root) / out;
  }
  return out;
}

RunReport run(const ScenarioConfig& cfg, const RunOptions& options) {
  using clock = std::chrono::steady_clock;
  const auto started = clock::now();
  const fs::path target = options.output_dir;
  if (target.empty()) throw IOError("no output directory");
  if (fs::exists(target) && !looks_like_run(target) && !(fs::is_directory(target) && fs::is_empty(target))) {
    throw IOError(target.string() + " exists and is not a previous run (no manifest.json); refusing to replace it");
  }
  const fs::path parent = target.has_parent_path() ? target.parent_path() : fs::path(".");
  std::error_code ec;
  fs::create_directories(parent, ec);
  if (ec) throw IOError("cannot create " + parent.string() + ": " + ec.message());
  const fs::path staging = parent / ("." + target.filename().string() + ".staging-" + std::to_string(::getpid()));
  fs::remove_all(staging, ec);
  fs::create_directory(staging, ec);
  if (ec) throw IOError("cannot create " + staging.string() + ": " + ec.message());

  RunReport report;
  try {
    json stages = json::array(), seeds = json::object();
    for (const auto& c : cfg.cases) {
      const auto t0 = clock::now();
      CaseContext ctx{cfg, c, staging, options.workers, report};
      run_case(ctx);
      stages.push_back({{"name", c.name}, {"seconds", std::chrono::duration<double>(clock::now() - t0).count()}});
      seeds[c.name] = c.seed;
    }
    json files = json::array();
    for (const auto& f : report.files) {
      files.push_back({{"path", f.string()}, {"sha256", sha256_file(staging / f)}, {"bytes", fs::file_size(staging / f)}});
    }
    report.manifest = {{"format", "ponder-manifest/1"},
                       {"config", options.config_path},
                       {"config_sha256", cfg.sha256},
                       {"scenario", to_string(cfg.kind)},
                       {"seeds", seeds},
                       {"code_version", PONDER_VERSION},
                       {"workers", resolve_workers(options.workers)},
                       {"wall_clock_s", std::chrono::duration<double>(clock::now() - started).count()},
                       {"stages", stages},
                       {"warnings", report.warnings},
                       {"files", files}};
    write_file_atomic(staging / "manifest.json", report.manifest.dump(2) + "\n");
    if (fs::exists(target)) fs::remove_all(target);
    fs::rename(staging, target);
  } catch (...) {
    fs::remove_all(staging, ec);
    throw;
  }
  return report;
}

}  // namespace ponder::cli
