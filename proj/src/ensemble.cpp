#include "ponder/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "ponder/errors.hpp"
#include "ponder/parallel.hpp"
#include "ponder/random.hpp"

namespace ponder::ensemble {

namespace {

constexpr int max_redraws = 1000;

void check_spec(const EnsembleSpec& spec) {
  if (spec.n_particles == 0) throw DomainError("ensemble needs at least one particle");
  if (!(spec.energy.fwhm >= 0.0) || !std::isfinite(spec.energy.fwhm)) {
    throw DomainError("energy FWHM must be finite and non-negative");
  }
  if (!std::isfinite(spec.energy.mean)) throw DomainError("energy mean must be finite");
}

struct Draw {
  classical::InitialCondition ic;
  double energy;
  int redraws;
};

// One particle's initial condition. Draws whose offset exceeds the
// synchronous kinetic energy are redrawn from the same stream.
Draw draw_particle(const EnsembleSpec& spec, const PotentialParams& pot, std::size_t index) {
  auto gen = particle_stream(spec.seed, index);
  std::uniform_real_distribution<double> uz(-0.5 * pot.spatial_period, 0.5 * pot.spatial_period);
  std::normal_distribution<double> ne(0.0, 1.0);
  const double z0 = uz(gen);
  const double sigma = sigma_from_fwhm(spec.energy.fwhm);
  const double mass = codata.electron_mass;
  for (int r = 0; r <= max_redraws; ++r) {
    const double de = spec.energy.mean + sigma * ne(gen);
    if (pot.group_velocity * pot.group_velocity + 2.0 * de / mass < 0.0) continue;
    return {{z0, classical::delta_v_from_energy_offset(de, pot.group_velocity)}, de, r};
  }
  throw DomainError("energy distribution lies beyond the synchronous kinetic energy");
}

std::uint64_t count_redraws(const std::vector<int>& r) {
  std::uint64_t n = 0;
  for (int v : r) n += static_cast<std::uint64_t>(v);
  return n;
}

}  // namespace

Sample sample_ensemble(const EnsembleSpec& spec, const PotentialParams& pot, unsigned workers) {
  check_spec(spec);
  validate(pot);
  const std::size_t n = spec.n_particles;
  Sample s;
  s.initial.resize(n);
  s.energy_offset.resize(n);
  std::vector<int> redraws(n, 0);
  parallel_for(n, workers, [&](std::size_t i, unsigned) {
    const auto d = draw_particle(spec, pot, i);
    s.initial[i] = d.ic;
    s.energy_offset[i] = d.energy;
    redraws[i] = d.redraws;
  });
  s.resampled = count_redraws(redraws);
  for (const auto& ic : s.initial) s.max_drift_ratio = std::max(s.max_drift_ratio, beatwave::drift_ratio(ic.delta_v0, pot));
  return s;
}

Curve bound_fraction_curve(const EnsembleSpec& spec, const PotentialParams& pot, const std::vector<double>& amplitudes,
                           unsigned workers) {
  if (!std::is_sorted(amplitudes.begin(), amplitudes.end())) throw DomainError("amplitude grid must be ascending");
  const auto sample = sample_ensemble(spec, pot, workers);
  std::vector<double> a_crit(sample.initial.size());
  const double half = 0.5 * pot.spatial_period;
  for (std::size_t i = 0; i < a_crit.size(); ++i) {
    const auto& ic = sample.initial[i];
    // z0 = -lambda/2 sits on the hilltop: never bound
    a_crit[i] = std::abs(classical::wrap_position(ic.z0, pot.spatial_period)) == half
                    ? std::numeric_limits<double>::infinity()
                    : classical::critical_amplitude(ic.z0, sample.energy_offset[i], pot);
  }
  std::sort(a_crit.begin(), a_crit.end());
  Curve c;
  c.x = amplitudes;
  c.y.reserve(amplitudes.size());
  const double n = static_cast<double>(a_crit.size());
  for (double a : amplitudes) {
    // bound iff A > A_crit
    const auto bound = std::lower_bound(a_crit.begin(), a_crit.end(), a) - a_crit.begin();
    c.y.push_back(static_cast<double>(bound) / n);
  }
  return c;
}

PeriodDistribution period_distribution(const EnsembleSpec& spec, const PotentialParams& pot, const Axis& bins,
                                       unsigned workers) {
  bins.validate();
  const auto sample = sample_ensemble(spec, pot, workers);
  const std::size_t n = sample.initial.size();
  std::vector<double> period(n, 0.0);
  std::vector<signed char> kind(n, 0);  // 1 bound, -1 unbound, 0 separatrix
  parallel_for(n, workers, [&](std::size_t i, unsigned) {
    const auto& ic = sample.initial[i];
    const double k = classical::kappa(ic, pot);
    const auto cls = classical::classify(k);
    if (cls == classical::TrajectoryClass::Separatrix) return;
    kind[i] = cls == classical::TrajectoryClass::Bound ? 1 : -1;
    period[i] = classical::period(ic, pot);
  });
  PeriodDistribution d(bins);
  d.total = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (kind[i] == 0) {
      ++d.separatrix;
      continue;
    }
    d.all.add(period[i]);
    (kind[i] > 0 ? d.bound : d.unbound).add(period[i]);
  }
  return d;
}

double display_position(double q, double spatial_period) {
  const double w = q - 2.0 * spatial_period * std::floor((q + 0.5 * spatial_period) / (2.0 * spatial_period));
  return w;
}

SpectralDensityGrid spectral_evolution(const EnsembleSpec& spec, const PotentialParams& pot,
                                       const std::vector<double>& times, Observable observable,
                                       const Axis& observable_axis, unsigned workers) {
  if (times.empty()) throw DomainError("spectral_evolution needs at least one time sample");
  observable_axis.validate();
  const auto sample = sample_ensemble(spec, pot, workers);
  const std::size_t n = sample.initial.size(), nt = times.size();
  const unsigned slots = worker_slots(n, workers);
  std::vector<CountGrid> partial(slots, CountGrid(nt, observable_axis.bins()));
  parallel_for(n, slots, [&](std::size_t i, unsigned w) {
    const auto tr = classical::build_trajectory(sample.initial[i], pot);
    for (std::size_t s = 0; s < nt; ++s) {
      double x;
      if (observable == Observable::Energy) {
        x = classical::energy_offset(tr.velocity(times[s]), pot.group_velocity);
      } else {
        x = display_position(tr.position(times[s]), pot.spatial_period);
      }
      partial[w].add(s, observable_axis.locate(x));
    }
  });
  for (unsigned w = 1; w < slots; ++w) partial[0].merge(partial[w]);
  auto grid = SpectralDensityGrid::from_counts(Axis::from_centers("time", "s", times), observable_axis, partial[0]);
  grid.metadata["resampled_draws"] = sample.resampled;
  grid.metadata["max_drift_ratio"] = sample.max_drift_ratio;
  grid.metadata["particles"] = n;
  return grid;
}

double scatter_delta_v(double kinetic_energy, const ScatterGeometry& geom, double v_g, double mass) {
  return std::sin(geom.alpha) * std::sqrt(2.0 * kinetic_energy / mass) - v_g;
}

double scatter_delay(double depth, double kinetic_energy, const ScatterGeometry& geom, double mass) {
  return depth / std::cos(geom.alpha) * std::sqrt(mass / (2.0 * kinetic_energy));
}

ScatterSample sample_scatter(const EnsembleSpec& spec, const ScatterGeometry& geom, const PotentialParams& pot,
                             unsigned workers) {
  check_spec(spec);
  validate(pot);
  if (!(geom.alpha > 0.0 && geom.alpha < 0.5 * pi)) throw DomainError("scatter angle must lie in (0, pi/2)");
  if (!(spec.energy.mean > 0.0)) throw DomainError("scatter kinetic energy must be positive");
  const std::size_t n = spec.n_particles;
  const double mass = codata.electron_mass;
  const double sigma = sigma_from_fwhm(spec.energy.fwhm);
  ScatterSample s;
  s.trajectories.resize(n);
  s.kinetic_energy.resize(n);
  std::vector<int> redraws(n, 0);
  parallel_for(n, workers, [&](std::size_t i, unsigned) {
    auto gen = particle_stream(spec.seed, i);
    std::uniform_real_distribution<double> uz(-0.5 * pot.spatial_period, 0.5 * pot.spatial_period);
    std::normal_distribution<double> ne(0.0, 1.0);
    const double z0 = uz(gen);
    double e = 0.0;
    int r = 0;
    for (;; ++r) {
      if (r > max_redraws) throw DomainError("scatter kinetic-energy distribution is not positive");
      e = spec.energy.mean + sigma * ne(gen);
      if (e > 0.0) break;
    }
    redraws[i] = r;
    s.kinetic_energy[i] = e;
    s.trajectories[i] = classical::build_trajectory({z0, scatter_delta_v(e, geom, pot.group_velocity, mass)}, pot);
  });
  s.resampled = count_redraws(redraws);
  return s;
}

std::vector<double> scatter_momenta(const ScatterSample& sample, const ScatterGeometry& geom, double depth,
                                    unsigned workers) {
  if (!(depth >= 0.0)) throw DomainError("scatter depth must be non-negative");
  const double mass = codata.electron_mass;
  std::vector<double> dp(sample.trajectories.size());
  parallel_for(dp.size(), workers, [&](std::size_t i, unsigned) {
    const double t = scatter_delay(depth, sample.kinetic_energy[i], geom, mass);
    dp[i] = mass * sample.trajectories[i].velocity(t);
  });
  return dp;
}

SpectralDensityGrid nonparallel_scatter(const EnsembleSpec& spec, const ScatterGeometry& geom,
                                        const PotentialParams& pot, const std::vector<double>& depths,
                                        const Axis& momentum_axis, unsigned workers) {
  if (depths.empty()) throw DomainError("nonparallel_scatter needs at least one depth");
  momentum_axis.validate();
  const auto sample = sample_scatter(spec, geom, pot, workers);
  CountGrid counts(depths.size(), momentum_axis.bins());
  for (std::size_t s = 0; s < depths.size(); ++s) {
    for (double dp : scatter_momenta(sample, geom, depths[s], workers)) counts.add(s, momentum_axis.locate(dp));
  }
  auto grid = SpectralDensityGrid::from_counts(Axis::from_centers("depth", "m", depths), momentum_axis, counts);
  grid.metadata["resampled_draws"] = sample.resampled;
  grid.metadata["particles"] = spec.n_particles;
  return grid;
}

}  // namespace ponder::ensemble
