#pragma once

// Monte-Carlo ensembles of classical trajectories and their aggregate
// observables: bound fraction, period distribution, spectral evolution
// and scattering on a potential crossed at an angle.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ponder/beatwave.hpp"
#include "ponder/classical.hpp"
#include "ponder/grid.hpp"

namespace ponder::ensemble {

struct GaussianEnergy {
  double mean = 0.0;  // [J]
  double fwhm = 0.0;  // [J]
};

struct EnsembleSpec {
  std::size_t n_particles = 1;
  std::uint64_t seed = 0;
  GaussianEnergy energy;  // lab-frame kinetic-energy offset from the synchronous electron
};

struct Sample {
  std::vector<classical::InitialCondition> initial;
  std::vector<double> energy_offset;  // drawn offsets dE0 [J]
  std::uint64_t resampled = 0;        // tail draws rejected by the velocity mapping
  double max_drift_ratio = 0.0;       // max |dv0| / |v_g|
};

/// z0 uniform over one period, dE0 gaussian; reproducible per (seed, index).
Sample sample_ensemble(const EnsembleSpec& spec, const PotentialParams& pot, unsigned workers = 0);

struct Curve {
  std::vector<double> x;
  std::vector<double> y;
};

/// Fraction of the ensemble with A_crit < A for each A in `amplitudes`
/// (ascending). Only v_g and lambda of `pot` are used.
Curve bound_fraction_curve(const EnsembleSpec& spec, const PotentialParams& pot,
                           const std::vector<double>& amplitudes, unsigned workers = 0);

struct PeriodDistribution {
  Histogram all;
  Histogram bound;
  Histogram unbound;
  std::uint64_t separatrix = 0;  // excluded draws
  std::uint64_t total = 0;

  explicit PeriodDistribution(const Axis& axis) : all(axis), bound(axis), unbound(axis) {}
  /// Normalized density of the whole in-range population.
  std::vector<double> density() const { return all.density(); }
  /// Bound / unbound parts on the same normalization, so they add up to density().
  std::vector<double> bound_density() const { return bound.density(all.in_range()); }
  std::vector<double> unbound_density() const { return unbound.density(all.in_range()); }
};

PeriodDistribution period_distribution(const EnsembleSpec& spec, const PotentialParams& pot, const Axis& bins,
                                       unsigned workers = 0);

enum class Observable { Energy, Position };

/// Position spectra are shown wrapped into [-lambda/2, 3 lambda/2).
double display_position(double q, double spatial_period);

/// Per-time densities of dE(t) or q(t). Column s is sampled at times[s].
SpectralDensityGrid spectral_evolution(const EnsembleSpec& spec, const PotentialParams& pot,
                                       const std::vector<double>& times, Observable observable,
                                       const Axis& observable_axis, unsigned workers = 0);

struct ScatterGeometry {
  double alpha = 0.0;  // angle between the electron velocity and the potential front [rad]
};

/// Parallel velocity offset sin(alpha) sqrt(2 E0 / m) - v_g.
double scatter_delta_v(double kinetic_energy, const ScatterGeometry& geom, double v_g, double mass);

/// Time spent inside a potential layer of depth d: (d / cos alpha) sqrt(m / 2 E0).
double scatter_delay(double depth, double kinetic_energy, const ScatterGeometry& geom, double mass);

struct ScatterSample {
  std::vector<classical::AnalyticTrajectory> trajectories;
  std::vector<double> kinetic_energy;
  std::uint64_t resampled = 0;
};

/// `spec.energy` is the total kinetic energy E0 distribution here.
ScatterSample sample_scatter(const EnsembleSpec& spec, const ScatterGeometry& geom, const PotentialParams& pot,
                             unsigned workers = 0);

/// dp = p_par - m v_g = m qdot of every particle after crossing depth d.
std::vector<double> scatter_momenta(const ScatterSample& sample, const ScatterGeometry& geom, double depth,
                                    unsigned workers = 0);

/// Densities of dp over a sweep of depths.
SpectralDensityGrid nonparallel_scatter(const EnsembleSpec& spec, const ScatterGeometry& geom,
                                        const PotentialParams& pot, const std::vector<double>& depths,
                                        const Axis& momentum_axis, unsigned workers = 0);

}  // namespace ponder::ensemble
