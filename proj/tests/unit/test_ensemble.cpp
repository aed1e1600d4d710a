#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ponder/ensemble.hpp"
#include "ponder/random.hpp"

using namespace ponder;
using namespace ponder::ensemble;

namespace {
const double c = codata.speed_of_light;
const PotentialParams pot{30 * units::meV, 0.2 * c, 206 * units::nm};
}  // namespace

TEST_CASE("sampling moments and determinism") {
  const EnsembleSpec spec{100000, 42, {-9 * units::eV, 0.5 * units::eV}};
  const auto a = sample_ensemble(spec, pot, 1);
  const auto b = sample_ensemble(spec, pot, 3);
  CHECK(a.energy_offset == b.energy_offset);
  for (std::size_t i = 0; i < a.initial.size(); i += 97) {
    CHECK(a.initial[i].z0 == b.initial[i].z0);
    CHECK(a.initial[i].delta_v0 == b.initial[i].delta_v0);
  }
  const double n = static_cast<double>(spec.n_particles);
  const double mean = std::accumulate(a.energy_offset.begin(), a.energy_offset.end(), 0.0) / n;
  double var = 0.0;
  for (double e : a.energy_offset) var += (e - mean) * (e - mean);
  const double sigma = std::sqrt(var / (n - 1));
  const double sigma_ref = sigma_from_fwhm(spec.energy.fwhm);
  CHECK(std::abs(mean - spec.energy.mean) < 5 * sigma_ref / std::sqrt(n));
  CHECK(std::abs(sigma * 2.3548200450309493 / spec.energy.fwhm - 1) < 0.03);
  double zmin = 1, zmax = -1, zmean = 0;
  for (const auto& ic : a.initial) {
    zmin = std::min(zmin, ic.z0);
    zmax = std::max(zmax, ic.z0);
    zmean += ic.z0;
  }
  CHECK(zmin >= -0.5 * pot.spatial_period);
  CHECK(zmax < 0.5 * pot.spatial_period);
  CHECK(std::abs(zmean / n) < 5 * pot.spatial_period / std::sqrt(12 * n));
}

TEST_CASE("degenerate energy distribution") {
  const auto s = sample_ensemble({50, 1, {-2 * units::eV, 0.0}}, pot);
  for (double e : s.energy_offset) CHECK(e == -2 * units::eV);
}

TEST_CASE("bound fraction curve") {
  const EnsembleSpec spec{20000, 7, {-9 * units::eV, 0.5 * units::eV}};
  std::vector<double> grid;
  for (int i = 0; i <= 60; ++i) grid.push_back(i * units::meV);
  const auto curve = bound_fraction_curve(spec, pot, grid);
  CHECK(curve.y.front() == 0.0);
  for (std::size_t i = 1; i < curve.y.size(); ++i) CHECK(curve.y[i] >= curve.y[i - 1]);
  CHECK(curve.y.back() <= 1.0);
  // direct classification of the same sample agrees
  const auto s = sample_ensemble(spec, pot);
  std::size_t bound = 0;
  for (const auto& ic : s.initial) {
    if (classical::classify(classical::kappa(ic, pot)) == classical::TrajectoryClass::Bound) ++bound;
  }
  CHECK(curve.y[30] == doctest::Approx(static_cast<double>(bound) / spec.n_particles).epsilon(1e-3));
}

TEST_CASE("single particle period histogram") {
  const EnsembleSpec spec{1, 3, {-9 * units::eV, 0.5 * units::eV}};
  const double tl = classical::linearized_period(pot);
  const auto ax = Axis::uniform("period", "s", 0, 3 * tl, 300);
  const auto d = period_distribution(spec, pot, ax);
  const auto s = sample_ensemble(spec, pot);
  const double T = classical::period(s.initial[0], pot);
  const auto b = *ax.locate(T);
  const auto dens = d.density();
  CHECK(dens[b] * (ax.edges[b + 1] - ax.edges[b]) == doctest::Approx(1.0));
  CHECK(d.all.in_range() == 1);
}

TEST_CASE("spectral evolution normalization and bounds") {
  const EnsembleSpec spec{5000, 9, {-9 * units::eV, 0.5 * units::eV}};
  const double tl = classical::linearized_period(pot);
  std::vector<double> times;
  for (int i = 0; i < 40; ++i) times.push_back(i * 0.1 * tl);
  const auto ax = Axis::uniform("energy offset", "J", -20 * units::eV, 20 * units::eV, 400);
  const auto g1 = spectral_evolution(spec, pot, times, Observable::Energy, ax, 1);
  const auto g4 = spectral_evolution(spec, pot, times, Observable::Energy, ax, 4);
  CHECK(g1.density == g4.density);
  for (std::size_t s = 0; s < times.size(); ++s) CHECK(std::abs(g1.column_sum(s) - 1.0) < 1e-12);

  // t = 0 column mean reproduces the drawn offsets
  double m0 = 0.0;
  for (std::size_t o = 0; o < ax.bins(); ++o) m0 += g1.at(0, o) * ax.center(o);
  CHECK(m0 == doctest::Approx(-9 * units::eV).epsilon(0.01));

  // every sampled energy stays inside its particle's analytic bounds
  const auto sample = sample_ensemble(spec, pot);
  for (std::size_t i = 0; i < sample.initial.size(); i += 10) {
    const auto& ic = sample.initial[i];
    const auto tr = classical::build_trajectory(ic, pot);
    const auto eb = classical::energy_bounds(ic, pot);
    for (double t : times) {
      const double e = classical::energy_offset(tr.velocity(t), pot.group_velocity);
      CHECK(e >= eb.min - 1e-9 * std::abs(eb.min));
      CHECK(e <= eb.max + 1e-9 * std::abs(eb.max));
    }
  }

  const auto pax = Axis::uniform("position", "m", -0.5 * pot.spatial_period, 1.5 * pot.spatial_period, 80);
  const auto gp = spectral_evolution(spec, pot, times, Observable::Position, pax);
  for (std::size_t s = 0; s < times.size(); ++s) {
    CHECK(std::abs(gp.column_sum(s) - 1.0) < 1e-12);
    CHECK(gp.outside[s] == 0);
  }
}

TEST_CASE("scatter kinematics") {
  const double m = codata.electron_mass;
  const ScatterGeometry geom{pi / 6};
  // sin(alpha) v = v_g makes the electron synchronous
  const double v = 2 * pot.group_velocity;
  CHECK(std::abs(scatter_delta_v(0.5 * m * v * v, geom, pot.group_velocity, m)) < 1e-6);
  const double e0 = 0.5 * m * (0.2 * c) * (0.2 * c);
  const double t1 = scatter_delay(10e-6, e0, geom, m), t2 = scatter_delay(20e-6, e0, geom, m);
  CHECK(t2 == doctest::Approx(2 * t1).epsilon(1e-15));
  CHECK(t1 == doctest::Approx(10e-6 / (std::cos(pi / 6) * 0.2 * c)).epsilon(1e-12));

  const EnsembleSpec spec{2000, 5, {e0, 2 * units::eV}};
  const PotentialParams p7{30 * units::meV, 0.1001 * c, 206 * units::nm};
  const auto g = nonparallel_scatter(spec, geom, p7, {0.0, 50e-6, 100e-6},
                                     Axis::uniform("dp", "kg m/s", -2e5 * m, 2e5 * m, 200), 2);
  for (std::size_t s = 0; s < 3; ++s) CHECK(std::abs(g.column_sum(s) - 1.0) < 1e-12);
  // at zero depth dp = m dv0
  const auto smp = sample_scatter(spec, geom, p7);
  const auto dp0 = scatter_momenta(smp, geom, 0.0);
  for (std::size_t i = 0; i < dp0.size(); i += 50) {
    CHECK(dp0[i] == doctest::Approx(m * scatter_delta_v(smp.kinetic_energy[i], geom, p7.group_velocity, m)).epsilon(1e-9));
  }
}
