#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#include "ponder/classical.hpp"
#include "ponder/errors.hpp"
#include "ponder/qm_bloch.hpp"
#include "ponder/qm_parabolic.hpp"

using namespace ponder;
using namespace ponder::qm;

namespace {
const double c = codata.speed_of_light;
const double two_pi = 2.0 * std::numbers::pi;
const PotentialParams ref_pot{30 * units::meV, 0.2 * c, 206 * units::nm};
const double k0_ref = wavenumber_for_energy_offset(-9 * units::eV, ref_pot.group_velocity);

double recoil_energy(const PotentialParams& pot) {
  const double p = codata.hbar * two_pi / pot.spatial_period;
  return p * p / (2.0 * codata.electron_mass);
}
}  // namespace

TEST_CASE("hamiltonian matrix elements") {
  const PotentialParams pot{30 * units::meV, 0.2 * c, 206 * units::nm};
  BlochProblem p{0.0, pot, -3, 3};
  const auto h = hamiltonian_matrix(p);
  REQUIRE(h.size() == 7);
  CHECK(h.diagonal[3] == doctest::Approx(pot.amplitude / 2));
  for (double off : h.off_diagonal) CHECK(off == -pot.amplitude / 4);

  PotentialParams free = pot;
  free.amplitude = 0.0;
  BlochProblem q{1.3e7, free, -2, 4};
  const auto h0 = hamiltonian_matrix(q);
  for (int j = -2; j <= 4; ++j) {
    const double kj = q.k0 + two_pi * j / free.spatial_period;
    CHECK(h0.diagonal[j + 2] == doctest::Approx(codata.hbar * codata.hbar * kj * kj / (2 * codata.electron_mass)));
  }
  for (double off : h0.off_diagonal) CHECK(off == 0.0);

  CHECK_THROWS_AS(hamiltonian_matrix(BlochProblem{0.0, pot, 0, 3}), DomainError);
}

TEST_CASE("free particle: sorted free energies and a permutation matrix") {
  PotentialParams free = ref_pot;
  free.amplitude = 0.0;
  BlochProblem p{0.3 * two_pi / free.spatial_period, free, -5, 5};
  const auto sol = solve_fixed(p);
  std::vector<double> expected;
  for (int j = -5; j <= 5; ++j) {
    const double kj = p.k0 + two_pi * j / free.spatial_period;
    expected.push_back(codata.hbar * codata.hbar * kj * kj / (2 * codata.electron_mass));
  }
  std::sort(expected.begin(), expected.end());
  for (std::size_t n = 0; n < expected.size(); ++n) {
    CHECK(sol.energies[n] == doctest::Approx(expected[n]).epsilon(1e-14));
    int ones = 0;
    for (int j = -5; j <= 5; ++j) {
      const double v = std::abs(sol.c(n, j));
      CHECK((v == 0.0 || v == 1.0));
      ones += v == 1.0;
    }
    CHECK(ones == 1);
  }
  const auto spec = occupancy(sol, {0.0, 1e-12, 7e-12});
  for (std::size_t t = 0; t < 3; ++t) CHECK(std::abs(spec.at(t, 5)) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("deep well: lowest level spacing approaches the oscillator quantum") {
  const PotentialParams deep{1.0 * units::eV, 0.2 * c, 206 * units::nm};
  REQUIRE(deep.amplitude / recoil_energy(deep) > 1e4);
  // the low-lying states are narrow in j; a fixed truncation checked against its double is enough
  const auto sol = solve_fixed(BlochProblem{0.0, deep, -64, 64});
  const auto wide = solve_fixed(BlochProblem{0.0, deep, -128, 128});
  CHECK(sol.energies[0] == doctest::Approx(wide.energies[0]).epsilon(1e-13));
  CHECK(sol.energies[1] == doctest::Approx(wide.energies[1]).epsilon(1e-13));
  const double hbar_omega = codata.hbar * lho_basis(deep).omega;
  CHECK((sol.energies[1] - sol.energies[0]) == doctest::Approx(hbar_omega).epsilon(0.02));
}

TEST_CASE("eigenpairs at -9 eV in the 30 meV potential") {
  const auto sol = solve(BlochProblem{k0_ref, ref_pot});
  const auto h = hamiltonian_matrix(sol.problem);
  const std::size_t d = sol.dimension();
  double worst_res = 0.0, worst_orth = 0.0, worst_complete = 0.0;
  for (std::size_t n = 0; n < d; ++n) {
    std::vector<double> v(sol.coeffs.begin() + n * d, sol.coeffs.begin() + (n + 1) * d);
    const auto hv = h.apply(v);
    for (std::size_t i = 0; i < d; ++i) worst_res = std::max(worst_res, std::abs(hv[i] - sol.energies[n] * v[i]));
    for (std::size_t m = n; m < d; ++m) {
      double dot = 0.0;
      for (std::size_t i = 0; i < d; ++i) dot += v[i] * sol.coeffs[m * d + i];
      worst_orth = std::max(worst_orth, std::abs(dot - (n == m ? 1.0 : 0.0)));
    }
  }
  for (int j = sol.problem.j_min; j <= sol.problem.j_max; ++j) {
    double s = 0.0;
    for (std::size_t n = 0; n < d; ++n) s += sol.c(n, 0) * sol.c(n, j);
    worst_complete = std::max(worst_complete, std::abs(s - (j == 0 ? 1.0 : 0.0)));
  }
  CHECK(worst_res < 1e-10 * sol.hamiltonian_norm);
  CHECK(worst_orth < 1e-12);
  CHECK(worst_complete < 1e-12);
  CHECK(!sol.retained.empty());
}

TEST_CASE("occupancy invariants") {
  const auto sol = solve(BlochProblem{k0_ref, ref_pot});
  const double t_lin = classical::linearized_period(ref_pot);
  std::vector<double> times;
  for (int i = 0; i <= 40; ++i) times.push_back(i * 2.0 * t_lin / 40);
  const auto spec = occupancy(sol, times);
  const int zero = -sol.problem.j_min;
  for (std::size_t l = 0; l < spec.level_count(); ++l) {
    CHECK(std::abs(spec.at(0, l) - (static_cast<int>(l) == zero ? 1.0 : 0.0)) < 1e-12);
  }
  for (std::size_t t = 0; t < times.size(); ++t) CHECK(spec.total(t) == doctest::Approx(1.0).epsilon(1e-10));

  std::vector<double> back;
  for (double t : times) back.push_back(-t);
  const auto rev = occupancy(sol, back);
  double worst = 0.0;
  for (std::size_t i = 0; i < spec.occupancies.size(); ++i) {
    worst = std::max(worst, std::abs(rev.occupancies[i] - std::conj(spec.occupancies[i])));
  }
  CHECK(worst < 1e-12);

  // the mass actually leaves j = 0
  double min0 = 1.0;
  for (std::size_t t = 0; t < times.size(); ++t) min0 = std::min(min0, std::norm(spec.at(t, zero)));
  CHECK(min0 < 0.5);
}

TEST_CASE("truncation doubling leaves occupancies unchanged") {
  const auto sol = solve(BlochProblem{k0_ref, ref_pot});
  BlochProblem big = sol.problem;
  big.j_min *= 2;
  big.j_max *= 2;
  const auto wide = solve_fixed(big);
  const double t_lin = classical::linearized_period(ref_pot);
  std::vector<double> times;
  for (int i = 0; i <= 24; ++i) times.push_back(i * 2.0 * t_lin / 24);
  const auto a = occupancy(sol, times);
  const auto b = occupancy(wide, times);
  const int offset = sol.problem.j_min - big.j_min;
  double worst = 0.0;
  for (std::size_t t = 0; t < times.size(); ++t) {
    for (std::size_t l = 0; l < b.level_count(); ++l) {
      const int la = static_cast<int>(l) - offset;
      const double pa = la >= 0 && la < static_cast<int>(a.level_count()) ? std::norm(a.at(t, la)) : 0.0;
      worst = std::max(worst, std::abs(pa - std::norm(b.at(t, l))));
    }
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("momentum levels") {
  const auto sol = solve(BlochProblem{k0_ref, ref_pot});
  CHECK(momentum_level_energy(sol, 0) == doctest::Approx(-9 * units::eV).epsilon(1e-12));
  const auto spec = occupancy(sol, {0.0});
  // beat-wave construction: lambda = 2 pi c / (w1 + w2), so dp = hbar (w1 + w2) / c
  const double w_sum = two_pi * c / ref_pot.spatial_period;
  for (std::size_t l = 0; l + 1 < spec.level_count(); ++l) {
    CHECK((spec.momenta[l + 1] - spec.momenta[l]) == doctest::Approx(codata.hbar * w_sum / c).epsilon(1e-9));
  }
  CHECK_THROWS_AS(momentum_level_energy(sol, sol.problem.j_max + 1), DomainError);
}

TEST_CASE("plane-wave weights") {
  const auto w = gaussian_energy_weights(-9 * units::eV, 0.5 * units::eV, ref_pot.group_velocity, 33);
  double s = 0.0, mean = 0.0;
  for (const auto& x : w) {
    s += x.weight * x.weight;
    const double e = classical::energy_offset(codata.hbar * x.k0 / codata.electron_mass, ref_pot.group_velocity);
    mean += x.weight * x.weight * e;
  }
  CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mean == doctest::Approx(-9 * units::eV).epsilon(1e-3));
  const auto w2 = gaussian_energy_weights(-9 * units::eV, 0.5 * units::eV, ref_pot.group_velocity, 33, 2.0,
                                          WeightMode::CenterDensity);
  for (std::size_t i = 0; i < w.size(); ++i) CHECK(w2[i].weight == doctest::Approx(w[i].weight).epsilon(0.01));
}

TEST_CASE("wavepacket evolution reduces to single-plane-wave occupancy and ignores order") {
  const double t_lin = classical::linearized_period(ref_pot);
  const std::vector<double> times{0.0, 0.3 * t_lin, 0.9 * t_lin};
  const auto axis = Axis::uniform("energy offset", "J", -60 * units::eV, 40 * units::eV, 400);
  const auto grid = wavepacket_evolution({{k0_ref, 1.0}}, ref_pot, times, axis, {}, 1);
  const auto sol = solve(BlochProblem{k0_ref, ref_pot});
  const auto spec = occupancy(sol, times);
  for (std::size_t t = 0; t < times.size(); ++t) {
    std::vector<double> expected(axis.bins(), 0.0);
    for (std::size_t l = 0; l < spec.level_count(); ++l) {
      if (auto b = axis.locate(momentum_level_energy(sol, spec.levels[l]))) expected[*b] += std::norm(spec.at(t, l));
    }
    double tot = 0.0;
    for (double e : expected) tot += e;
    for (std::size_t b = 0; b < axis.bins(); ++b) CHECK(grid.at(t, b) == doctest::Approx(expected[b] / tot).epsilon(1e-12));
  }

  auto weights = gaussian_energy_weights(-9 * units::eV, 0.5 * units::eV, ref_pot.group_velocity, 9);
  WavepacketOptions blur;
  blur.blur_fwhm = 0.5 * units::eV;
  const auto g1 = wavepacket_evolution(weights, ref_pot, times, axis, blur, 1);
  std::reverse(weights.begin(), weights.end());
  const auto g2 = wavepacket_evolution(weights, ref_pot, times, axis, blur, 2);
  for (std::size_t i = 0; i < g1.density.size(); ++i) CHECK(g1.density[i] == doctest::Approx(g2.density[i]).epsilon(1e-12));
  for (std::size_t t = 0; t < times.size(); ++t) CHECK(g1.column_sum(t) == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(wavepacket_evolution({{k0_ref, 0.5}}, ref_pot, times, axis), DomainError);
}

TEST_CASE("grid propagator: free evolution is exact") {
  PotentialParams free = ref_pot;
  free.amplitude = 0.0;
  const double dt = 1e-16;
  GridPropagator g(k0_ref, free, 64, dt);
  std::vector<std::complex<double>> u(64);
  // two plane waves with known phases
  for (std::size_t i = 0; i < 64; ++i) {
    const double x = g.x(i);
    u[i] = (std::polar(0.6, two_pi * 3 * x / free.spatial_period) + std::polar(0.8, -two_pi * 5 * x / free.spatial_period)) /
           std::sqrt(free.spatial_period);
  }
  g.step(u, 1000);
  const auto a = g.amplitudes(u);
  const double t = 1000 * dt;
  auto energy = [&](int j) {
    const double kj = k0_ref + two_pi * j / free.spatial_period;
    return codata.hbar * kj * kj / (2 * codata.electron_mass);
  };
  CHECK(std::abs(a[32 + 3] - std::polar(0.6, -energy(3) * t)) < 1e-11);
  CHECK(std::abs(a[32 - 5] - std::polar(0.8, -energy(-5) * t)) < 1e-11);
}

TEST_CASE("grid propagator: unitary and second order") {
  const double t_lin = classical::linearized_period(ref_pot);
  {
    GridPropagator g(k0_ref, ref_pot, 256, 2e-17);
    auto u = g.plane_wave();
    const double n0 = g.norm(u);
    CHECK(n0 == doctest::Approx(1.0).epsilon(1e-14));
    g.step(u, 10000);
    CHECK(std::abs(g.norm(u) - n0) < 1e-12);
  }
  // error against the tridiagonal solution at t = T_lin / 4 for dt and dt / 2
  const auto sol = solve(BlochProblem{k0_ref, ref_pot});
  const double t = 0.25 * t_lin;
  const auto spec = occupancy(sol, {t});
  std::vector<double> errs;
  for (std::size_t steps : {2500u, 5000u}) {
    GridPropagator g(k0_ref, ref_pot, 256, t / steps);
    auto u = g.plane_wave();
    g.step(u, steps);
    errs.push_back(g.distance(u, g.from_occupancy(spec, 0)));
  }
  const double order = std::log2(errs[0] / errs[1]);
  CHECK(order == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("grid oracle agrees with the tridiagonal solution after one linearized period") {
  const double t_lin = classical::linearized_period(ref_pot);
  const auto sol = solve(BlochProblem{k0_ref, ref_pot});
  const auto spec = occupancy(sol, {t_lin});
  const auto begin = std::chrono::steady_clock::now();
  const auto u = oracle_grid_propagate(k0_ref, ref_pot, t_lin, 256, 4e-17);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - begin).count();
  GridPropagator g(k0_ref, ref_pot, 256, 1.0);
  const double d = g.distance(u, g.from_occupancy(spec, 0));
  MESSAGE("oracle L2 distance " << d << " in " << secs << " s");
  CHECK(d < 1e-6);
}
