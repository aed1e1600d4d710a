#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "pendulum_oracle.hpp"
#include "ponder/classical.hpp"
#include "ponder/errors.hpp"

using namespace ponder;
using namespace ponder::classical;

namespace {
const double m_e = codata.electron_mass;
const double c = codata.speed_of_light;
const PotentialParams fig_pot{30 * units::meV, 0.2 * c, 206 * units::nm};

double energy_residual(const AnalyticTrajectory& tr, double t) {
  const auto& p = tr.params();
  const double w2 = 2 * p.amplitude / m_e;
  const double k2 = tr.kappa() * tr.kappa();
  const double q = tr.position(t), v = tr.velocity(t);
  const double s = std::sin(pi * q / p.spatial_period);
  return (v * v - w2 / k2 + w2 * s * s) / (w2 / k2);
}
}  // namespace

TEST_CASE("kappa and classification") {
  const double l = fig_pot.spatial_period;
  CHECK(kappa({-l / 2, 0.0}, fig_pot) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(kappa({l / 4, 0.0}, fig_pot) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(std::isinf(kappa({0.0, 0.0}, fig_pot)));
  CHECK_THROWS_AS(kappa({0.1 * l, 1.0}, {0.0, 0.0, l}), DomainError);

  const double dv = delta_v_from_energy_offset(-9 * units::eV, 0.2 * c);
  const double kap = kappa({0.0, dv}, fig_pot);
  CHECK(kap == doctest::Approx(std::sqrt(2 * fig_pot.amplitude / (m_e * dv * dv))).epsilon(1e-14));
  CHECK(kap == doctest::Approx(3.9).epsilon(0.02));

  CHECK(classify(2.0) == TrajectoryClass::Bound);
  CHECK(classify(0.5) == TrajectoryClass::Unbound);
  CHECK(classify(1.0 + 1e-15) == TrajectoryClass::Separatrix);
  CHECK(classify(1.0 - 1e-15) == TrajectoryClass::Separatrix);
}

TEST_CASE("energy offset mapping") {
  const double vg = 0.2 * c;
  CHECK(delta_v_from_energy_offset(0.0, vg) == 0.0);
  CHECK(energy_offset(0.0, vg) == 0.0);
  CHECK(std::abs(energy_offset(-2 * vg, vg)) < 1e-30);
  const double dv = delta_v_from_energy_offset(-9 * units::eV, vg);
  CHECK(dv == doctest::Approx(-2.6e4).epsilon(0.02));
  CHECK(dv == doctest::Approx(-9 * units::eV / (m_e * vg)).epsilon(1e-3));
  CHECK(energy_offset(dv, vg) == doctest::Approx(-9 * units::eV).epsilon(1e-13));
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> ue(-1000, 1000);
  for (int i = 0; i < 1000; ++i) {
    const double e = ue(gen) * units::eV;
    const double v = delta_v_from_energy_offset(e, vg);
    CHECK((v > 0) == (e > 0));
    CHECK(std::abs(energy_offset(v, vg) - e) <= 1e-12 * std::abs(e));
  }
  CHECK_THROWS_AS(delta_v_from_energy_offset(-1e6 * units::eV, 0.01 * c), DomainError);
}

TEST_CASE("trajectory reproduces initial condition") {
  std::mt19937_64 gen(13);
  std::uniform_real_distribution<double> uz(-0.5, 0.5), uv(-3e4, 3e4);
  const double l = fig_pot.spatial_period;
  for (int i = 0; i < 500; ++i) {
    const InitialCondition ic{uz(gen) * l, uv(gen)};
    const auto tr = build_trajectory(ic, fig_pot);
    CHECK(std::abs(tr.position(0.0) - ic.z0) <= 1e-10 * std::abs(ic.z0) + 1e-15 * l);
    CHECK(std::abs(tr.velocity(0.0) - ic.delta_v0) <= 1e-10 * std::abs(ic.delta_v0) + 1e-15 * l / 1e-12);
  }
}

TEST_CASE("special trajectories") {
  const double l = fig_pot.spatial_period;
  const auto rest = build_trajectory({0.0, 0.0}, fig_pot);
  CHECK(rest.position(1e-9) == 0.0);
  CHECK(rest.velocity(1e-9) == 0.0);

  const PotentialParams free{0.0, 0.2 * c, l};
  const auto fr = build_trajectory({0.1 * l, 1234.0}, free);
  CHECK(fr.position(2e-9) == doctest::Approx(0.1 * l + 1234.0 * 2e-9).epsilon(1e-15));
  // tiny amplitude approaches free flight
  const PotentialParams weak{1e-12 * units::meV, 0.2 * c, l};
  const auto wk = build_trajectory({0.1 * l, 1234.0}, weak);
  CHECK(wk.position(1e-11) == doctest::Approx(0.1 * l + 1234.0 * 1e-11).epsilon(1e-9));

  // separatrix from a hilltop neighbour reaches the top asymptotically
  const double q0 = 0.1 * l;
  const double s0 = std::sin(pi * q0 / l);
  const double dv_sep = std::sqrt(2 * fig_pot.amplitude / m_e * (1 - s0 * s0));
  const auto sep = build_trajectory({q0, dv_sep}, fig_pot);
  CHECK(sep.trajectory_class() == TrajectoryClass::Separatrix);
  CHECK(sep.position(200e-12) == doctest::Approx(0.5 * l).epsilon(1e-9));
  CHECK(std::abs(energy_residual(sep, 3e-12)) < 1e-10);
  const auto top = build_trajectory({-0.5 * l, 0.0}, fig_pot);
  CHECK(top.position(1e-12) == -0.5 * l);
  CHECK(top.velocity(1e-12) == 0.0);
}

TEST_CASE("bound orbit versus direct integration") {
  const double l = fig_pot.spatial_period;
  const InitialCondition ic{0.1 * l, 0.0};
  const auto tr = build_trajectory(ic, fig_pot);
  const double T = period(ic, fig_pot);
  std::vector<double> times;
  for (int i = 1; i <= 500; ++i) times.push_back(5 * T * i / 500.0);
  const auto ref = oracle::integrate_pendulum(fig_pot, m_e, ic.z0, ic.delta_v0, times);
  double err = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) err = std::max(err, std::abs(tr.position(times[i]) - ref[i].q));
  CHECK(err < 1e-6 * l);
}

TEST_CASE("energy integral bounds and periodicity") {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> uz(-0.5, 0.5), uv(-4e4, 4e4), ut(0.0, 20e-12);
  const double l = fig_pot.spatial_period;
  for (int i = 0; i < 200; ++i) {
    const InitialCondition ic{uz(gen) * l, uv(gen)};
    const auto tr = build_trajectory(ic, fig_pot);
    const auto vb = velocity_bounds(ic, fig_pot);
    const auto eb = energy_bounds(ic, fig_pot);
    const double T = period(ic, fig_pot);
    const bool bound = tr.trajectory_class() == TrajectoryClass::Bound;
    const double qmax = bound ? turning_point(ic, fig_pot) : 0.0;
    for (int j = 0; j < 20; ++j) {
      const double t = ut(gen);
      CHECK(std::abs(energy_residual(tr, t)) < 1e-10);
      const double v = tr.velocity(t);
      const double span = vb.max - vb.min + std::abs(vb.max);
      CHECK(v >= vb.min - 1e-12 * span);
      CHECK(v <= vb.max + 1e-12 * span);
      const double de = energy_offset(v, fig_pot.group_velocity);
      CHECK(de >= eb.min - 1e-9 * std::abs(eb.min));
      CHECK(de <= eb.max + 1e-9 * std::abs(eb.max));
      const double shift = bound ? 0.0 : tr.sign() * l;
      CHECK(std::abs(tr.position(t + T) - tr.position(t) - shift) < 1e-9 * l);
      if (bound) {
        CHECK(std::abs(tr.position(t)) <= qmax * (1 + 1e-12));
      } else {
        CHECK(v * tr.sign() > 0.0);
      }
    }
  }
}

TEST_CASE("velocity is the time derivative of position") {
  std::mt19937_64 gen(19);
  std::uniform_real_distribution<double> uz(-0.5, 0.5), uv(-4e4, 4e4), ut(0.0, 10e-12);
  const double l = fig_pot.spatial_period;
  for (int i = 0; i < 200; ++i) {
    const auto tr = build_trajectory({uz(gen) * l, uv(gen)}, fig_pot);
    const double t = ut(gen), h = 1e-17;
    const double fd = (tr.position(t + h) - tr.position(t - h)) / (2 * h);
    const double v = tr.velocity(t);
    const double scale = std::sqrt(2 * fig_pot.amplitude / m_e) / tr.kappa();
    CHECK(std::abs(fd - v) < 1e-7 * std::max(std::abs(v), 1e-3 * scale));
  }
}

TEST_CASE("turning point") {
  const double l = fig_pot.spatial_period;
  CHECK(turning_point({-l / 2, 0.0}, fig_pot) == doctest::Approx(l / 2).epsilon(1e-15));
  CHECK(turning_point({l / 4, 0.0}, fig_pot) == doctest::Approx(l / 4).epsilon(1e-14));
  const double dv = delta_v_from_energy_offset(-9 * units::eV, 0.2 * c);
  const InitialCondition ic{0.0, dv};
  const double qm = turning_point(ic, fig_pot);
  const double ref = oracle::bisect(
      [&](double q) {
        return beatwave::potential_value(fig_pot, q, 0.0) - beatwave::potential_value(fig_pot, 0.0, 0.0) - 0.5 * m_e * dv * dv;
      },
      0.0, 0.5 * l);
  CHECK(qm == doctest::Approx(ref).epsilon(1e-12));
  CHECK_THROWS_AS(turning_point({0.0, 1e6}, fig_pot), DomainError);
}

TEST_CASE("period") {
  const double l = fig_pot.spatial_period;
  const double tlin = linearized_period(fig_pot);
  CHECK(tlin == doctest::Approx(l * std::sqrt(2 * m_e / fig_pot.amplitude)).epsilon(1e-15));
  CHECK(tlin == doctest::Approx(4.0e-12).epsilon(0.01));
  CHECK(period({1e-6 * l, 0.0}, fig_pot) == doctest::Approx(tlin).epsilon(1e-10));
  CHECK_THROWS_AS(period({-l / 2, 0.0}, fig_pot), InfinitePeriodError);

  // kappa = 1.5: twice the spacing of successive zero crossings of qdot
  const double s0 = 1.0 / 1.5;
  const InitialCondition ic{l / pi * std::asin(s0), 0.0};
  CHECK(kappa(ic, fig_pot) == doctest::Approx(1.5).epsilon(1e-14));
  const double T = period(ic, fig_pot);
  // zero crossings of qdot from the integrated orbit: it starts at a turning point
  const auto vel = [&](double t) { return oracle::integrate_pendulum(fig_pot, m_e, ic.z0, 0.0, {t})[0].qdot; };
  const double half = oracle::bisect(vel, 0.3 * T, 0.7 * T, 80);
  CHECK(2 * half == doctest::Approx(T).epsilon(1e-8));

  // unbound closed form (lambda kappa / pi) sqrt(2m/A) K(kappa^2)
  const InitialCondition fast{0.0, 2e5};
  const double k = kappa(fast, fig_pot);
  CHECK(period(fast, fig_pot) ==
        doctest::Approx(l * k / pi * std::sqrt(2 * m_e / fig_pot.amplitude) *
                        oracle::elliptic_F(pi / 2, k * k)).epsilon(1e-12));
}

TEST_CASE("critical amplitude") {
  const double l = fig_pot.spatial_period, vg = fig_pot.group_velocity;
  CHECK(critical_amplitude(0.1 * l, 0.0, fig_pot) == 0.0);
  const double dv = delta_v_from_energy_offset(-9 * units::eV, vg);
  const double ac = critical_amplitude(0.0, -9 * units::eV, fig_pot);
  CHECK(ac == doctest::Approx(0.5 * m_e * dv * dv).epsilon(1e-14));
  CHECK(ac / units::meV == doctest::Approx(2.0).epsilon(0.02));
  CHECK_THROWS_AS(critical_amplitude(0.5 * l, -9 * units::eV, fig_pot), DomainError);
  CHECK_THROWS_AS(critical_amplitude(-0.5 * l, -9 * units::eV, fig_pot), DomainError);

  std::mt19937_64 gen(23);
  std::uniform_real_distribution<double> uz(-0.49, 0.49), ue(-20, 20), ua(0.1, 100);
  for (int i = 0; i < 1000; ++i) {
    const double z0 = uz(gen) * l, de = ue(gen) * units::eV;
    const double a_c = critical_amplitude(z0, de, fig_pot);
    const InitialCondition ic{z0, delta_v_from_energy_offset(de, vg)};
    const PotentialParams at_crit{a_c, vg, l};
    if (a_c > 0) CHECK(kappa(ic, at_crit) == doctest::Approx(1.0).epsilon(1e-10));
    const PotentialParams p{ua(gen) * units::meV, vg, l};
    const bool bound = classify(kappa(ic, p)) == TrajectoryClass::Bound;
    if (std::abs(p.amplitude / a_c - 1) > 1e-9) CHECK(bound == (p.amplitude > a_c));
  }
}

TEST_CASE("energy bounds table") {
  const double vg = fig_pot.group_velocity, l = fig_pot.spatial_period;
  const double dv = delta_v_from_energy_offset(-9 * units::eV, vg);
  const InitialCondition ic{0.0, dv};
  const double k = kappa(ic, fig_pot);
  const auto eb = energy_bounds(ic, fig_pot);
  const double A = fig_pot.amplitude;
  CHECK(eb.max == doctest::Approx((A + k * vg * std::sqrt(2 * A * m_e)) / (k * k)).epsilon(1e-12));

  const InitialCondition fast{0.2 * l, 1.5e5};
  const double kf = kappa(fast, fig_pot);
  const auto vb = velocity_bounds(fast, fig_pot);
  CHECK(vb.min == doctest::Approx(std::sqrt(2 * A / m_e * (1 - kf * kf) / (kf * kf))).epsilon(1e-12));
  CHECK(energy_bounds(fast, fig_pot).min > 0.0);

  const auto rest = energy_bounds({0.0, 0.0}, fig_pot);
  CHECK(rest.min == 0.0);
  CHECK(rest.max == 0.0);
}

TEST_CASE("sign convention at rest is immaterial") {
  const double l = fig_pot.spatial_period;
  const auto tr = build_trajectory({0.3 * l, 0.0}, fig_pot);
  CHECK(tr.sign() == 1);
  std::vector<double> times{0.5e-12, 1.7e-12, 3.1e-12};
  const auto ref = oracle::integrate_pendulum(fig_pot, m_e, 0.3 * l, 0.0, times);
  for (std::size_t i = 0; i < times.size(); ++i) CHECK(std::abs(tr.position(times[i]) - ref[i].q) < 1e-9 * l);
}
