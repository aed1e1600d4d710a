#include "ponder/classical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ponder/elliptic.hpp"
#include "ponder/errors.hpp"

namespace ponder::classical {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

// Squared speed at the potential minimum, dv^2 + (2A/m) sin^2(pi z0 / lambda).
double speed_sq_at_minimum(const InitialCondition& ic, const PotentialParams& pot, double mass) {
  const double s = std::sin(pi * ic.z0 / pot.spatial_period);
  return ic.delta_v0 * ic.delta_v0 + 2.0 * pot.amplitude / mass * s * s;
}

// cos(pi z / lambda) for z in [-lambda/2, lambda/2), exactly zero at the edge.
double cos_phase(double z, double spatial_period) {
  return std::sin(pi * (0.5 * spatial_period - std::abs(z)) / spatial_period);
}

double clamp_unit(double x) { return std::clamp(x, -1.0, 1.0); }

}  // namespace

const char* to_string(TrajectoryClass c) {
  switch (c) {
    case TrajectoryClass::Bound: return "bound";
    case TrajectoryClass::Unbound: return "unbound";
    case TrajectoryClass::Separatrix: return "separatrix";
  }
  return "unknown";
}

double wrap_position(double z, double spatial_period) {
  const double half = 0.5 * spatial_period;
  double w = z - spatial_period * std::floor((z + half) / spatial_period);
  if (w >= half) w -= spatial_period;
  if (w < -half) w += spatial_period;
  return w;
}

InitialCondition canonicalize(InitialCondition ic, const PotentialParams& pot) {
  if (!std::isfinite(ic.z0) || !std::isfinite(ic.delta_v0)) {
    throw DomainError("initial condition must be finite");
  }
  ic.z0 = wrap_position(ic.z0, pot.spatial_period);
  return ic;
}

double kappa(const InitialCondition& ic_in, const PotentialParams& pot, const PhysicalConstants& k) {
  if (!(pot.amplitude > 0.0)) throw DomainError("kappa: amplitude must be positive");
  const auto ic = canonicalize(ic_in, pot);
  const double w2 = 2.0 * pot.amplitude / k.electron_mass;
  const double d = speed_sq_at_minimum(ic, pot, k.electron_mass);
  if (d == 0.0) return inf;
  return std::sqrt(w2 / d);
}

TrajectoryClass classify(double kappa, double tol) {
  if (kappa > 1.0 + tol) return TrajectoryClass::Bound;
  if (kappa < 1.0 - tol) return TrajectoryClass::Unbound;
  return TrajectoryClass::Separatrix;
}

double delta_v_from_energy_offset(double dE0, double v_g, const PhysicalConstants& k) {
  const double x = 2.0 * dE0 / k.electron_mass;
  const double radicand = v_g * v_g + x;
  if (radicand < 0.0) {
    throw DomainError("delta_v_from_energy_offset: offset exceeds the synchronous kinetic energy");
  }
  const double root = std::sqrt(radicand);
  if (v_g > 0.0) return x / (root + v_g);
  return root - v_g;
}

double energy_offset(double qdot, double v_g, const PhysicalConstants& k) {
  return 0.5 * k.electron_mass * qdot * (qdot + 2.0 * v_g);
}

AnalyticTrajectory build_trajectory(const InitialCondition& ic_in, const PotentialParams& pot,
                                    const PhysicalConstants& k) {
  validate(pot, k);
  AnalyticTrajectory tr;
  tr.pot_ = pot;
  tr.ic_ = canonicalize(ic_in, pot);
  const auto& ic = tr.ic_;
  tr.sign_ = ic.delta_v0 < 0.0 ? -1 : 1;
  const double lambda = pot.spatial_period;
  const double Q0 = pi * ic.z0 / lambda;

  if (pot.amplitude == 0.0) {
    tr.regime_ = AnalyticTrajectory::Regime::Free;
    tr.class_ = TrajectoryClass::Unbound;
    tr.kappa_ = 0.0;
    return tr;
  }

  const double w2 = 2.0 * pot.amplitude / k.electron_mass;
  const double d = speed_sq_at_minimum(ic, pot, k.electron_mass);
  if (d == 0.0) {
    tr.regime_ = AnalyticTrajectory::Regime::RestAtMinimum;
    tr.class_ = TrajectoryClass::Bound;
    tr.kappa_ = inf;
    return tr;
  }
  tr.kappa_ = std::sqrt(w2 / d);
  tr.class_ = classify(tr.kappa_);
  const double bound_rate = pi / lambda * std::sqrt(w2);

  switch (tr.class_) {
    case TrajectoryClass::Unbound: {
      tr.regime_ = AnalyticTrajectory::Regime::Unbound;
      tr.parameter_ = tr.kappa_ * tr.kappa_;
      tr.rate_ = pi / lambda * std::sqrt(d);
      tr.phase0_ = elliptic::incomplete_F(Q0, tr.parameter_);
      break;
    }
    case TrajectoryClass::Bound: {
      tr.regime_ = AnalyticTrajectory::Regime::Bound;
      tr.parameter_ = 1.0 / (tr.kappa_ * tr.kappa_);
      tr.rate_ = bound_rate;
      tr.phase0_ = elliptic::incomplete_F(std::asin(clamp_unit(tr.kappa_ * std::sin(Q0))), tr.parameter_);
      break;
    }
    case TrajectoryClass::Separatrix: {
      tr.regime_ = AnalyticTrajectory::Regime::Separatrix;
      tr.parameter_ = 1.0;
      tr.rate_ = bound_rate;
      // Starting on the hilltop (z0 = -lambda/2) the electron never moves.
      tr.phase0_ = cos_phase(ic.z0, lambda) == 0.0 ? -inf : elliptic::inverse_gudermannian(Q0);
      break;
    }
  }
  return tr;
}

double AnalyticTrajectory::position(double t) const {
  const double lambda = pot_.spatial_period;
  switch (regime_) {
    case Regime::Free: return ic_.z0 + ic_.delta_v0 * t;
    case Regime::RestAtMinimum: return 0.0;
    case Regime::Unbound: {
      const double u = sign_ * rate_ * t + phase0_;
      return lambda / pi * elliptic::jacobi_am(u, parameter_);
    }
    case Regime::Bound: {
      const double u = sign_ * rate_ * t + phase0_;
      const double sn = elliptic::jacobi_sn(u, parameter_);
      return lambda / pi * std::asin(clamp_unit(sn / kappa_));
    }
    case Regime::Separatrix: {
      if (std::isinf(phase0_)) return ic_.z0;
      return lambda / pi * elliptic::separatrix_am(sign_ * rate_ * t + phase0_);
    }
  }
  return 0.0;
}

double AnalyticTrajectory::velocity(double t) const {
  const double lambda = pot_.spatial_period;
  switch (regime_) {
    case Regime::Free: return ic_.delta_v0;
    case Regime::RestAtMinimum: return 0.0;
    case Regime::Unbound: {
      const double u = sign_ * rate_ * t + phase0_;
      return sign_ * lambda / pi * rate_ * elliptic::jacobi_dn(u, parameter_);
    }
    case Regime::Bound: {
      const double u = sign_ * rate_ * t + phase0_;
      return sign_ * lambda / pi * rate_ / kappa_ * elliptic::jacobi_cn(u, parameter_);
    }
    case Regime::Separatrix: {
      if (std::isinf(phase0_)) return 0.0;
      return sign_ * lambda / pi * rate_ / std::cosh(sign_ * rate_ * t + phase0_);
    }
  }
  return 0.0;
}

double turning_point(const InitialCondition& ic, const PotentialParams& pot, const PhysicalConstants& k) {
  const double kap = kappa(ic, pot, k);
  if (std::isinf(kap)) return 0.0;
  switch (classify(kap)) {
    case TrajectoryClass::Unbound:
      throw DomainError("turning_point: unbound orbit has no turning point");
    case TrajectoryClass::Separatrix: return 0.5 * pot.spatial_period;
    case TrajectoryClass::Bound: break;
  }
  return pot.spatial_period / pi * std::asin(1.0 / kap);
}

double linearized_period(const PotentialParams& pot, const PhysicalConstants& k) {
  if (!(pot.amplitude > 0.0)) throw DomainError("linearized_period: amplitude must be positive");
  return pot.spatial_period * std::sqrt(2.0 * k.electron_mass / pot.amplitude);
}

double period(const InitialCondition& ic_in, const PotentialParams& pot, const PhysicalConstants& k) {
  const auto ic = canonicalize(ic_in, pot);
  const double kap = kappa(ic, pot, k);
  if (std::isinf(kap)) return linearized_period(pot, k);
  const double lambda = pot.spatial_period;
  switch (classify(kap)) {
    case TrajectoryClass::Separatrix:
      throw InfinitePeriodError("period: separatrix orbit has infinite period");
    case TrajectoryClass::Unbound: {
      const double rate = pi / lambda * std::sqrt(speed_sq_at_minimum(ic, pot, k.electron_mass));
      return 2.0 * elliptic::complete_K(kap * kap) / rate;
    }
    case TrajectoryClass::Bound: {
      const double rate = pi / lambda * std::sqrt(2.0 * pot.amplitude / k.electron_mass);
      return 4.0 * elliptic::complete_K(1.0 / (kap * kap)) / rate;
    }
  }
  return 0.0;
}

double critical_amplitude(double z0, double dE0, const PotentialParams& pot, const PhysicalConstants& k) {
  if (!(pot.spatial_period > 0.0)) throw DomainError("critical_amplitude: spatial period must be positive");
  const double z = wrap_position(z0, pot.spatial_period);
  const double c = cos_phase(z, pot.spatial_period);
  if (c == 0.0) throw DomainError("critical_amplitude: diverges at z0 = +-lambda/2");
  const double dv = delta_v_from_energy_offset(dE0, pot.group_velocity, k);
  return k.electron_mass * dv * dv / (2.0 * c * c);
}

Range velocity_bounds(const InitialCondition& ic_in, const PotentialParams& pot, const PhysicalConstants& k) {
  validate(pot, k);
  const auto ic = canonicalize(ic_in, pot);
  if (pot.amplitude == 0.0) return {ic.delta_v0, ic.delta_v0};
  const double d = speed_sq_at_minimum(ic, pot, k.electron_mass);
  if (d == 0.0) return {0.0, 0.0};
  const double vmax = std::sqrt(d);  // (1/kappa) sqrt(2A/m)
  const double kap = kappa(ic, pot, k);
  if (classify(kap) == TrajectoryClass::Bound) return {-vmax, vmax};
  // dv^2 - (2A/m) cos^2(pi z0/lambda) = (2A/m)(1 - kappa^2)/kappa^2
  const double c = cos_phase(ic.z0, pot.spatial_period);
  const double vmin = std::sqrt(std::max(0.0, ic.delta_v0 * ic.delta_v0 - 2.0 * pot.amplitude / k.electron_mass * c * c));
  if (ic.delta_v0 < 0.0) return {-vmax, -vmin};
  return {vmin, vmax};
}

Range energy_bounds(const InitialCondition& ic, const PotentialParams& pot, const PhysicalConstants& k) {
  const auto v = velocity_bounds(ic, pot, k);
  const double a = energy_offset(v.min, pot.group_velocity, k);
  const double b = energy_offset(v.max, pot.group_velocity, k);
  Range r{std::min(a, b), std::max(a, b)};
  // The offset is a parabola in qdot with its vertex at -v_g.
  if (v.min < -pot.group_velocity && -pot.group_velocity < v.max) {
    r.min = std::min(r.min, energy_offset(-pot.group_velocity, pot.group_velocity, k));
  }
  return r;
}

}  // namespace ponder::classical
