#pragma once

// Closed-form motion in the rest frame of the moving potential.
//
// With q = z - v_g t the equation of motion is the pendulum
//   q'' + (pi A / (m lambda)) sin(2 pi q / lambda) = 0,
// solved by Jacobi elliptic functions. kappa classifies the orbit:
// kappa > 1 bound inside one period, kappa < 1 travelling across periods.

#include "ponder/beatwave.hpp"
#include "ponder/constants.hpp"

namespace ponder::classical {

struct InitialCondition {
  double z0 = 0.0;        // position in the potential rest frame at t = 0 [m]
  double delta_v0 = 0.0;  // velocity relative to the potential [m/s]
};

enum class TrajectoryClass { Bound, Unbound, Separatrix };

const char* to_string(TrajectoryClass c);

/// Wraps z into [-lambda/2, lambda/2).
double wrap_position(double z, double spatial_period);

/// Same initial condition with z0 wrapped into [-lambda/2, lambda/2).
InitialCondition canonicalize(InitialCondition ic, const PotentialParams& pot);

/// kappa = 1 / sqrt(m dv^2 / 2A + sin^2(pi z0 / lambda)); +inf for rest at the minimum.
double kappa(const InitialCondition& ic, const PotentialParams& pot, const PhysicalConstants& k = codata);

TrajectoryClass classify(double kappa, double tol = 1e-12);

/// Inverse of energy_offset on the root continuous with dE0 = 0:
/// dv = -v_g + sqrt(v_g^2 + 2 dE0 / m).
double delta_v_from_energy_offset(double dE0, double v_g, const PhysicalConstants& k = codata);

/// Lab-frame kinetic-energy offset from the synchronous electron,
/// (m/2)[(v_g + qdot)^2 - v_g^2].
double energy_offset(double qdot, double v_g, const PhysicalConstants& k = codata);

/// Immutable closed-form trajectory; evaluation is pure and thread-safe.
class AnalyticTrajectory {
 public:
  enum class Regime { Bound, Unbound, Separatrix, RestAtMinimum, Free };

  double position(double t) const;
  double velocity(double t) const;

  const PotentialParams& params() const { return pot_; }
  const InitialCondition& initial() const { return ic_; }
  double kappa() const { return kappa_; }
  TrajectoryClass trajectory_class() const { return class_; }
  Regime regime() const { return regime_; }
  double phase0() const { return phase0_; }
  int sign() const { return sign_; }
  /// Angular rate of the elliptic argument [1/s].
  double rate() const { return rate_; }

 private:
  friend AnalyticTrajectory build_trajectory(const InitialCondition&, const PotentialParams&,
                                             const PhysicalConstants&);
  PotentialParams pot_;
  InitialCondition ic_;
  double kappa_ = 0.0;
  TrajectoryClass class_ = TrajectoryClass::Bound;
  Regime regime_ = Regime::RestAtMinimum;
  double phase0_ = 0.0;
  int sign_ = 1;
  double rate_ = 0.0;
  double parameter_ = 0.0;  // elliptic parameter m used by the regime
};

/// Builds the trajectory for any initial condition (z0 is canonicalized).
/// A = 0 yields free flight.
AnalyticTrajectory build_trajectory(const InitialCondition& ic, const PotentialParams& pot,
                                    const PhysicalConstants& k = codata);

inline double eval_q(const AnalyticTrajectory& traj, double t) { return traj.position(t); }
inline double eval_qdot(const AnalyticTrajectory& traj, double t) { return traj.velocity(t); }

/// q_max = (lambda/pi) asin(1/kappa); only for bound or separatrix orbits.
double turning_point(const InitialCondition& ic, const PotentialParams& pot,
                     const PhysicalConstants& k = codata);

/// Period of qdot (and of the energy offset). Throws InfinitePeriodError on the separatrix.
double period(const InitialCondition& ic, const PotentialParams& pot, const PhysicalConstants& k = codata);

/// Small-oscillation period T_lin = lambda sqrt(2m/A).
double linearized_period(const PotentialParams& pot, const PhysicalConstants& k = codata);

/// Amplitude at which the electron becomes exactly separatrix (kappa = 1).
/// Uses v_g and lambda from `pot`; its amplitude is ignored.
double critical_amplitude(double z0, double dE0, const PotentialParams& pot,
                          const PhysicalConstants& k = codata);

struct Range {
  double min = 0.0;
  double max = 0.0;
};

/// Extremes of qdot over the orbit (rest-frame velocity table).
Range velocity_bounds(const InitialCondition& ic, const PotentialParams& pot,
                      const PhysicalConstants& k = codata);

/// Extremes of the kinetic-energy offset over the orbit.
Range energy_bounds(const InitialCondition& ic, const PotentialParams& pot,
                    const PhysicalConstants& k = codata);

}  // namespace ponder::classical
