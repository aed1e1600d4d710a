#include "ponder/beatwave.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ponder/errors.hpp"

namespace ponder {

void validate(const PotentialParams& pot, const PhysicalConstants& k) {
  if (!(pot.amplitude >= 0.0) || !std::isfinite(pot.amplitude)) {
    throw DomainError("potential amplitude must be finite and non-negative");
  }
  if (!(pot.spatial_period > 0.0) || !std::isfinite(pot.spatial_period)) {
    throw DomainError("potential spatial period must be positive");
  }
  if (!(std::abs(pot.group_velocity) < k.speed_of_light)) {
    throw DomainError("potential group velocity must be subluminal");
  }
}

namespace beatwave {

PotentialParams potential_from_fields(const BeatWaveInputs& in, const PhysicalConstants& k,
                                      bool allow_standing_wave) {
  if (!(in.omega2 > 0.0)) throw DomainError("omega2 must be positive");
  if (in.omega1 < in.omega2 || (!allow_standing_wave && in.omega1 == in.omega2)) {
    throw DomainError("omega1 must exceed omega2");
  }
  if (!(in.field_amplitude >= 0.0)) throw DomainError("field amplitude must be non-negative");
  if (!(in.mass > 0.0)) throw DomainError("particle mass must be positive");
  const double sum = in.omega1 + in.omega2;
  PotentialParams pot;
  pot.amplitude = in.charge * in.charge * in.field_amplitude * in.field_amplitude /
                  (in.mass * in.omega1 * in.omega2);
  pot.group_velocity = k.speed_of_light * (in.omega1 - in.omega2) / sum;
  pot.spatial_period = 2.0 * pi * k.speed_of_light / sum;
  return pot;
}

double field_amplitude_for(double amplitude, double omega1, double omega2, const PhysicalConstants&,
                           double charge, double mass) {
  if (!(amplitude >= 0.0)) throw DomainError("amplitude must be non-negative");
  if (!(omega1 > 0.0) || !(omega2 > 0.0)) throw DomainError("frequencies must be positive");
  return std::sqrt(amplitude * mass * omega1 * omega2) / std::abs(charge);
}

double potential_value(const PotentialParams& pot, double z, double t) {
  const double phase = 2.0 * pi * (pot.group_velocity * t - z) / pot.spatial_period;
  // 1 - cos(x) = 2 sin^2(x/2) keeps the minimum exactly zero.
  const double s = std::sin(0.5 * phase);
  return pot.amplitude * s * s;
}

double angular_frequency(double wavelength, const PhysicalConstants& k) {
  if (!(wavelength > 0.0)) throw DomainError("wavelength must be positive");
  return 2.0 * pi * k.speed_of_light / wavelength;
}

double drift_ratio(double delta_v, const PotentialParams& pot) {
  if (pot.group_velocity == 0.0) {
    return delta_v == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return std::abs(delta_v / pot.group_velocity);
}

}  // namespace beatwave
}  // namespace ponder
