#pragma once

#include "ponder/constants.hpp"

namespace ponder {

/// The moving cosine potential U(z, t) = (A/2)(1 - cos(2 pi (v_g t - z) / lambda)).
struct PotentialParams {
  double amplitude = 0.0;       // A [J]
  double group_velocity = 0.0;  // v_g [m/s]
  double spatial_period = 0.0;  // lambda [m]
};

/// Two counterpropagating plane waves of equal field amplitude.
struct BeatWaveInputs {
  double field_amplitude = 0.0;  // E0 [V/m]
  double omega1 = 0.0;           // faster wave [rad/s]
  double omega2 = 0.0;           // [rad/s]
  double charge = codata.elementary_charge;
  double mass = codata.electron_mass;
};

/// Throws DomainError unless A >= 0, lambda > 0 and |v_g| < c.
void validate(const PotentialParams& pot, const PhysicalConstants& k = codata);

namespace beatwave {

/// A = q^2 E0^2 / (m w1 w2), v_g = c (w1 - w2)/(w1 + w2), lambda = 2 pi c / (w1 + w2).
/// Requires omega1 > omega2 > 0 unless `allow_standing_wave` is set, which
/// admits omega1 == omega2 (v_g = 0).
PotentialParams potential_from_fields(const BeatWaveInputs& in, const PhysicalConstants& k = codata,
                                      bool allow_standing_wave = false);

/// Field amplitude that produces amplitude A for the given frequency pair.
double field_amplitude_for(double amplitude, double omega1, double omega2,
                           const PhysicalConstants& k = codata, double charge = codata.elementary_charge,
                           double mass = codata.electron_mass);

/// U_p(z, t) in joules.
double potential_value(const PotentialParams& pot, double z, double t);

/// Angular frequency of a vacuum wave with the given wavelength.
double angular_frequency(double wavelength, const PhysicalConstants& k = codata);

/// |delta_v| / |v_g|; the moving-potential picture assumes this is small.
double drift_ratio(double delta_v, const PotentialParams& pot);

inline constexpr double default_drift_warning_ratio = 0.05;

}  // namespace beatwave
}  // namespace ponder
