#pragma once

#include <numbers>

namespace ponder {

inline constexpr double pi = std::numbers::pi;

/// CODATA 2018 values, SI units. Every module reads physical constants from
/// here; nothing else hard-codes them.
struct PhysicalConstants {
  double electron_mass = 9.1093837015e-31;   // kg
  double elementary_charge = 1.602176634e-19; // C
  double speed_of_light = 299792458.0;       // m/s
  double hbar = 1.054571817e-34;             // J s
};

inline constexpr PhysicalConstants codata{};

namespace units {
inline constexpr double eV = 1.602176634e-19;
inline constexpr double meV = 1e-3 * eV;
inline constexpr double keV = 1e3 * eV;
inline constexpr double nm = 1e-9;
inline constexpr double um = 1e-6;
inline constexpr double fs = 1e-15;
inline constexpr double ps = 1e-12;
inline constexpr double deg = std::numbers::pi / 180.0;
}  // namespace units

}  // namespace ponder
