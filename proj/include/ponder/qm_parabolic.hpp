#pragma once

// Quantum evolution in the parabolic (harmonic) approximation of the
// potential minimum: expansion in oscillator eigenstates.

#include <complex>
#include <cstddef>
#include <variant>
#include <vector>

#include "ponder/beatwave.hpp"
#include "ponder/constants.hpp"
#include "ponder/grid.hpp"

namespace ponder::qm {

struct LHOBasis {
  double omega = 0.0;           // Omega [rad/s]
  double mass = 0.0;            // [kg]
  double hbar = 0.0;            // [J s]
  std::size_t n_max = 64;       // initial truncation order
  double spatial_period = 0.0;  // lambda of the source potential [m]

  /// Oscillator length sqrt(hbar / (m Omega)).
  double length() const;
  double energy(std::size_t n) const;
};

/// Omega = (pi / lambda) sqrt(2A / m).
LHOBasis lho_basis(const PotentialParams& pot, std::size_t n_max = 64, const PhysicalConstants& k = codata);

/// Physicists' Hermite polynomial by the three-term recurrence.
double hermite_eval(unsigned n, double x);

/// Normalized Hermite functions h_0..h_{count-1} at dimensionless x
/// (unit L2 norm in x), with exponent rescaling so large orders do not overflow.
void hermite_functions(double x, std::size_t count, std::vector<double>& out);

/// psi_n(q) of the oscillator.
double eigenstate(const LHOBasis& basis, std::size_t n, double q);

struct GaussianPacket {
  double mean_momentum = 0.0;  // mu_p [kg m/s]
  double sigma_p = 0.0;        // standard deviation of |Phi_0(p)|^2
};

/// Spatial profile exp(-(6q / lambda)^(2 order)) with momentum displacement mu_p.
struct SuperGaussianPacket {
  unsigned order = 4;
  double mean_momentum = 0.0;
};

using WavepacketSpec = std::variant<GaussianPacket, SuperGaussianPacket>;

/// sigma_p of a minimum-uncertainty packet whose position density has the given FWHM.
double gaussian_sigma_p(double position_fwhm, double hbar = codata.hbar);

/// Normalized phi_0(q); `basis` supplies lambda and hbar.
std::complex<double> initial_wavefunction(const LHOBasis& basis, const WavepacketSpec& spec, double q);

struct CoefficientVector {
  std::vector<std::complex<double>> c;  // c_0..c_n_max
  double captured_norm = 0.0;
  double outside_quarter_probability = 0.0;  // P(|q| > lambda/4) of the initial state
  std::size_t quadrature_points = 0;
};

inline constexpr double default_truncation_epsilon = 1e-8;
inline constexpr std::size_t hard_truncation_cap = 2000;

/// c_n = <psi_n | phi_0>. Grows n_max until the captured norm reaches
/// 1 - eps (TruncationError past the cap) and refines the quadrature until
/// coefficients change by less than 1e-12.
CoefficientVector decompose(const LHOBasis& basis, const WavepacketSpec& spec,
                            double eps = default_truncation_epsilon, std::size_t cap = hard_truncation_cap);

/// Psi(t, p) in the momentum representation (global phase dropped).
std::complex<double> momentum_amplitude(const LHOBasis& basis, const CoefficientVector& coeffs, double t, double p);

/// |Psi(t, p)|^2 per unit momentum.
double momentum_density(const LHOBasis& basis, const CoefficientVector& coeffs, double t, double p);

/// <q>(t) and <p>(t) from the ladder-operator algebra.
double expectation_position(const LHOBasis& basis, const CoefficientVector& coeffs, double t);
double expectation_momentum(const LHOBasis& basis, const CoefficientVector& coeffs, double t);

/// Rest-frame momentum for a lab kinetic-energy offset, p = m dv(dE).
double momentum_for_energy_offset(double dE, double v_g, const PhysicalConstants& k = codata);

/// Probability per energy-offset bin at each time, columns normalized.
/// The probability captured inside the axis is recorded in metadata.
SpectralDensityGrid evolve_momentum_density(const LHOBasis& basis, const CoefficientVector& coeffs,
                                            const std::vector<double>& times, const Axis& energy_axis, double v_g,
                                            unsigned workers = 0);

}  // namespace ponder::qm
