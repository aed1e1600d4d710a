#pragma once

// Relativistic electron tracing through pairs of paraxial laser pulses.

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ponder/constants.hpp"
#include "ponder/grid.hpp"
#include "ponder/ode.hpp"

namespace ponder::tracer {

using Vec3 = std::array<double, 3>;

enum class Envelope { Gaussian, SuperGaussian };

struct Pulse {
  double wavelength = 0.0;       // [m]
  double field_amplitude = 0.0;  // E0 [V/m]
  double waist = 0.0;            // 1/e^2 radius w0 [m]
  double t_fwhm = 0.0;           // duration [s]; 0 switches the pulse off
  Envelope envelope = Envelope::Gaussian;
  unsigned order = 10;           // super-Gaussian order
  Vec3 direction{0.0, 0.0, 1.0};
  Vec3 polarization{0.0, 1.0, 0.0};
  double t_center = 0.0;         // envelope peak passes the focus at this time [s]
  double phase0 = 0.0;           // [rad]
  Vec3 focus{0.0, 0.0, 0.0};

  double wavenumber() const;
  double angular_frequency(const PhysicalConstants& k = codata) const;
  double rayleigh_length() const;
  double beam_radius(double z) const;  // w(z)
  double gouy_phase(double z) const;   // rho(z)
  /// kr^2 / (2 R(z)), with the z -> 0 limit taken as 0.
  double curvature_phase(double z, double r2) const;
};

/// Throws DomainError unless the pulse is well formed.
void validate(const Pulse& p);

/// Field envelope at retarded time tau = t - t_center - z/c:
/// exp(-2 ln2 (tau/t_fwhm)^2) or exp(-ln2 (2 tau/t_fwhm)^(2 order)). t_fwhm is the
/// intensity FWHM of the Gaussian and the field FWHM of the super-Gaussian.
double envelope(const Pulse& p, double tau, const PhysicalConstants& k = codata);

struct FieldSample {
  Vec3 E{};
  Vec3 B{};
};

/// E along the polarization, B = direction x E / c.
FieldSample pulse_field(const Pulse& p, const Vec3& r, double t, const PhysicalConstants& k = codata);

/// Vector potential of the quiver motion, E0 (...) cos(phi + rho) / omega along the
/// polarization (envelope and beam-shape derivatives neglected).
Vec3 pulse_vector_potential(const Pulse& p, const Vec3& r, double t, const PhysicalConstants& k = codata);

struct ParticleState {
  Vec3 r{};  // [m]
  Vec3 u{};  // gamma v [m/s]
  double t = 0.0;

  double gamma(const PhysicalConstants& k = codata) const;
  Vec3 velocity(const PhysicalConstants& k = codata) const;
  double kinetic_energy(const PhysicalConstants& k = codata) const;
};

enum class Integrator { DormandPrince, RK4 };

struct PushOptions {
  Integrator integrator = Integrator::DormandPrince;
  double rtol = 1e-10;
  /// Absolute error floors are rtol * length_scale for positions and rtol * c for u.
  /// 0 picks the shortest pulse wavelength (1 um without pulses).
  double length_scale = 0.0;
  double rk4_step = 0.0;         // fixed step for RK4 [s]
  double max_step = 0.0;         // 0: a quarter of the shortest optical period
};

struct PushStats {
  std::size_t steps = 0;
  std::size_t rejected = 0;
  std::size_t evaluations = 0;
};

/// Lorentz-force trace of an electron-charge particle from state.t to state.t + dt.
ParticleState push(const ParticleState& state, const std::vector<Pulse>& pulses, double dt,
                   const PushOptions& options = {}, PushStats* stats = nullptr, const PhysicalConstants& k = codata);

/// Same for a uniform static field (used by the property tests).
ParticleState push_static(const ParticleState& state, const Vec3& E, const Vec3& B, double dt,
                          const PushOptions& options = {}, PushStats* stats = nullptr,
                          const PhysicalConstants& k = codata);

enum class Geometry { InelasticGaussian, InelasticSuperGaussian, ElasticGaussian };

Geometry geometry_from_string(const std::string& name);
std::string to_string(Geometry g);

/// Effective interaction time: t_fwhm sqrt(pi / (4 ln2 (1 + beta^2))) for Gaussian
/// inelastic, t_fwhm for super-Gaussian, t_fwhm sqrt(pi / (4 ln2)) for elastic.
double effective_time(double t_fwhm, double beta, Geometry g);
/// Overload taking the geometry name; unknown names raise ConfigError.
double effective_time(double t_fwhm, double beta, const std::string& geometry);

/// Counterpropagating pair along z: the shorter wavelength travels along +z so the
/// beat moves with v_g = c (w1 - w2) / (w1 + w2). E0 is set from the potential amplitude.
std::array<Pulse, 2> inelastic_pulses(double lambda1, double lambda2, double amplitude, double waist,
                                      Envelope envelope, const PhysicalConstants& k = codata);

/// Beat velocity c (w1 - w2) / (w1 + w2) of a counterpropagating pair along z,
/// signed along +z. Equal wavelengths give 0.
double beat_velocity(const std::array<Pulse, 2>& pulses, const PhysicalConstants& k = codata);

/// Standing wave of two equal pulses whose common axis is tilted by alpha from
/// the x axis towards -z; electrons travel along +z.
std::array<Pulse, 2> elastic_pulses(double lambda, double field_amplitude, double waist, double alpha);

struct TracerEnsemble {
  std::size_t n_particles = 1000;
  std::uint64_t seed = 1;
  double sigma_xy = 20e-6;         // [m]
  double sigma_z = 30e-6;          // [m]
  double reference_speed = 0.0;    // [m/s], along +z
  double energy_mean = 0.0;        // kinetic-energy offset from the reference electron [J]
  double energy_fwhm = 0.0;        // [J]
};

enum class Observable { EnergyOffset, DeflectionAngle };

struct TracerScenario {
  std::array<Pulse, 2> pulses;
  TracerEnsemble ensemble;
  std::vector<double> t_fwhm;  // sweep [s], applied to both pulses
  Geometry geometry = Geometry::InelasticGaussian;
  Axis observable_axis;        // [J] or [rad]
  PushOptions push;
  /// Tracing starts and ends where the product of the two envelopes on the
  /// particle's straight-line path drops below this value.
  double envelope_cutoff = 1e-6;
  /// Cap on total field evaluations over the whole run; 0 disables it.
  std::uint64_t evaluation_budget = 0;
};

/// Initial state of particle `index` at t = 0 (before any field is met).
ParticleState initial_particle(const TracerEnsemble& e, std::size_t index, const PhysicalConstants& k = codata);

/// Straight-line interval outside which the product of envelopes is below the cutoff.
std::array<double, 2> interaction_window(const std::array<Pulse, 2>& pulses, const ParticleState& at_zero,
                                         double cutoff, const PhysicalConstants& k = codata);

struct TraceResult {
  ParticleState final_state;  // drift state (quiver removed) at the window end
  PushStats stats;
  bool failed = false;
};

/// Traces one particle through the pulses; the initial state is the drift state at t = 0.
TraceResult trace(const std::array<Pulse, 2>& pulses, const ParticleState& at_zero, const PushOptions& options,
                  double cutoff, const PhysicalConstants& k = codata);

/// Kinetic-energy offset from the reference electron, after the pulses.
SpectralDensityGrid run_inelastic(const TracerScenario& s, unsigned workers = 0, const PhysicalConstants& k = codata);

/// Deflection angle atan2(u_x, u_z) from the initial +z direction, after the pulses.
SpectralDensityGrid run_elastic(const TracerScenario& s, unsigned workers = 0, const PhysicalConstants& k = codata);

}  // namespace ponder::tracer
