#pragma once

// Quantum evolution in the full cosine potential, expanded in the discrete
// plane-wave ladder k0 + 2 pi j / lambda that a single initial plane wave couples to.
// Everything is computed in the potential's rest frame.

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

#include "ponder/beatwave.hpp"
#include "ponder/constants.hpp"
#include "ponder/grid.hpp"
#include "ponder/tridiagonal.hpp"

namespace ponder::qm {

struct BlochProblem {
  double k0 = 0.0;  // rest-frame wavenumber of the initial plane wave [1/m]
  PotentialParams pot;
  int j_min = -32;
  int j_max = 32;
};

/// Rest-frame wavenumber m dv(dE0) / hbar of a lab kinetic-energy offset.
double wavenumber_for_energy_offset(double dE0, double v_g, const PhysicalConstants& k = codata);

/// Diagonal A/2 + hbar^2 (k0 + 2 pi j / lambda)^2 / (2m), off-diagonal -A/4.
SymmetricTridiagonal hamiltonian_matrix(const BlochProblem& problem, const PhysicalConstants& k = codata);

struct BlochSolution {
  std::vector<double> energies;  // E_n ascending [J]
  std::vector<double> coeffs;    // c_nj, row-major (n, j - j_min)
  BlochProblem problem;
  double hamiltonian_norm = 0.0;
  /// Eigenstates with |c_n0|^2 above the retention floor; they set the
  /// truncation edge criterion.
  std::vector<std::size_t> retained;
  /// Eigenstates summed in Sigma_j (|c_n0|^2 above the summation floor).
  std::vector<std::size_t> contributing;

  std::size_t dimension() const { return energies.size(); }
  double c(std::size_t n, int j) const {
    return coeffs[n * dimension() + static_cast<std::size_t>(j - problem.j_min)];
  }
};

inline constexpr double retention_floor = 1e-16;
// States below this floor shift Sigma_j by at most 1e-16 each.
inline constexpr double summation_floor = 1e-32;

/// Eigen-decomposition at the problem's fixed truncation.
BlochSolution solve_fixed(const BlochProblem& problem, const PhysicalConstants& k = codata);

struct TruncationPolicy {
  int initial_half_width = 32;
  int max_half_width = 4096;
  double edge_tolerance = 1e-12;       // max |c_n,edge| over retained n
  double occupancy_tolerance = 1e-10;  // doubled-size |Sigma_j|^2 agreement
  /// Comparison times; empty selects 8 samples over two linearized periods.
  std::vector<double> probe_times;
};

/// Solves with the truncation grown (symmetric about j = 0) until the policy
/// holds. The problem's own j bounds are ignored. TruncationError past the cap.
BlochSolution solve(const BlochProblem& problem, const TruncationPolicy& policy = {},
                    const PhysicalConstants& k = codata);

struct MomentumSpectrum {
  std::vector<int> levels;                          // j
  std::vector<double> momenta;                      // p_j = hbar (k0 + 2 pi j / lambda)
  std::vector<double> times;
  std::vector<std::complex<double>> occupancies;    // Sigma_j(t), row-major (t, j)

  std::size_t level_count() const { return levels.size(); }
  std::complex<double> at(std::size_t t, std::size_t level) const { return occupancies[t * levels.size() + level]; }
  double total(std::size_t t) const;
};

/// Sigma_j(t) = sum over contributing n of c_n0 c_nj exp(-i E_n t / hbar).
MomentumSpectrum occupancy(const BlochSolution& sol, const std::vector<double>& times,
                           const PhysicalConstants& k = codata);

/// Lab kinetic-energy offset of level j.
double momentum_level_energy(const BlochSolution& sol, int j, const PhysicalConstants& k = codata);

struct PlaneWaveWeight {
  double k0 = 0.0;      // [1/m]
  double weight = 0.0;  // amplitude; |weight|^2 sums to 1
};

enum class WeightMode { CellIntegrated, CenterDensity };

/// Plane waves spread uniformly in k0 over mean +- span_fwhm * fwhm of a gaussian
/// energy-offset distribution, with |weight|^2 the probability of each k cell.
std::vector<PlaneWaveWeight> gaussian_energy_weights(double mean, double fwhm, double v_g, std::size_t count,
                                                     double span_fwhm = 2.0, WeightMode mode = WeightMode::CellIntegrated,
                                                     const PhysicalConstants& k = codata);

struct WavepacketOptions {
  double blur_fwhm = 0.0;  // gaussian smoothing of each level in energy [J]; 0 deposits into the bin
  TruncationPolicy truncation;
};

/// Incoherent sum of independent plane-wave solutions, binned in lab energy
/// offset and normalized per time column.
SpectralDensityGrid wavepacket_evolution(const std::vector<PlaneWaveWeight>& weights, const PotentialParams& pot,
                                         const std::vector<double>& times, const Axis& energy_axis,
                                         const WavepacketOptions& options = {}, unsigned workers = 0,
                                         const PhysicalConstants& k = codata);

/// Split-operator (Strang) propagation of the periodic part u(x) of
/// psi = exp(i k0 x) u(x) on one potential period. Independent of the
/// tridiagonal route; used to validate it. Runs in long double internally.
class GridPropagator {
 public:
  GridPropagator(double k0, const PotentialParams& pot, std::size_t points, double dt,
                 const PhysicalConstants& k = codata);
  ~GridPropagator();
  GridPropagator(const GridPropagator&) = delete;
  GridPropagator& operator=(const GridPropagator&) = delete;

  std::size_t points() const { return n_; }
  double dt() const { return dt_; }
  double x(std::size_t i) const;

  /// u for the bare plane wave (j = 0 only), unit norm over the period.
  std::vector<std::complex<double>> plane_wave() const;
  /// Advances u by `steps` full steps in place.
  void step(std::vector<std::complex<double>>& u, std::size_t steps) const;
  /// Plane-wave amplitudes a_j of u, j in [-points/2, points/2), indexed j + points/2.
  std::vector<std::complex<double>> amplitudes(const std::vector<std::complex<double>>& u) const;
  /// u from Bloch occupancies at one time sample.
  std::vector<std::complex<double>> from_occupancy(const MomentumSpectrum& spec, std::size_t t) const;
  /// Norm over the period, sum |u|^2 dx.
  double norm(const std::vector<std::complex<double>>& u) const;
  /// L2 distance over the period.
  double distance(const std::vector<std::complex<double>>& a, const std::vector<std::complex<double>>& b) const;

 private:
  std::size_t n_;
  double dt_;
  double lambda_;
  // extended precision keeps the accumulated FFT round-off below 1e-12 per 1e4 steps
  std::vector<std::complex<long double>> half_potential_;
  std::vector<std::complex<long double>> full_potential_;
  std::vector<std::complex<long double>> kinetic_;
  struct Plans;
  std::unique_ptr<Plans> plans_;
};

/// Convenience: propagate the plane wave to time t with steps = ceil(t / dt_target).
std::vector<std::complex<double>> oracle_grid_propagate(double k0, const PotentialParams& pot, double t,
                                                        std::size_t points = 256, double dt_target = 2e-17,
                                                        const PhysicalConstants& k = codata);

}  // namespace ponder::qm
