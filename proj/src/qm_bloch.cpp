#include "ponder/qm_bloch.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ponder/classical.hpp"
#include "ponder/errors.hpp"
#include "ponder/parallel.hpp"

namespace ponder::qm {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double level_wavenumber(const BlochProblem& p, int j) { return p.k0 + two_pi * j / p.pot.spatial_period; }

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

void check(const BlochProblem& p, const PhysicalConstants& k) {
  validate(p.pot, k);
  if (!(p.j_min < 0 && 0 < p.j_max)) throw DomainError("Bloch truncation must satisfy j_min < 0 < j_max");
  if (!std::isfinite(p.k0)) throw DomainError("Bloch k0 must be finite");
}

}  // namespace

double wavenumber_for_energy_offset(double dE0, double v_g, const PhysicalConstants& k) {
  return k.electron_mass * classical::delta_v_from_energy_offset(dE0, v_g, k) / k.hbar;
}

SymmetricTridiagonal hamiltonian_matrix(const BlochProblem& problem, const PhysicalConstants& k) {
  check(problem, k);
  const double a = problem.pot.amplitude;
  const std::size_t n = static_cast<std::size_t>(problem.j_max - problem.j_min + 1);
  SymmetricTridiagonal h;
  h.diagonal.resize(n);
  h.off_diagonal.assign(n - 1, -0.25 * a);
  for (std::size_t i = 0; i < n; ++i) {
    const double kj = level_wavenumber(problem, problem.j_min + static_cast<int>(i));
    h.diagonal[i] = 0.5 * a + k.hbar * k.hbar * kj * kj / (2.0 * k.electron_mass);
  }
  return h;
}

BlochSolution solve_fixed(const BlochProblem& problem, const PhysicalConstants& k) {
  const auto h = hamiltonian_matrix(problem, k);
  auto eig = eigen_decompose(h);
  BlochSolution sol;
  sol.problem = problem;
  sol.energies = std::move(eig.values);
  sol.coeffs = std::move(eig.vectors);
  sol.hamiltonian_norm = h.norm_inf();
  for (std::size_t n = 0; n < sol.dimension(); ++n) {
    const double c0 = sol.c(n, 0);
    if (c0 * c0 > retention_floor) sol.retained.push_back(n);
    if (c0 * c0 > summation_floor) sol.contributing.push_back(n);
  }
  return sol;
}

namespace {

double edge_coefficient(const BlochSolution& sol) {
  double worst = 0.0;
  for (std::size_t n : sol.retained) {
    worst = std::max({worst, std::abs(sol.c(n, sol.problem.j_min)), std::abs(sol.c(n, sol.problem.j_max))});
  }
  return worst;
}

// Largest |Sigma_j|^2 difference between a solution and its doubled counterpart.
double occupancy_change(const BlochSolution& small, const BlochSolution& big, const std::vector<double>& times,
                        const PhysicalConstants& k) {
  if (times.empty()) return 0.0;
  const auto a = occupancy(small, times, k);
  const auto b = occupancy(big, times, k);
  const int offset = small.problem.j_min - big.problem.j_min;
  double worst = 0.0;
  for (std::size_t t = 0; t < times.size(); ++t) {
    for (std::size_t l = 0; l < b.level_count(); ++l) {
      const int la = static_cast<int>(l) - offset;
      const double pa = (la >= 0 && la < static_cast<int>(a.level_count())) ? std::norm(a.at(t, la)) : 0.0;
      worst = std::max(worst, std::abs(pa - std::norm(b.at(t, l))));
    }
  }
  return worst;
}

}  // namespace

BlochSolution solve(const BlochProblem& problem, const TruncationPolicy& policy, const PhysicalConstants& k) {
  if (policy.initial_half_width < 1 || policy.max_half_width < policy.initial_half_width) {
    throw DomainError("truncation policy half widths must satisfy 1 <= initial <= max");
  }
  std::vector<double> probes = policy.probe_times;
  if (probes.empty() && problem.pot.amplitude > 0.0) {
    const double t_lin = classical::linearized_period(problem.pot, k);
    for (int i = 1; i <= 8; ++i) probes.push_back(0.25 * i * t_lin);
  }
  BlochProblem p = problem;
  for (int h = policy.initial_half_width; h <= policy.max_half_width; h *= 2) {
    p.j_min = -h;
    p.j_max = h;
    auto sol = solve_fixed(p, k);
    if (edge_coefficient(sol) >= policy.edge_tolerance) continue;
    BlochProblem doubled = p;
    doubled.j_min = -2 * h;
    doubled.j_max = 2 * h;
    const auto big = solve_fixed(doubled, k);
    if (occupancy_change(sol, big, probes, k) < policy.occupancy_tolerance) return sol;
  }
  throw TruncationError("Bloch truncation did not converge within |j| <= " + std::to_string(policy.max_half_width));
}

double MomentumSpectrum::total(std::size_t t) const {
  double s = 0.0;
  for (std::size_t l = 0; l < levels.size(); ++l) s += std::norm(at(t, l));
  return s;
}

MomentumSpectrum occupancy(const BlochSolution& sol, const std::vector<double>& times, const PhysicalConstants& k) {
  const auto& p = sol.problem;
  const std::size_t dim = sol.dimension();
  MomentumSpectrum out;
  out.times = times;
  for (int j = p.j_min; j <= p.j_max; ++j) {
    out.levels.push_back(j);
    out.momenta.push_back(k.hbar * level_wavenumber(p, j));
  }
  out.occupancies.assign(times.size() * dim, {0.0, 0.0});
  for (std::size_t t = 0; t < times.size(); ++t) {
    auto* row = &out.occupancies[t * dim];
    for (std::size_t n : sol.contributing) {
      const double phase = -sol.energies[n] * times[t] / k.hbar;
      const std::complex<double> w = sol.c(n, 0) * std::polar(1.0, phase);
      const double* cn = &sol.coeffs[n * dim];
      for (std::size_t l = 0; l < dim; ++l) row[l] += w * cn[l];
    }
  }
  return out;
}

double momentum_level_energy(const BlochSolution& sol, int j, const PhysicalConstants& k) {
  if (j < sol.problem.j_min || j > sol.problem.j_max) throw DomainError("momentum level outside the truncation");
  const double qdot = k.hbar * level_wavenumber(sol.problem, j) / k.electron_mass;
  return classical::energy_offset(qdot, sol.problem.pot.group_velocity, k);
}

std::vector<PlaneWaveWeight> gaussian_energy_weights(double mean, double fwhm, double v_g, std::size_t count,
                                                     double span_fwhm, WeightMode mode, const PhysicalConstants& k) {
  if (count == 0) throw DomainError("gaussian_energy_weights needs at least one plane wave");
  if (!(fwhm > 0.0) || !(span_fwhm > 0.0)) throw DomainError("gaussian_energy_weights needs positive widths");
  const double sigma = fwhm / (2.0 * std::sqrt(2.0 * std::numbers::ln2));
  const double k_lo = wavenumber_for_energy_offset(mean - span_fwhm * fwhm, v_g, k);
  const double k_hi = wavenumber_for_energy_offset(mean + span_fwhm * fwhm, v_g, k);
  const double dk = (k_hi - k_lo) / static_cast<double>(count);
  auto energy_at = [&](double kk) { return classical::energy_offset(k.hbar * kk / k.electron_mass, v_g, k); };
  std::vector<PlaneWaveWeight> out(count);
  double total = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double ka = k_lo + dk * static_cast<double>(i), kb = ka + dk, kc = ka + 0.5 * dk;
    const double ea = energy_at(ka), eb = energy_at(kb);
    double prob;
    if (mode == WeightMode::CellIntegrated) {
      prob = std::abs(normal_cdf((eb - mean) / sigma) - normal_cdf((ea - mean) / sigma));
    } else {
      const double z = (energy_at(kc) - mean) / sigma;
      prob = std::exp(-0.5 * z * z) * std::abs(eb - ea);
    }
    out[i].k0 = kc;
    out[i].weight = prob;
    total += prob;
  }
  for (auto& w : out) w.weight = std::sqrt(w.weight / total);
  return out;
}

SpectralDensityGrid wavepacket_evolution(const std::vector<PlaneWaveWeight>& weights, const PotentialParams& pot,
                                         const std::vector<double>& times, const Axis& energy_axis,
                                         const WavepacketOptions& options, unsigned workers,
                                         const PhysicalConstants& k) {
  if (weights.empty()) throw DomainError("wavepacket_evolution needs at least one plane wave");
  if (times.empty()) throw DomainError("wavepacket_evolution needs at least one time");
  if (options.blur_fwhm < 0.0) throw DomainError("blur width must be non-negative");
  energy_axis.validate();
  double norm = 0.0;
  for (const auto& w : weights) norm += w.weight * w.weight;
  if (std::abs(norm - 1.0) > 1e-9) throw DomainError("plane-wave weights must satisfy sum |w|^2 = 1");

  const std::size_t nt = times.size(), ne = energy_axis.bins();
  const auto& edges = energy_axis.edges;
  const double sigma = options.blur_fwhm / (2.0 * std::sqrt(2.0 * std::numbers::ln2));
  const unsigned slots = worker_slots(weights.size(), workers, 1);
  std::vector<std::vector<double>> acc(slots, std::vector<double>(nt * ne, 0.0));
  std::vector<int> half_width(weights.size(), 0);

  parallel_for(weights.size(), workers, [&](std::size_t i, unsigned worker) {
    BlochProblem problem{weights[i].k0, pot, -1, 1};
    const auto sol = solve(problem, options.truncation, k);
    half_width[i] = sol.problem.j_max;
    const auto spec = occupancy(sol, times, k);
    const double w2 = weights[i].weight * weights[i].weight;
    auto& out = acc[worker];
    for (std::size_t l = 0; l < spec.level_count(); ++l) {
      const double e = momentum_level_energy(sol, spec.levels[l], k);
      if (sigma > 0.0) {
        const auto lo = std::lower_bound(edges.begin(), edges.end(), e - 10.0 * sigma);
        const auto hi = std::upper_bound(edges.begin(), edges.end(), e + 10.0 * sigma);
        const std::size_t b0 = lo == edges.begin() ? 0 : static_cast<std::size_t>(lo - edges.begin()) - 1;
        const std::size_t b1 = std::min<std::size_t>(ne, static_cast<std::size_t>(hi - edges.begin()));
        for (std::size_t b = b0; b < b1; ++b) {
          const double frac = normal_cdf((edges[b + 1] - e) / sigma) - normal_cdf((edges[b] - e) / sigma);
          if (frac <= 0.0) continue;
          for (std::size_t t = 0; t < nt; ++t) out[t * ne + b] += w2 * frac * std::norm(spec.at(t, l));
        }
      } else if (const auto b = energy_axis.locate(e)) {
        for (std::size_t t = 0; t < nt; ++t) out[t * ne + *b] += w2 * std::norm(spec.at(t, l));
      }
    }
  }, 1);

  std::vector<double> prob(nt * ne, 0.0);
  for (const auto& a : acc) {
    for (std::size_t i = 0; i < prob.size(); ++i) prob[i] += a[i];
  }
  SpectralDensityGrid grid;
  grid.sweep = Axis::from_centers("time", "s", times);
  grid.observable = energy_axis;
  grid.density.assign(nt * ne, 0.0);
  grid.outside.assign(nt, 0);
  std::vector<double> captured(nt, 0.0);
  for (std::size_t s = 0; s < nt; ++s) {
    double total = 0.0;
    for (std::size_t e = 0; e < ne; ++e) total += prob[s * ne + e];
    captured[s] = total;
    if (total <= 0.0) continue;
    for (std::size_t e = 0; e < ne; ++e) grid.density[e * nt + s] = prob[s * ne + e] / total;
  }
  grid.metadata["captured_probability"] = captured;
  grid.metadata["plane_waves"] = weights.size();
  grid.metadata["max_truncation_half_width"] = *std::max_element(half_width.begin(), half_width.end());
  grid.metadata["blur_fwhm_J"] = options.blur_fwhm;
  return grid;
}

using cld = std::complex<long double>;

struct GridPropagator::Plans {
  fftwl_plan forward = nullptr;
  fftwl_plan backward = nullptr;
  std::vector<cld> buffer;
};

namespace {

// plain product; std::complex operator* adds inf/nan recovery we do not need
inline void mul(cld& a, const cld& b) {
  const long double re = a.real() * b.real() - a.imag() * b.imag();
  const long double im = a.real() * b.imag() + a.imag() * b.real();
  a = {re, im};
}

}  // namespace

GridPropagator::GridPropagator(double k0, const PotentialParams& pot, std::size_t points, double dt,
                               const PhysicalConstants& k)
    : n_(points), dt_(dt), lambda_(pot.spatial_period), plans_(std::make_unique<Plans>()) {
  validate(pot, k);
  if (points < 4 || (points & (points - 1)) != 0) throw DomainError("grid size must be a power of two >= 4");
  if (!(dt > 0.0)) throw DomainError("time step must be positive");
  half_potential_.resize(n_);
  full_potential_.resize(n_);
  kinetic_.resize(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    const long double v = 0.5L * pot.amplitude * (1.0L - std::cos(2.0L * std::numbers::pi_v<long double> *
                                                                  static_cast<long double>(i) / n_));
    const long double phase = -v * dt / k.hbar;
    half_potential_[i] = std::polar(1.0L, 0.5L * phase);
    full_potential_[i] = std::polar(1.0L, phase);
    const long j = i < n_ / 2 ? static_cast<long>(i) : static_cast<long>(i) - static_cast<long>(n_);
    const long double kj = k0 + 2.0L * std::numbers::pi_v<long double> * j / lambda_;
    // the 1/N of the inverse transform is folded in here
    kinetic_[i] = std::polar(1.0L / n_, -k.hbar * kj * kj * dt / (2.0L * k.electron_mass));
  }
  plans_->buffer.resize(n_);
  auto* buf = reinterpret_cast<fftwl_complex*>(plans_->buffer.data());
  const int n = static_cast<int>(n_);
  plans_->forward = fftwl_plan_dft_1d(n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  plans_->backward = fftwl_plan_dft_1d(n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!plans_->forward || !plans_->backward) throw DomainError("FFTW planning failed");
}

GridPropagator::~GridPropagator() {
  if (plans_->forward) fftwl_destroy_plan(plans_->forward);
  if (plans_->backward) fftwl_destroy_plan(plans_->backward);
}

double GridPropagator::x(std::size_t i) const { return lambda_ * static_cast<double>(i) / static_cast<double>(n_); }

std::vector<std::complex<double>> GridPropagator::plane_wave() const {
  return std::vector<std::complex<double>>(n_, {1.0 / std::sqrt(lambda_), 0.0});
}

void GridPropagator::step(std::vector<std::complex<double>>& u, std::size_t steps) const {
  if (u.size() != n_) throw DomainError("wavefunction size does not match the grid");
  if (steps == 0) return;
  std::vector<cld> w(u.begin(), u.end());
  auto* buf = reinterpret_cast<fftwl_complex*>(w.data());
  for (std::size_t i = 0; i < n_; ++i) mul(w[i], half_potential_[i]);
  for (std::size_t s = 0; s < steps; ++s) {
    fftwl_execute_dft(plans_->forward, buf, buf);
    for (std::size_t i = 0; i < n_; ++i) mul(w[i], kinetic_[i]);
    fftwl_execute_dft(plans_->backward, buf, buf);
    // adjacent half steps of the potential merge into one full step
    const auto& v = s + 1 < steps ? full_potential_ : half_potential_;
    for (std::size_t i = 0; i < n_; ++i) mul(w[i], v[i]);
  }
  for (std::size_t i = 0; i < n_; ++i) u[i] = std::complex<double>(w[i]);
}

std::vector<std::complex<double>> GridPropagator::amplitudes(const std::vector<std::complex<double>>& u) const {
  if (u.size() != n_) throw DomainError("wavefunction size does not match the grid");
  std::vector<cld> f(u.begin(), u.end());
  auto* buf = reinterpret_cast<fftwl_complex*>(f.data());
  fftwl_execute_dft(plans_->forward, buf, buf);
  const long double scale = std::sqrt(static_cast<long double>(lambda_)) / n_;
  std::vector<std::complex<double>> out(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t idx = i < n_ / 2 ? i + n_ / 2 : i - n_ / 2;
    out[idx] = std::complex<double>(f[i] * scale);
  }
  return out;
}

std::vector<std::complex<double>> GridPropagator::from_occupancy(const MomentumSpectrum& spec, std::size_t t) const {
  std::vector<std::complex<double>> u(n_, {0.0, 0.0});
  const long half = static_cast<long>(n_ / 2);
  const double inv = 1.0 / std::sqrt(lambda_);
  for (std::size_t l = 0; l < spec.level_count(); ++l) {
    const long j = spec.levels[l];
    if (j < -half || j >= half) continue;
    const std::complex<double> a = spec.at(t, l) * inv;
    if (a == 0.0) continue;
    for (std::size_t i = 0; i < n_; ++i) {
      // exact integer reduction keeps the phase accurate for large j
      const long m = (j * static_cast<long>(i)) % static_cast<long>(n_);
      u[i] += a * std::polar(1.0, two_pi * static_cast<double>(m) / static_cast<double>(n_));
    }
  }
  return u;
}

double GridPropagator::norm(const std::vector<std::complex<double>>& u) const {
  double s = 0.0;
  for (const auto& z : u) s += std::norm(z);
  return s * lambda_ / static_cast<double>(n_);
}

double GridPropagator::distance(const std::vector<std::complex<double>>& a,
                                const std::vector<std::complex<double>>& b) const {
  if (a.size() != n_ || b.size() != n_) throw DomainError("wavefunction size does not match the grid");
  double s = 0.0;
  for (std::size_t i = 0; i < n_; ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s * lambda_ / static_cast<double>(n_));
}

std::vector<std::complex<double>> oracle_grid_propagate(double k0, const PotentialParams& pot, double t,
                                                        std::size_t points, double dt_target,
                                                        const PhysicalConstants& k) {
  if (!(t >= 0.0)) throw DomainError("propagation time must be non-negative");
  if (!(dt_target > 0.0)) throw DomainError("time step must be positive");
  const auto steps = static_cast<std::size_t>(std::ceil(t / dt_target));
  GridPropagator g(k0, pot, points, steps == 0 ? dt_target : t / static_cast<double>(steps), k);
  auto u = g.plane_wave();
  g.step(u, steps);
  return u;
}

}  // namespace ponder::qm
