#include "ponder/qm_parabolic.hpp"

#include <algorithm>
#include <cmath>

#include "ponder/classical.hpp"
#include "ponder/errors.hpp"
#include "ponder/parallel.hpp"
#include "ponder/random.hpp"

namespace ponder::qm {

namespace {

using cplx = std::complex<double>;

constexpr double quarter_root_pi_inv = 0.75112554446494248286;  // pi^(-1/4)

// Spatial half-extent outside which phi_0 is negligible.
double packet_extent(const LHOBasis& basis, const WavepacketSpec& spec) {
  if (const auto* g = std::get_if<GaussianPacket>(&spec)) {
    const double sigma_q = basis.hbar / (2.0 * g->sigma_p);
    return 13.0 * sigma_q;  // exp(-q^2 / 4 sigma^2) < 1e-18
  }
  const auto& s = std::get<SuperGaussianPacket>(spec);
  // (6q/lambda)^(2n) = 45
  return basis.spatial_period / 6.0 * std::pow(45.0, 1.0 / (2.0 * s.order));
}

double raw_profile(const LHOBasis& basis, const WavepacketSpec& spec, double q) {
  if (const auto* g = std::get_if<GaussianPacket>(&spec)) {
    const double sigma_q = basis.hbar / (2.0 * g->sigma_p);
    return std::exp(-q * q / (4.0 * sigma_q * sigma_q)) / std::sqrt(std::sqrt(2.0 * pi) * sigma_q);
  }
  const auto& s = std::get<SuperGaussianPacket>(spec);
  return std::exp(-std::pow(6.0 * q / basis.spatial_period, 2.0 * s.order));
}

double mean_momentum(const WavepacketSpec& spec) {
  return std::visit([](const auto& p) { return p.mean_momentum; }, spec);
}

void check_spec(const LHOBasis& basis, const WavepacketSpec& spec) {
  if (!(basis.omega > 0.0) || !(basis.mass > 0.0) || !(basis.hbar > 0.0)) {
    throw DomainError("oscillator basis needs positive omega, mass and hbar");
  }
  if (const auto* g = std::get_if<GaussianPacket>(&spec)) {
    if (!(g->sigma_p > 0.0)) throw DomainError("gaussian packet needs sigma_p > 0");
  } else {
    const auto& s = std::get<SuperGaussianPacket>(spec);
    if (s.order == 0) throw DomainError("super-gaussian order must be at least 1");
    if (!(basis.spatial_period > 0.0)) throw DomainError("super-gaussian packet needs the spatial period");
  }
}

struct Quadrature {
  std::vector<cplx> c;
  double norm2 = 0.0;     // integral of |raw profile|^2
  double outside = 0.0;   // integral of |raw profile|^2 over |q| > lambda/4
};

// Trapezoid rule on [-L, L]; spectrally accurate for smooth decaying integrands.
Quadrature project(const LHOBasis& basis, const WavepacketSpec& spec, std::size_t count, double half_width,
                   std::size_t points) {
  Quadrature out;
  out.c.assign(count, cplx{});
  const double ell = basis.length();
  const double h = 2.0 * half_width / static_cast<double>(points);
  const double k0 = mean_momentum(spec) / basis.hbar;
  const double quarter = 0.25 * basis.spatial_period;
  std::vector<double> hf;
  for (std::size_t i = 0; i <= points; ++i) {
    const double q = -half_width + h * static_cast<double>(i);
    const double w = (i == 0 || i == points) ? 0.5 * h : h;
    const double amp = raw_profile(basis, spec, q);
    if (amp == 0.0) continue;
    const double a2 = amp * amp * w;
    out.norm2 += a2;
    if (std::abs(q) > quarter) out.outside += a2;
    hermite_functions(q / ell, count, hf);
    const cplx phase = std::polar(amp * w / std::sqrt(ell), k0 * q);
    for (std::size_t n = 0; n < count; ++n) out.c[n] += hf[n] * phase;
  }
  return out;
}

}  // namespace

double LHOBasis::length() const { return std::sqrt(hbar / (mass * omega)); }

double LHOBasis::energy(std::size_t n) const { return hbar * omega * (static_cast<double>(n) + 0.5); }

LHOBasis lho_basis(const PotentialParams& pot, std::size_t n_max, const PhysicalConstants& k) {
  validate(pot, k);
  if (!(pot.amplitude > 0.0)) throw DomainError("oscillator basis needs a positive amplitude");
  LHOBasis b;
  b.mass = k.electron_mass;
  b.hbar = k.hbar;
  b.omega = pi / pot.spatial_period * std::sqrt(2.0 * pot.amplitude / k.electron_mass);
  b.n_max = n_max;
  b.spatial_period = pot.spatial_period;
  return b;
}

double hermite_eval(unsigned n, double x) {
  double h0 = 1.0;
  if (n == 0) return h0;
  double h1 = 2.0 * x;
  for (unsigned k = 1; k < n; ++k) {
    const double h2 = 2.0 * x * h1 - 2.0 * k * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

void hermite_functions(double x, std::size_t count, std::vector<double>& out) {
  out.assign(count, 0.0);
  if (count == 0) return;
  // Recurrence on mantissas with a running log-scale; the gaussian factor
  // exp(-x^2/2) is folded into the scale so it never underflows early.
  double log_scale = -0.5 * x * x;
  double factor = 0.0;
  bool direct = false;
  auto refresh = [&] {
    direct = std::abs(log_scale) < 700.0;
    factor = direct ? std::exp(log_scale) : 0.0;
  };
  auto emit = [&](std::size_t n, double v) {
    if (direct) {
      out[n] = v * factor;
    } else if (v != 0.0) {
      const double e = log_scale + std::log(std::abs(v));
      out[n] = e < -745.0 ? 0.0 : std::copysign(std::exp(e), v);
    }
  };
  refresh();
  double prev = 0.0;
  double cur = quarter_root_pi_inv;
  emit(0, cur);
  for (std::size_t n = 0; n + 1 < count; ++n) {
    const double nd = static_cast<double>(n);
    const double next = std::sqrt(2.0 / (nd + 1.0)) * x * cur - std::sqrt(nd / (nd + 1.0)) * prev;
    prev = cur;
    cur = next;
    const double mag = std::abs(cur);
    if (mag > 1e150 || (mag < 1e-150 && mag > 0.0)) {
      const int e = std::ilogb(cur);
      prev = std::ldexp(prev, -e);
      cur = std::ldexp(cur, -e);
      log_scale += e * 0.69314718055994530942;
      refresh();
    }
    emit(n + 1, cur);
  }
}

double eigenstate(const LHOBasis& basis, std::size_t n, double q) {
  std::vector<double> hf;
  const double ell = basis.length();
  hermite_functions(q / ell, n + 1, hf);
  return hf[n] / std::sqrt(ell);
}

double gaussian_sigma_p(double position_fwhm, double hbar) {
  if (!(position_fwhm > 0.0)) throw DomainError("position FWHM must be positive");
  return hbar / (2.0 * sigma_from_fwhm(position_fwhm));
}

std::complex<double> initial_wavefunction(const LHOBasis& basis, const WavepacketSpec& spec, double q) {
  check_spec(basis, spec);
  double norm = 1.0;
  if (std::holds_alternative<SuperGaussianPacket>(spec)) {
    const double L = packet_extent(basis, spec);
    norm = std::sqrt(project(basis, spec, 0, L, 4096).norm2);
  }
  return std::polar(raw_profile(basis, spec, q) / norm, mean_momentum(spec) * q / basis.hbar);
}

CoefficientVector decompose(const LHOBasis& basis, const WavepacketSpec& spec, double eps, std::size_t cap) {
  check_spec(basis, spec);
  const double ell = basis.length();
  const double extent = packet_extent(basis, spec);
  std::size_t n_max = std::min(std::max<std::size_t>(basis.n_max, 1), std::max<std::size_t>(cap, 1));
  for (;;) {
    const std::size_t count = n_max + 1;
    // Both phi_0 and the retained eigenstates must be resolved on the grid.
    const double half_width = std::max(extent, (std::sqrt(2.0 * count + 1.0) + 12.0) * ell);
    std::size_t points = 256;
    Quadrature prev = project(basis, spec, count, half_width, points);
    for (;;) {
      points *= 2;
      Quadrature next = project(basis, spec, count, half_width, points);
      double change = 0.0;
      const double s_prev = 1.0 / std::sqrt(prev.norm2), s_next = 1.0 / std::sqrt(next.norm2);
      for (std::size_t n = 0; n < count; ++n) change = std::max(change, std::abs(next.c[n] * s_next - prev.c[n] * s_prev));
      prev = std::move(next);
      if (change < 1e-12) break;
      if (points > (1u << 22)) throw TruncationError("decompose: quadrature did not converge");
    }
    CoefficientVector out;
    const double s = 1.0 / std::sqrt(prev.norm2);
    out.c.resize(count);
    for (std::size_t n = 0; n < count; ++n) {
      out.c[n] = prev.c[n] * s;
      out.captured_norm += std::norm(out.c[n]);
    }
    out.outside_quarter_probability = prev.outside / prev.norm2;
    out.quadrature_points = points;
    if (out.captured_norm >= 1.0 - eps) return out;
    if (n_max >= cap) {
      throw TruncationError("decompose: captured norm " + std::to_string(out.captured_norm) +
                            " below target at the truncation cap");
    }
    n_max = std::min(cap, 2 * n_max);
  }
}

std::complex<double> momentum_amplitude(const LHOBasis& basis, const CoefficientVector& coeffs, double t, double p) {
  const double ell = basis.length();
  std::vector<double> hf;
  hermite_functions(p * ell / basis.hbar, coeffs.c.size(), hf);
  // psi_n in momentum space is (-i)^n sqrt(ell/hbar) h_n(p ell / hbar)
  const cplx step = std::polar(1.0, -basis.omega * t) * cplx(0.0, -1.0);
  cplx phase = 1.0, acc = 0.0;
  for (std::size_t n = 0; n < coeffs.c.size(); ++n) {
    acc += coeffs.c[n] * phase * hf[n];
    phase *= step;
    if ((n & 31u) == 31u) phase /= std::abs(phase);
  }
  return acc * std::sqrt(ell / basis.hbar);
}

double momentum_density(const LHOBasis& basis, const CoefficientVector& coeffs, double t, double p) {
  return std::norm(momentum_amplitude(basis, coeffs, t, p));
}

namespace {
// <a>(t) = sum sqrt(n+1) c_n^* c_{n+1} e^{-i Omega t}
cplx lowering_expectation(const LHOBasis& basis, const CoefficientVector& coeffs, double t) {
  cplx acc = 0.0;
  for (std::size_t n = 0; n + 1 < coeffs.c.size(); ++n) {
    acc += std::sqrt(static_cast<double>(n + 1)) * std::conj(coeffs.c[n]) * coeffs.c[n + 1];
  }
  return acc * std::polar(1.0, -basis.omega * t);
}
}  // namespace

double expectation_position(const LHOBasis& basis, const CoefficientVector& coeffs, double t) {
  return std::sqrt(2.0) * basis.length() * lowering_expectation(basis, coeffs, t).real();
}

double expectation_momentum(const LHOBasis& basis, const CoefficientVector& coeffs, double t) {
  return std::sqrt(2.0) * basis.hbar / basis.length() * lowering_expectation(basis, coeffs, t).imag();
}

double momentum_for_energy_offset(double dE, double v_g, const PhysicalConstants& k) {
  return k.electron_mass * classical::delta_v_from_energy_offset(dE, v_g, k);
}

SpectralDensityGrid evolve_momentum_density(const LHOBasis& basis, const CoefficientVector& coeffs,
                                            const std::vector<double>& times, const Axis& energy_axis, double v_g,
                                            unsigned workers) {
  if (times.empty()) throw DomainError("evolve_momentum_density needs at least one time");
  energy_axis.validate();
  const std::size_t nt = times.size(), ne = energy_axis.bins();
  std::vector<double> p_edges(ne + 1);
  for (std::size_t i = 0; i <= ne; ++i) p_edges[i] = momentum_for_energy_offset(energy_axis.edges[i], v_g);
  // 4-point Gauss-Legendre inside each momentum bin
  constexpr double gx[4] = {-0.86113631159405258, -0.33998104358485626, 0.33998104358485626, 0.86113631159405258};
  constexpr double gw[4] = {0.34785484513745386, 0.65214515486254614, 0.65214515486254614, 0.34785484513745386};
  std::vector<double> prob(nt * ne, 0.0);
  parallel_for(nt, workers, [&](std::size_t s, unsigned) {
    for (std::size_t e = 0; e < ne; ++e) {
      const double a = p_edges[e], b = p_edges[e + 1];
      const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
      double acc = 0.0;
      for (int g = 0; g < 4; ++g) acc += gw[g] * momentum_density(basis, coeffs, times[s], mid + half * gx[g]);
      prob[s * ne + e] = acc * half;
    }
  }, 1);
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
  grid.metadata["basis_size"] = coeffs.c.size();
  grid.metadata["captured_norm"] = coeffs.captured_norm;
  return grid;
}

}  // namespace ponder::qm
