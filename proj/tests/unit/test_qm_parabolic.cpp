#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "ponder/classical.hpp"
#include "ponder/errors.hpp"
#include "ponder/qm_parabolic.hpp"

using namespace ponder;
using namespace ponder::qm;

namespace {
const double c = codata.speed_of_light;
const PotentialParams pot{30 * units::meV, 0.2 * c, 206 * units::nm};

double factorial(unsigned n) { return n == 0 ? 1.0 : n * factorial(n - 1); }

// Textbook closed form, fine for small n.
double textbook_eigenstate(const LHOBasis& b, unsigned n, double q) {
  const double x = q / b.length();
  return std::pow(1.0 / (pi * b.length() * b.length()), 0.25) / std::sqrt(std::pow(2.0, n) * factorial(n)) *
         std::exp(-0.5 * x * x) * hermite_eval(n, x);
}
}  // namespace

TEST_CASE("hermite polynomials") {
  CHECK(hermite_eval(0, 0.7) == 1.0);
  CHECK(hermite_eval(1, 0.7) == 1.4);
  CHECK(hermite_eval(4, 1.0) == -20.0);
  // Rodrigues / explicit form of H_5 = 32x^5 - 160x^3 + 120x
  const double x = 0.37;
  CHECK(hermite_eval(5, x) == doctest::Approx(32 * std::pow(x, 5) - 160 * std::pow(x, 3) + 120 * x).epsilon(1e-14));
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int i = 0; i < 100; ++i) {
    const double y = u(gen);
    for (unsigned n : {2u, 7u, 12u}) {
      CHECK(hermite_eval(n, -y) == doctest::Approx((n % 2 ? -1.0 : 1.0) * hermite_eval(n, y)).epsilon(1e-13));
    }
  }
}

TEST_CASE("eigenstates") {
  const auto b = lho_basis(pot);
  CHECK(b.omega == doctest::Approx(pi / pot.spatial_period * std::sqrt(2 * pot.amplitude / codata.electron_mass)));
  CHECK(b.length() == doctest::Approx(8.6e-9).epsilon(0.01));
  const double ell = b.length();
  for (unsigned n = 0; n <= 20; ++n) {
    for (double x : {-3.1, -0.4, 0.0, 1.3, 4.2}) {
      const double ref = textbook_eigenstate(b, n, x * ell);
      CHECK(std::abs(eigenstate(b, n, x * ell) - ref) < 1e-12 / std::sqrt(ell));
    }
  }
  // orthonormality under quadrature up to n = 60
  const std::size_t count = 61;
  std::vector<std::vector<double>> vals;
  const int pts = 6000;
  const double L = 16.0;
  std::vector<double> hf;
  std::vector<double> gram(count * count, 0.0);
  for (int i = 0; i <= pts; ++i) {
    const double x = -L + 2 * L * i / pts;
    hermite_functions(x, count, hf);
    const double w = 2 * L / pts * ((i == 0 || i == pts) ? 0.5 : 1.0);
    for (std::size_t m = 0; m < count; ++m)
      for (std::size_t n = m; n < count; n += 1) gram[m * count + n] += w * hf[m] * hf[n];
  }
  double worst = 0.0;
  for (std::size_t m = 0; m < count; ++m)
    for (std::size_t n = m; n < count; ++n) worst = std::max(worst, std::abs(gram[m * count + n] - (m == n ? 1.0 : 0.0)));
  CHECK(worst < 1e-10);

  // node count
  for (std::size_t n : {0u, 1u, 5u, 17u, 40u}) {
    int changes = 0;
    double last = eigenstate(b, n, -12 * ell);
    for (int i = 1; i <= 20000; ++i) {
      const double v = eigenstate(b, n, (-12 + 24.0 * i / 20000) * ell);
      if (v != 0.0 && last != 0.0 && (v > 0) != (last > 0)) ++changes;
      if (v != 0.0) last = v;
    }
    CHECK(changes == static_cast<int>(n));
  }

  // energy expectation from kinetic + potential quadrature
  const double m = b.mass;
  for (std::size_t n : {0u, 3u, 10u}) {
    const double h = 1e-3 * ell;
    const double e = oracle::integrate(
        [&](double q) {
          const double d = (eigenstate(b, n, q + h) - eigenstate(b, n, q - h)) / (2 * h);
          const double v = eigenstate(b, n, q);
          return 0.5 * b.hbar * b.hbar / m * d * d + 0.5 * m * b.omega * b.omega * q * q * v * v;
        },
        -12 * ell, 12 * ell, 1e-12 * b.energy(n));
    CHECK(e == doctest::Approx(b.energy(n)).epsilon(1e-6));
  }
}

TEST_CASE("large-order hermite functions stay finite") {
  std::vector<double> hf;
  hermite_functions(60.0, 2001, hf);
  for (double v : hf) CHECK(std::isfinite(v));
  CHECK(std::abs(hf[1800]) > 0.0);
  CHECK(std::abs(hf[1800]) < 1.0);
  hermite_functions(100.0, 10, hf);
  CHECK(hf[9] == 0.0);
}

TEST_CASE("decomposition") {
  const auto b = lho_basis(pot);
  const double ell = b.length();
  // ground state
  const auto g0 = decompose(b, GaussianPacket{0.0, b.hbar / (std::sqrt(2.0) * ell)});
  CHECK(std::abs(g0.c[0]) == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t n = 1; n < g0.c.size(); ++n) CHECK(std::abs(g0.c[n]) < 1e-12);

  // coherent state: Poissonian occupation with mean |alpha|^2
  const double mu = 2.0e-26;
  const auto coh = decompose(b, GaussianPacket{mu, b.hbar / (std::sqrt(2.0) * ell)});
  const double alpha2 = mu * mu / (2 * b.mass * b.hbar * b.omega);
  for (unsigned n = 0; n < 12; ++n) {
    const double ref = std::exp(-alpha2) * std::pow(alpha2, n) / factorial(n);
    CHECK(std::norm(coh.c[n]) == doctest::Approx(ref).epsilon(1e-9));
  }
  CHECK(coh.captured_norm > 1 - 1e-8);

  // super-gaussian, order 4
  const auto sg = decompose(b, SuperGaussianPacket{4, mu});
  CHECK(sg.captured_norm >= 1 - 1e-8);
  CHECK(sg.captured_norm <= 1 + 1e-10);
  // independent check of one coefficient
  const double c3r = oracle::integrate([&](double q) { return eigenstate(b, 3, q) * initial_wavefunction(b, SuperGaussianPacket{4, mu}, q).real(); },
                                       -0.4 * pot.spatial_period, 0.4 * pot.spatial_period, 1e-14);
  CHECK(std::abs(sg.c[3].real() - c3r) < 1e-10);

  CHECK_THROWS_AS(decompose(b, GaussianPacket{mu, b.hbar / (std::sqrt(2.0) * ell)}, 1e-8, 1), TruncationError);
}

TEST_CASE("time evolution") {
  const auto b = lho_basis(pot);
  const double sigma_p = gaussian_sigma_p(pot.spatial_period / 6);
  const double mu = momentum_for_energy_offset(-9 * units::eV, pot.group_velocity);
  CHECK(mu == doctest::Approx(codata.electron_mass * classical::delta_v_from_energy_offset(-9 * units::eV, pot.group_velocity)));
  const auto coeffs = decompose(b, GaussianPacket{mu, sigma_p});
  const double T = 2 * pi / b.omega;
  CHECK(expectation_position(b, coeffs, 0.0) == doctest::Approx(0.0).epsilon(1e-12));
  for (double f : {0.0, 0.13, 0.25, 0.5, 0.77, 3.3}) {
    const double t = f * T;
    CHECK(std::abs(expectation_momentum(b, coeffs, t) - mu * std::cos(b.omega * t)) < 1e-9 * std::abs(mu));
    // oracle: moments of |Psi(t,p)|^2 by quadrature
    // the momentum width breathes up to m Omega sigma_q
    const double sigma_max = std::max(sigma_p, b.mass * b.omega * b.hbar / (2 * sigma_p));
    const double span = 12 * sigma_max + 2 * std::abs(mu);
    const double norm = oracle::integrate([&](double p) { return momentum_density(b, coeffs, t, p); }, -span, span, 1e-13);
    const double mean = oracle::integrate([&](double p) { return p * momentum_density(b, coeffs, t, p); }, -span, span, 1e-13 * std::abs(mu));
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(mean - mu * std::cos(b.omega * t)) < 1e-9 * std::abs(mu));
    // revival
    for (double p : {-2 * mu, -mu, 0.3 * mu, mu}) {
      CHECK(std::abs(momentum_density(b, coeffs, t + T, p) - momentum_density(b, coeffs, t, p)) <
            1e-10 * momentum_density(b, coeffs, 0.0, mu));
    }
  }
}
