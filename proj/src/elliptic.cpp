#include "ponder/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ponder/constants.hpp"
#include "ponder/errors.hpp"

namespace ponder::elliptic {

namespace {

constexpr double eps = std::numeric_limits<double>::epsilon();

void require_parameter(double m, bool allow_one, const char* where) {
  if (!(m >= 0.0) || m > 1.0 || (!allow_one && m == 1.0)) {
    throw DomainError(std::string(where) + ": parameter m = " + std::to_string(m) +
                      (allow_one ? " outside [0, 1]" : " outside [0, 1)"));
  }
}

// Descending AGM sequence (DLMF 22.20.ii). Returns the amplitude for
// |x| <= K(m); the caller reduces larger arguments.
double am_reduced(double x, double m) {
  if (m == 0.0) return x;
  constexpr int max_terms = 16;
  double a[max_terms + 1];
  double c[max_terms + 1];
  a[0] = 1.0;
  double b = std::sqrt(1.0 - m);
  c[0] = std::sqrt(m);
  int n = 0;
  while (std::abs(c[n]) > eps * a[n] && n < max_terms) {
    const double an = a[n];
    a[n + 1] = 0.5 * (an + b);
    c[n + 1] = 0.5 * (an - b);
    b = std::sqrt(an * b);
    ++n;
  }
  double phi = std::ldexp(a[n] * x, n);
  for (int i = n; i > 0; --i) {
    phi = 0.5 * (phi + std::asin(c[i] * std::sin(phi) / a[i]));
  }
  return phi;
}

}  // namespace

double carlson_RF(double x, double y, double z) {
  if (x < 0.0 || y < 0.0 || z < 0.0) throw DomainError("carlson_RF: negative argument");
  if ((x == 0.0) + (y == 0.0) + (z == 0.0) > 1) throw DomainError("carlson_RF: two zero arguments");
  // Carlson (1995): duplication until the spread is below tol^(1/6) scale.
  const double tol = std::pow(3.0 * eps * 0.01, 1.0 / 8.0);
  const double A0 = (x + y + z) / 3.0;
  double An = A0;
  double Q = std::max({std::abs(A0 - x), std::abs(A0 - y), std::abs(A0 - z)}) / tol;
  double xn = x, yn = y, zn = z, mul = 1.0;
  while (Q >= mul * std::abs(An)) {
    const double sx = std::sqrt(xn), sy = std::sqrt(yn), sz = std::sqrt(zn);
    const double lam = sx * sy + sy * sz + sz * sx;
    An = 0.25 * (An + lam);
    xn = 0.25 * (xn + lam);
    yn = 0.25 * (yn + lam);
    zn = 0.25 * (zn + lam);
    mul *= 4.0;
  }
  const double X = (A0 - x) / (mul * An);
  const double Y = (A0 - y) / (mul * An);
  const double Z = -(X + Y);
  const double E2 = X * Y - Z * Z;
  const double E3 = X * Y * Z;
  return (E3 * (6930 * E3 + E2 * (15015 * E2 - 16380) + 17160) +
          E2 * ((10010 - 5775 * E2) * E2 - 24024) + 240240) /
         (240240 * std::sqrt(An));
}

double complete_K(double m) {
  require_parameter(m, false, "complete_K");
  double a = 1.0;
  double b = std::sqrt(1.0 - m);
  while (std::abs(a - b) > 2.0 * eps * a) {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return pi / (a + b);
}

double incomplete_F(double phi, double m) {
  require_parameter(m, true, "incomplete_F");
  if (!std::isfinite(phi)) throw DomainError("incomplete_F: non-finite amplitude");
  if (m == 1.0) {
    if (std::abs(phi) >= 0.5 * pi) {
      throw DomainError("incomplete_F: F(phi, 1) diverges for |phi| >= pi/2");
    }
    return inverse_gudermannian(phi);
  }
  const double n = std::round(phi / pi);
  const double r = phi - n * pi;
  const double s = std::sin(r);
  const double c = std::cos(r);
  double F = s * carlson_RF(c * c, 1.0 - m * s * s, 1.0);
  if (n != 0.0) F += 2.0 * n * complete_K(m);
  return F;
}

double jacobi_am(double x, double m) {
  require_parameter(m, false, "jacobi_am");
  if (!std::isfinite(x)) throw DomainError("jacobi_am: non-finite argument");
  if (m == 0.0) return x;
  const double K = complete_K(m);
  const double n = std::round(x / (2.0 * K));
  const double r = x - n * 2.0 * K;
  return n * pi + am_reduced(r, m);
}

SnCnDn jacobi_sncndn(double x, double m) {
  const double phi = jacobi_am(x, m);
  const double sn = std::sin(phi);
  const double cn = std::cos(phi);
  return {sn, cn, std::sqrt(1.0 - m * sn * sn)};
}

double jacobi_sn(double x, double m) { return jacobi_sncndn(x, m).sn; }
double jacobi_cn(double x, double m) { return jacobi_sncndn(x, m).cn; }
double jacobi_dn(double x, double m) { return jacobi_sncndn(x, m).dn; }

double separatrix_am(double x) { return std::atan(std::sinh(x)); }

double inverse_gudermannian(double phi) { return std::atanh(std::sin(phi)); }

}  // namespace ponder::elliptic
