#pragma once

// Elliptic integrals of the first kind and Jacobi elliptic functions.
//
// Convention: every function takes the *parameter* m = k^2, never the
// modulus k. F(phi, m) = integral_0^phi dt / sqrt(1 - m sin^2 t).

namespace ponder::elliptic {

/// Complete integral K(m) by the arithmetic-geometric mean. 0 <= m < 1.
double complete_K(double m);

/// Incomplete integral F(phi, m) for any real phi and 0 <= m <= 1.
/// Beyond one quarter period it is continued with F(phi + pi) = F(phi) + 2K.
/// At m = 1 only |phi| < pi/2 is finite.
double incomplete_F(double phi, double m);

/// Jacobi amplitude, the inverse of F in its first argument. 0 <= m < 1.
double jacobi_am(double x, double m);

struct SnCnDn {
  double sn;
  double cn;
  double dn;
};

/// sn, cn, dn from a single amplitude evaluation.
SnCnDn jacobi_sncndn(double x, double m);

double jacobi_sn(double x, double m);
double jacobi_cn(double x, double m);
double jacobi_dn(double x, double m);

/// The m -> 1 limit of am: the Gudermannian gd(x) = 2 atan(e^x) - pi/2.
double separatrix_am(double x);

/// Inverse Gudermannian, equal to F(phi, 1) for |phi| < pi/2.
double inverse_gudermannian(double phi);

/// Carlson's symmetric integral R_F(x, y, z). At most one argument may be zero.
double carlson_RF(double x, double y, double z);

}  // namespace ponder::elliptic
