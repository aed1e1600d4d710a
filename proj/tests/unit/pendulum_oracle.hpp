#pragma once

// Direct numerical integration of the rest-frame pendulum equation,
// independent of the elliptic-function code.

#include <cmath>
#include <vector>

#include "ponder/beatwave.hpp"
#include "ponder/ode.hpp"

namespace oracle {

struct PendulumSample {
  double q;
  double qdot;
};

/// q'' = -(pi A / (m lambda)) sin(2 pi q / lambda), sampled at increasing times.
inline std::vector<PendulumSample> integrate_pendulum(const ponder::PotentialParams& pot, double mass, double z0,
                                                      double dv0, const std::vector<double>& times,
                                                      double rtol = 1e-12) {
  const double lambda = pot.spatial_period;
  const double coef = ponder::pi * pot.amplitude / (mass * lambda);
  const double vscale = std::sqrt(2.0 * pot.amplitude / mass) + std::abs(dv0);
  ponder::ode::DormandPrince<2> dp({rtol, {1e-4 * rtol * lambda, 1e-4 * rtol * vscale}});
  ponder::ode::State<2> y{z0, dv0};
  double t = 0.0;
  auto rhs = [&](double, const ponder::ode::State<2>& s, ponder::ode::State<2>& d) {
    d[0] = s[1];
    d[1] = -coef * std::sin(2.0 * ponder::pi * s[0] / lambda);
  };
  std::vector<PendulumSample> out;
  out.reserve(times.size());
  for (double ts : times) {
    dp.integrate(rhs, t, y, ts);
    out.push_back({y[0], y[1]});
  }
  return out;
}

}  // namespace oracle
