#pragma once

// Explicit Runge-Kutta integrators over fixed-size states.
//
// DormandPrince: adaptive 5(4) pair with FSAL and the usual
// Hairer-Norsett-Wanner step controller (RMS error norm).
// rk4_step: classical fixed-step method.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>

#include "ponder/errors.hpp"

namespace ponder::ode {

template <std::size_t N>
using State = std::array<double, N>;

template <std::size_t N>
struct Tolerance {
  double rtol = 1e-10;
  State<N> atol{};  // per-component absolute floor
};

struct StepStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t evaluations = 0;
};

template <std::size_t N, class F>
State<N> rk4_step(F&& f, double t, const State<N>& y, double h) {
  State<N> k1, k2, k3, k4, tmp;
  f(t, y, k1);
  for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
  f(t + 0.5 * h, tmp, k2);
  for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
  f(t + 0.5 * h, tmp, k3);
  for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * k3[i];
  f(t + h, tmp, k4);
  State<N> out;
  for (std::size_t i = 0; i < N; ++i) out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

/// Fixed-step RK4 from t0 to t1 using `steps` equal steps.
template <std::size_t N, class F>
State<N> rk4_integrate(F&& f, double t0, State<N> y, double t1, std::size_t steps) {
  const double h = (t1 - t0) / static_cast<double>(steps);
  for (std::size_t s = 0; s < steps; ++s) y = rk4_step<N>(f, t0 + h * static_cast<double>(s), y, h);
  return y;
}

template <std::size_t N>
class DormandPrince {
 public:
  explicit DormandPrince(Tolerance<N> tol, double h_max = std::numeric_limits<double>::infinity())
      : tol_(tol), h_max_(h_max) {}

  /// Advances y from t to t_end. The step size carries over between calls.
  template <class F>
  void integrate(F&& f, double& t, State<N>& y, double t_end) {
    if (t == t_end) return;
    const double dir = t_end > t ? 1.0 : -1.0;
    if (!have_k1_ || k1_t_ != t || k1_y_ != y) {
      f(t, y, k1_);
      ++stats_.evaluations;
      have_k1_ = true;
    }
    if (h_ == 0.0) h_ = initial_step(f, t, y, dir);
    h_ = dir * std::min(std::abs(h_), h_max_);

    for (;;) {
      const double remaining = t_end - t;
      bool last = false;
      double h = h_;
      if (std::abs(h) >= std::abs(remaining)) {
        h = remaining;
        last = true;
      }
      const double tiny = 16.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t), std::abs(t_end));
      if (std::abs(h) <= tiny && !last) throw StiffnessError("Dormand-Prince step size underflow");

      State<N> y_new, k7;
      const double err = attempt(f, t, y, h, y_new, k7);
      if (err <= 1.0) {
        ++stats_.accepted;
        t = last ? t_end : t + h;
        y = y_new;
        k1_ = k7;
        k1_t_ = t;
        k1_y_ = y;
        const double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        if (!last || std::abs(h) >= std::abs(h_)) h_ = dir * std::min(std::abs(h) * fac, h_max_);
        if (last) return;
      } else {
        ++stats_.rejected;
        h_ = h * std::max(0.2, 0.9 * std::pow(err, -0.2));
        if (std::abs(h_) <= tiny) throw StiffnessError("Dormand-Prince step size underflow");
      }
    }
  }

  const StepStats& stats() const { return stats_; }
  double step_size() const { return h_; }

 private:
  template <class F>
  double initial_step(F&& f, double t, const State<N>& y, double dir) {
    double d0 = 0.0, d1 = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sc = tol_.atol[i] + tol_.rtol * std::abs(y[i]);
      d0 += (y[i] / sc) * (y[i] / sc);
      d1 += (k1_[i] / sc) * (k1_[i] / sc);
    }
    d0 = std::sqrt(d0 / N);
    d1 = std::sqrt(d1 / N);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, h_max_);
    State<N> y1, f1;
    for (std::size_t i = 0; i < N; ++i) y1[i] = y[i] + dir * h0 * k1_[i];
    f(t + dir * h0, y1, f1);
    ++stats_.evaluations;
    double d2 = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sc = tol_.atol[i] + tol_.rtol * std::abs(y[i]);
      const double v = (f1[i] - k1_[i]) / sc;
      d2 += v * v;
    }
    d2 = std::sqrt(d2 / N) / h0;
    const double m = std::max(d1, d2);
    const double h1 = m <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / m, 0.2);
    return dir * std::min({100.0 * h0, h1, h_max_});
  }

  template <class F>
  double attempt(F&& f, double t, const State<N>& y, double h, State<N>& y_new, State<N>& k7) {
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                     a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                     e6 = 22.0 / 525, e7 = -1.0 / 40;

    const State<N>& k1 = k1_;
    State<N> k2, k3, k4, k5, k6, tmp;
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * a21 * k1[i];
    f(t + c2 * h, tmp, k2);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    f(t + c3 * h, tmp, k3);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    f(t + c4 * h, tmp, k4);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    f(t + c5 * h, tmp, k5);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    f(t + h, tmp, k6);
    for (std::size_t i = 0; i < N; ++i)
      y_new[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    f(t + h, y_new, k7);
    stats_.evaluations += 6;

    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double sc = tol_.atol[i] + tol_.rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      err += (e / sc) * (e / sc);
    }
    err = std::sqrt(err / N);
    if (!std::isfinite(err)) return std::numeric_limits<double>::infinity();
    return err;
  }

  Tolerance<N> tol_;
  double h_max_;
  double h_ = 0.0;
  bool have_k1_ = false;
  double k1_t_ = 0.0;
  State<N> k1_{}, k1_y_{};
  StepStats stats_;
};

}  // namespace ponder::ode
