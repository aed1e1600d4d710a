#include "ponder/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ponder/errors.hpp"

namespace ponder {

std::vector<double> SymmetricTridiagonal::apply(const std::vector<double>& x) const {
  const std::size_t n = size();
  std::vector<double> y(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = diagonal[i] * x[i];
    if (i > 0) y[i] += off_diagonal[i - 1] * x[i - 1];
    if (i + 1 < n) y[i] += off_diagonal[i] * x[i + 1];
  }
  return y;
}

double SymmetricTridiagonal::norm_inf() const {
  double best = 0.0;
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    double r = std::abs(diagonal[i]);
    if (i > 0) r += std::abs(off_diagonal[i - 1]);
    if (i + 1 < n) r += std::abs(off_diagonal[i]);
    best = std::max(best, r);
  }
  return best;
}

TridiagonalEigen eigen_decompose(const SymmetricTridiagonal& t) {
  const std::size_t n = t.size();
  if (n == 0) return {};
  if (t.off_diagonal.size() + 1 != n) throw DomainError("tridiagonal: off-diagonal must have n - 1 entries");

  std::vector<double> d = t.diagonal;
  std::vector<double> e(n, 0.0);
  std::copy(t.off_diagonal.begin(), t.off_diagonal.end(), e.begin());
  // z is column-major here: z[i * n + k] = component i of vector k
  std::vector<double> z(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) z[i * n + i] = 1.0;

  const double eps = std::numeric_limits<double>::epsilon();
  double f = 0.0, tst1 = 0.0;
  for (std::size_t l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    std::size_t m = l;
    while (m < n) {
      if (std::abs(e[m]) <= eps * tst1) break;
      ++m;
    }
    if (m == n) m = n - 1;
    if (m > l) {
      int iter = 0;
      do {
        if (++iter > 60) throw TruncationError("tridiagonal QL iteration did not converge");
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
        f += h;

        p = d[m];
        double c = 1.0, c2 = 1.0, c3 = 1.0, s = 0.0, s2 = 0.0;
        const double el1 = e[l + 1];
        for (std::size_t ii = m; ii-- > l;) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[ii];
          h = c * p;
          r = std::hypot(p, e[ii]);
          e[ii + 1] = s * r;
          s = e[ii] / r;
          c = p / r;
          p = c * d[ii] - s * g;
          d[ii + 1] = h + s * (c * g + s * d[ii]);
          for (std::size_t k = 0; k < n; ++k) {
            h = z[k * n + ii + 1];
            z[k * n + ii + 1] = s * z[k * n + ii] + c * h;
            z[k * n + ii] = c * z[k * n + ii] - s * h;
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
  TridiagonalEigen out;
  out.n = n;
  out.values.resize(n);
  out.vectors.resize(n * n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    out.values[k] = d[src];
    for (std::size_t i = 0; i < n; ++i) out.vectors[k * n + i] = z[i * n + src];
  }
  return out;
}

}  // namespace ponder
