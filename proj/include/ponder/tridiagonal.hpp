#pragma once

#include <cstddef>
#include <vector>

namespace ponder {

/// Symmetric tridiagonal matrix: `diagonal` has n entries, `off_diagonal`
/// n - 1 (entry i couples rows i and i + 1).
struct SymmetricTridiagonal {
  std::vector<double> diagonal;
  std::vector<double> off_diagonal;

  std::size_t size() const { return diagonal.size(); }
  /// y = T x
  std::vector<double> apply(const std::vector<double>& x) const;
  /// Max absolute row sum.
  double norm_inf() const;
};

struct TridiagonalEigen {
  std::vector<double> values;   // ascending
  std::vector<double> vectors;  // row-major n x n; row k is the eigenvector of values[k]
  std::size_t n = 0;

  double component(std::size_t k, std::size_t i) const { return vectors[k * n + i]; }
};

/// Implicit-shift QL iteration (EISPACK tql2 lineage). Throws
/// TruncationError if an eigenvalue fails to converge in 60 sweeps.
TridiagonalEigen eigen_decompose(const SymmetricTridiagonal& t);

}  // namespace ponder
