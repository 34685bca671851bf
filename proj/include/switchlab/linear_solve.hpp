#pragma once

#include <cstddef>
#include <vector>

#include "switchlab/errors.hpp"

namespace switchlab {

/// Dense square linear system solved in place by Gaussian elimination with
/// column pivoting on the first nonzero entry. Exact over Rational; the
/// systems fed here (discrete Dirichlet / absorption, kernel construction)
/// are nonsingular M-matrix types, so a nonzero pivot always exists.
template <class S>
std::vector<S> solve_dense(std::vector<std::vector<S>> a, std::vector<S> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col] == S(0)) ++piv;
    if (piv == n) throw SingularSystemError("solve_dense: singular system");
    if (piv != col) {
      std::swap(a[piv], a[col]);
      std::swap(b[piv], b[col]);
    }
    const S inv_diag = S(1) / a[col][col];
    for (std::size_t row = col + 1; row < n; ++row) {
      if (a[row][col] == S(0)) continue;
      const S f = a[row][col] * inv_diag;
      a[row][col] = S(0);
      for (std::size_t k = col + 1; k < n; ++k) {
        if (!(a[col][k] == S(0))) a[row][k] -= f * a[col][k];
      }
      b[row] -= f * b[col];
    }
  }
  std::vector<S> x(n, S(0));
  for (std::size_t i = n; i-- > 0;) {
    S acc = b[i];
    for (std::size_t k = i + 1; k < n; ++k) {
      if (!(a[i][k] == S(0))) acc -= a[i][k] * x[k];
    }
    x[i] = acc / a[i][i];
  }
  return x;
}

}  // namespace switchlab
