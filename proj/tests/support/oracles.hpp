#pragma once

// Reference implementations used only by tests. Each follows the textbook
// definition directly and shares no code with the library path it checks.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <vector>

#include "specmark/grid.hpp"

namespace specmark::testing {

inline double dct_norm(std::size_t k, std::size_t n) {
  return k == 0 ? std::sqrt(1.0 / static_cast<double>(n)) : std::sqrt(2.0 / static_cast<double>(n));
}

/// Four-loop forward 2-D DCT: F(m,n) = sum_i sum_j C(m) C(n) f(i,j) cos(..) cos(..).
inline Matrix dct2_literal(const Matrix& f) {
  const std::size_t n = f.rows();
  const double nn = static_cast<double>(n);
  Matrix out(n, n);
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t k = 0; k < n; ++k) {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          acc += dct_norm(m, n) * dct_norm(k, n) * f(i, j) *
                 std::cos(std::numbers::pi * (2.0 * i + 1.0) * m / (2.0 * nn)) *
                 std::cos(std::numbers::pi * (2.0 * j + 1.0) * k / (2.0 * nn));
      out(m, k) = acc;
    }
  return out;
}

/// Four-loop inverse: f(i,j) = sum_m sum_n C(m) C(n) F(m,n) cos(..) cos(..).
inline Matrix idct2_literal(const Matrix& f) {
  const std::size_t n = f.rows();
  const double nn = static_cast<double>(n);
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t m = 0; m < n; ++m)
        for (std::size_t k = 0; k < n; ++k)
          acc += dct_norm(m, n) * dct_norm(k, n) * f(m, k) *
                 std::cos(std::numbers::pi * (2.0 * i + 1.0) * m / (2.0 * nn)) *
                 std::cos(std::numbers::pi * (2.0 * j + 1.0) * k / (2.0 * nn));
      out(i, j) = acc;
    }
  return out;
}

/// Singular values as square roots of the eigenvalues of m^T m, computed by
/// cyclic two-sided Jacobi on the symmetric Gram matrix. Sorted descending.
inline std::vector<double> gram_eigen_singular_values(const Matrix& m) {
  const std::size_t n = m.cols();
  std::vector<double> g(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < m.rows(); ++k) g[i * n + j] += m(k, i) * m(k, j);
  auto at = [&](std::size_t r, std::size_t c) -> double& { return g[r * n + c]; };

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0, diag = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) (i == j ? diag : off) += at(i, j) * at(i, j);
    if (off <= 1e-30 * std::max(diag, 1e-300)) break;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (at(p, q) == 0.0) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * at(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {  // columns p, q
          const double gkp = at(k, p), gkq = at(k, q);
          at(k, p) = c * gkp - s * gkq;
          at(k, q) = s * gkp + c * gkq;
        }
        for (std::size_t k = 0; k < n; ++k) {  // rows p, q
          const double gpk = at(p, k), gqk = at(q, k);
          at(p, k) = c * gpk - s * gqk;
          at(q, k) = s * gpk + c * gqk;
        }
      }
  }
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = std::sqrt(std::max(at(i, i), 0.0));
  std::sort(s.begin(), s.end(), std::greater<>());
  return s;
}

}  // namespace specmark::testing
