#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>

#include "specmark/grid.hpp"

namespace specmark {

/// Orthonormal DCT-II basis: row k is c(k) * cos(pi * (2i + 1) * k / 2n) over
/// i, with c(0) = sqrt(1/n) and c(k) = sqrt(2/n) otherwise.
inline Matrix dct_basis(std::size_t n) {
  Matrix basis(n, n);
  const double nn = static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double scale = k == 0 ? std::sqrt(1.0 / nn) : std::sqrt(2.0 / nn);
    for (std::size_t i = 0; i < n; ++i) {
      basis(k, i) = scale * std::cos(std::numbers::pi * (2.0 * static_cast<double>(i) + 1.0) *
                                     static_cast<double>(k) / (2.0 * nn));
    }
  }
  return basis;
}

/// Full-size separable 2-D DCT-II: basis * m * basis^T.
inline Matrix dct2(const Matrix& m) {
  require_square(m, "dct2");
  const Matrix basis = dct_basis(m.rows());
  return multiply(multiply(basis, m), transpose(basis));
}

/// Inverse of dct2: basis^T * m * basis.
inline Matrix idct2(const Matrix& m) {
  require_square(m, "idct2");
  const Matrix basis = dct_basis(m.rows());
  return multiply(multiply(transpose(basis), m), basis);
}

}  // namespace specmark
