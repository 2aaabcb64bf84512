#pragma once

#include <cstddef>
#include <vector>

#include "specmark/grid.hpp"

namespace specmark {

/// Raster indices of an n x n grid in JPEG zigzag order: (0,0), (0,1), (1,0),
/// (2,0), (1,1), (0,2), ... Odd anti-diagonals run down-left, even ones up-right.
inline std::vector<std::size_t> zigzag_order(std::size_t n) {
  std::vector<std::size_t> order;
  order.reserve(n * n);
  if (n == 0) return order;
  for (std::size_t diag = 0; diag + 1 < 2 * n; ++diag) {
    const std::size_t r_lo = diag < n ? 0 : diag - (n - 1);
    const std::size_t r_hi = diag < n ? diag : n - 1;
    if (diag % 2 == 1) {
      for (std::size_t r = r_lo; r <= r_hi; ++r) order.push_back(r * n + (diag - r));
    } else {
      for (std::size_t r = r_hi + 1; r-- > r_lo;) order.push_back(r * n + (diag - r));
    }
  }
  return order;
}

/// Reads pixels in zigzag order and lays them out row-major.
template <class Tag>
Grid<Tag> zigzag_scan(const Grid<Tag>& img) {
  require_square(img, "zigzag_scan");
  const auto order = zigzag_order(img.rows());
  Grid<Tag> out(img.rows(), img.cols());
  auto src = img.values();
  auto dst = out.values();
  for (std::size_t k = 0; k < order.size(); ++k) dst[k] = src[order[k]];
  return out;
}

/// Inverse permutation of zigzag_scan.
template <class Tag>
Grid<Tag> zigzag_unscan(const Grid<Tag>& img) {
  require_square(img, "zigzag_unscan");
  const auto order = zigzag_order(img.rows());
  Grid<Tag> out(img.rows(), img.cols());
  auto src = img.values();
  auto dst = out.values();
  for (std::size_t k = 0; k < order.size(); ++k) dst[order[k]] = src[k];
  return out;
}

}  // namespace specmark
