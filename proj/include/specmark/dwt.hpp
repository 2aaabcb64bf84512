#pragma once

#include <cstddef>

#include "specmark/grid.hpp"

namespace specmark {

/// One-level 2-D wavelet decomposition. ll is the approximation; hl carries
/// horizontal detail (differences across columns), lh vertical detail
/// (differences across rows), hh diagonal detail.
struct SubBands {
  Matrix ll;
  Matrix lh;
  Matrix hl;
  Matrix hh;

  friend bool operator==(const SubBands&, const SubBands&) = default;
};

/// Orthonormal Haar analysis over non-overlapping 2x2 blocks. For a block
/// [[a, b], [c, d]]: ll = (a+b+c+d)/2, hl = (a-b+c-d)/2, lh = (a+b-c-d)/2,
/// hh = (a-b-c+d)/2.
template <class Tag>
SubBands dwt2(const Grid<Tag>& img) {
  if (img.rows() % 2 != 0 || img.cols() % 2 != 0 || img.empty()) {
    throw DimensionError("dwt2: both dimensions must be even and non-zero, got " +
                         dims_string(img));
  }
  const std::size_t h = img.rows() / 2;
  const std::size_t w = img.cols() / 2;
  SubBands b{Matrix(h, w), Matrix(h, w), Matrix(h, w), Matrix(h, w)};
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      const double a = img(2 * r, 2 * c);
      const double bb = img(2 * r, 2 * c + 1);
      const double cc = img(2 * r + 1, 2 * c);
      const double d = img(2 * r + 1, 2 * c + 1);
      b.ll(r, c) = 0.5 * (a + bb + cc + d);
      b.hl(r, c) = 0.5 * (a - bb + cc - d);
      b.lh(r, c) = 0.5 * (a + bb - cc - d);
      b.hh(r, c) = 0.5 * (a - bb - cc + d);
    }
  }
  return b;
}

/// Haar synthesis; exact inverse of dwt2.
inline GrayImage idwt2(const SubBands& b) {
  require_same_dims(b.ll, b.lh, "idwt2");
  require_same_dims(b.ll, b.hl, "idwt2");
  require_same_dims(b.ll, b.hh, "idwt2");
  const std::size_t h = b.ll.rows();
  const std::size_t w = b.ll.cols();
  GrayImage img(2 * h, 2 * w);
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      const double ll = b.ll(r, c);
      const double hl = b.hl(r, c);
      const double lh = b.lh(r, c);
      const double hh = b.hh(r, c);
      img(2 * r, 2 * c) = 0.5 * (ll + hl + lh + hh);
      img(2 * r, 2 * c + 1) = 0.5 * (ll - hl + lh - hh);
      img(2 * r + 1, 2 * c) = 0.5 * (ll + hl - lh - hh);
      img(2 * r + 1, 2 * c + 1) = 0.5 * (ll - hl - lh + hh);
    }
  }
  return img;
}

}  // namespace specmark
