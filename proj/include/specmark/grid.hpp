#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "specmark/error.hpp"

namespace specmark {

/// Row-major dense 2-D array of doubles.
///
/// The Tag parameter separates images (pixel intensities) from plain real
/// matrices (transform coefficients, SVD factors) at the type level; the two
/// share storage and convert only through the explicit retag().
template <class Tag>
class Grid {
 public:
  Grid() = default;

  Grid(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  Grid(std::size_t rows, std::size_t cols, std::vector<double> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
      throw DimensionError("grid storage holds " + std::to_string(data_.size()) +
                           " values, expected " + std::to_string(rows_ * cols_));
    }
  }

  Grid(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw DimensionError("ragged initializer rows");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static Grid identity(std::size_t n) {
    Grid g(n, n);
    for (std::size_t i = 0; i < n; ++i) g(i, i) = 1.0;
    return g;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }
  bool is_square() const noexcept { return rows_ == cols_; }

  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }

  std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const noexcept {
    return {data_.data() + r * cols_, cols_};
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct ImageTag {};
struct MatrixTag {};

/// Grayscale image: intensities nominally in [0, 255], stored unquantized.
using GrayImage = Grid<ImageTag>;
/// Plain real matrix.
using Matrix = Grid<MatrixTag>;

template <class To, class From>
Grid<To> retag(const Grid<From>& g) {
  auto v = g.values();
  return Grid<To>(g.rows(), g.cols(), std::vector<double>(v.begin(), v.end()));
}

inline Matrix as_matrix(const GrayImage& img) { return retag<MatrixTag>(img); }
inline GrayImage as_image(const Matrix& m) { return retag<ImageTag>(m); }

inline std::string dims_string(std::size_t rows, std::size_t cols) {
  return std::to_string(rows) + "x" + std::to_string(cols);
}

template <class Tag>
std::string dims_string(const Grid<Tag>& g) {
  return dims_string(g.rows(), g.cols());
}

template <class TagA, class TagB>
void require_same_dims(const Grid<TagA>& a, const Grid<TagB>& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(what) + ": dimension mismatch " + dims_string(a) +
                         " vs " + dims_string(b));
  }
}

template <class Tag>
void require_square(const Grid<Tag>& g, const char* what) {
  if (!g.is_square()) {
    throw DimensionError(std::string(what) + ": input must be square, got " + dims_string(g));
  }
}

// Dense helpers used by the transforms and by tests.

inline Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) t(c, r) = a(r, c);
  return t;
}

inline Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("multiply: inner dimensions differ, " + dims_string(a) + " * " +
                         dims_string(b));
  }
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto out_row = out.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      auto b_row = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) out_row[j] += aik * b_row[j];
    }
  }
  return out;
}

template <class Tag>
double frobenius_norm(const Grid<Tag>& g) {
  double acc = 0.0;
  for (double v : g.values()) acc += v * v;
  return std::sqrt(acc);
}

template <class Tag>
double max_abs_diff(const Grid<Tag>& a, const Grid<Tag>& b) {
  require_same_dims(a, b, "max_abs_diff");
  double worst = 0.0;
  auto av = a.values();
  auto bv = b.values();
  for (std::size_t i = 0; i < av.size(); ++i) worst = std::max(worst, std::abs(av[i] - bv[i]));
  return worst;
}

}  // namespace specmark
