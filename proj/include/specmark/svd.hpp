#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "specmark/error.hpp"
#include "specmark/grid.hpp"

namespace specmark {

/// m = u * diag(s) * v^T with u, v orthogonal and s non-negative, non-increasing.
struct SvdFactors {
  Matrix u;
  std::vector<double> s;
  Matrix v;
};

struct JacobiOptions {
  int max_sweeps = 30;
  double tolerance = 1e-12;
};

namespace detail {

inline double dot(std::span<const double> a, std::span<const double> b) {
  // Four partial sums; fixed order keeps the result deterministic.
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t k = 0;
  const std::size_t n = a.size();
  for (; k + 4 <= n; k += 4) {
    s0 += a[k] * b[k];
    s1 += a[k + 1] * b[k + 1];
    s2 += a[k + 2] * b[k + 2];
    s3 += a[k + 3] * b[k + 3];
  }
  for (; k < n; ++k) s0 += a[k] * b[k];
  return (s0 + s1) + (s2 + s3);
}

inline void rotate(std::span<double> p, std::span<double> q, double c, double s) {
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double xp = p[k];
    const double xq = q[k];
    p[k] = c * xp - s * xq;
    q[k] = s * xp + c * xq;
  }
}

// Extends the orthonormal columns flagged in `have` to a full orthonormal basis.
// Each missing column starts from the standard basis vector e_c least covered
// by the columns present so far (smallest sum of squared c-th components, so
// its residual norm is largest) and is orthogonalised with two Gram-Schmidt passes.
inline void complete_orthonormal_columns(Matrix& cols_as_rows, std::vector<bool>& have) {
  const std::size_t n = cols_as_rows.rows();
  std::vector<double> covered(n, 0.0);
  auto absorb = [&](std::span<const double> col) {
    for (std::size_t c = 0; c < n; ++c) covered[c] += col[c] * col[c];
  };
  for (std::size_t i = 0; i < n; ++i)
    if (have[i]) absorb(cols_as_rows.row(i));

  for (std::size_t j = 0; j < n; ++j) {
    if (have[j]) continue;
    const auto pick = static_cast<std::size_t>(
        std::min_element(covered.begin(), covered.end()) - covered.begin());
    auto target = cols_as_rows.row(j);
    std::fill(target.begin(), target.end(), 0.0);
    target[pick] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t i = 0; i < n; ++i) {
        if (!have[i]) continue;
        auto other = cols_as_rows.row(i);
        const double proj = dot(target, other);
        for (std::size_t k = 0; k < n; ++k) target[k] -= proj * other[k];
      }
    }
    const double norm = std::sqrt(dot(target, target));
    for (double& x : target) x /= norm;
    have[j] = true;
    absorb(target);
  }
}

struct JacobiResult {
  Matrix a_cols;  // row j holds column j of the rotated matrix
  Matrix v_cols;  // row j holds column j of V (empty when not accumulated)
};

// One-sided (Hestenes) Jacobi: rotates column pairs of m until all are
// mutually orthogonal to the relative tolerance.
inline JacobiResult one_sided_jacobi(const Matrix& m, bool accumulate_v,
                                     const JacobiOptions& opts) {
  const std::size_t n = m.rows();
  JacobiResult r{transpose(m), accumulate_v ? Matrix::identity(n) : Matrix{}};
  const double frob = frobenius_norm(m);
  if (frob == 0.0) return r;
  // Columns this small relative to the whole matrix carry no information.
  const double negligible = std::pow(std::numeric_limits<double>::epsilon() * frob, 2) * 1e-4;

  double residual = 0.0;
  for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    residual = 0.0;
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        auto ap = r.a_cols.row(p);
        auto aq = r.a_cols.row(q);
        const double alpha = dot(ap, ap);
        const double beta = dot(aq, aq);
        const double gamma = dot(ap, aq);
        if (alpha <= negligible || beta <= negligible) continue;
        const double rel = std::abs(gamma) / std::sqrt(alpha * beta);
        residual = std::max(residual, rel);
        if (rel <= opts.tolerance) continue;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::hypot(1.0, t);
        const double s = c * t;
        rotate(ap, aq, c, s);
        if (accumulate_v) rotate(r.v_cols.row(p), r.v_cols.row(q), c, s);
        rotated = true;
      }
    }
    if (!rotated) return r;
  }
  throw NumericalError(residual, "svd: one-sided Jacobi did not converge in " +
                                     std::to_string(opts.max_sweeps) + " sweeps");
}

inline std::vector<std::size_t> descending_order(const std::vector<double>& s) {
  std::vector<std::size_t> idx(s.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return s[a] > s[b]; });
  return idx;
}

}  // namespace detail

/// Singular value decomposition of a square matrix by one-sided Jacobi
/// rotations. Singular values come out non-negative and sorted descending;
/// columns of u for (numerically) zero singular values are an arbitrary
/// orthonormal completion.
inline SvdFactors svd(const Matrix& m, const JacobiOptions& opts = {}) {
  require_square(m, "svd");
  const std::size_t n = m.rows();
  auto jac = detail::one_sided_jacobi(m, true, opts);

  std::vector<double> norms(n);
  for (std::size_t j = 0; j < n; ++j) {
    norms[j] = std::sqrt(detail::dot(jac.a_cols.row(j), jac.a_cols.row(j)));
  }
  const auto order = detail::descending_order(norms);
  const double s_max = n == 0 ? 0.0 : norms[order[0]];
  const double rank_floor =
      s_max * static_cast<double>(n) * std::numeric_limits<double>::epsilon();

  SvdFactors f{Matrix(n, n), std::vector<double>(n), Matrix(n, n)};
  Matrix u_cols(n, n);
  std::vector<bool> have(n, false);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = order[k];
    f.s[k] = norms[j];
    if (norms[j] > rank_floor && norms[j] > 0.0) {
      auto src = jac.a_cols.row(j);
      auto dst = u_cols.row(k);
      for (std::size_t i = 0; i < n; ++i) dst[i] = src[i] / norms[j];
      have[k] = true;
    }
    for (std::size_t i = 0; i < n; ++i) f.v(i, k) = jac.v_cols(j, i);
  }
  detail::complete_orthonormal_columns(u_cols, have);
  f.u = transpose(u_cols);
  return f;
}

/// Singular values only (descending); same arithmetic as svd(m).s without
/// accumulating v.
inline std::vector<double> singular_values(const Matrix& m, const JacobiOptions& opts = {}) {
  require_square(m, "singular_values");
  auto jac = detail::one_sided_jacobi(m, false, opts);
  std::vector<double> norms(m.rows());
  for (std::size_t j = 0; j < norms.size(); ++j) {
    norms[j] = std::sqrt(detail::dot(jac.a_cols.row(j), jac.a_cols.row(j)));
  }
  std::sort(norms.begin(), norms.end(), std::greater<>());
  return norms;
}

/// u * diag(s) * v^T.
inline Matrix svd_reconstruct(const SvdFactors& f) {
  const std::size_t n = f.s.size();
  if (f.u.cols() != n || f.v.cols() != n || f.u.rows() != f.v.rows()) {
    throw DimensionError("svd_reconstruct: inconsistent factor dimensions u " +
                         dims_string(f.u) + ", s " + std::to_string(n) + ", v " +
                         dims_string(f.v));
  }
  Matrix us = f.u;
  for (std::size_t r = 0; r < us.rows(); ++r)
    for (std::size_t c = 0; c < n; ++c) us(r, c) *= f.s[c];
  return multiply(us, transpose(f.v));
}

/// Largest |(q^T q - I)_ij|.
inline double orthogonality_error(const Matrix& q) {
  const Matrix g = multiply(transpose(q), q);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j)
      worst = std::max(worst, std::abs(g(i, j) - (i == j ? 1.0 : 0.0)));
  return worst;
}

}  // namespace specmark
