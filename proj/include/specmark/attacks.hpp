#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "specmark/dct.hpp"
#include "specmark/error.hpp"
#include "specmark/grid.hpp"
#include "specmark/image.hpp"
#include "specmark/rng.hpp"

namespace specmark {

enum class AttackKind {
  none,
  average_filter,
  median_filter,
  gaussian_noise,
  jpeg,
  crop_center,
  resize_roundtrip,
  rotate,
  pixelate,
  hist_equalize,
  motion_blur,
  sharpen,
  salt_pepper,
  speckle,
  poisson,
  gamma,
};

/// One attack and its parameter. Each kind has at most one numeric parameter
/// (`value`); stochastic kinds also use `seed`.
struct AttackSpec {
  AttackKind kind = AttackKind::none;
  double value = 0.0;
  std::uint64_t seed = 0;

  friend bool operator==(const AttackSpec&, const AttackSpec&) = default;
};

namespace detail {

struct AttackTraits {
  AttackKind kind;
  std::string_view name;       // canonical prefix
  std::string_view param;      // "" when the kind takes no parameter
  double default_value;
  bool stochastic;
};

inline constexpr std::array<AttackTraits, 16> kAttackTable{{
    {AttackKind::none, "none", "", 0.0, false},
    {AttackKind::average_filter, "avg", "k", 3, false},
    {AttackKind::median_filter, "median", "k", 3, false},
    {AttackKind::gaussian_noise, "gauss", "sigma", 25, true},
    {AttackKind::jpeg, "jpeg", "q", 50, false},
    {AttackKind::crop_center, "crop", "area", 0.25, false},
    {AttackKind::resize_roundtrip, "resize", "f", 0.25, false},
    {AttackKind::rotate, "rotate", "deg", 50, false},
    {AttackKind::pixelate, "pixelate", "b", 3, false},
    {AttackKind::hist_equalize, "histeq", "", 0.0, false},
    {AttackKind::motion_blur, "motion", "len", 9, false},
    {AttackKind::sharpen, "sharpen", "amount", 1.0, false},
    {AttackKind::salt_pepper, "sp", "d", 0.05, true},
    {AttackKind::speckle, "speckle", "sigma", 0.2, true},
    {AttackKind::poisson, "poisson", "", 0.0, true},
    {AttackKind::gamma, "gamma", "g", 0.6, false},
}};

inline const AttackTraits& traits_of(AttackKind kind) {
  for (const auto& t : kAttackTable)
    if (t.kind == kind) return t;
  throw ParameterError("unsupported attack kind");
}

inline std::string format_number(double v) {
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

inline bool is_integer(double v) { return std::isfinite(v) && v == std::floor(v); }

inline void require_odd_kernel(double v, const char* what) {
  if (!is_integer(v) || v < 3 || static_cast<long long>(v) % 2 == 0) {
    throw ParameterError(std::string(what) + " must be an odd integer >= 3, got " + format_number(v));
  }
}

}  // namespace detail

inline bool is_stochastic(AttackKind kind) { return detail::traits_of(kind).stochastic; }

/// Throws ParameterError unless the spec's parameter is in its documented range.
inline void validate(const AttackSpec& spec) {
  const double v = spec.value;
  switch (spec.kind) {
    case AttackKind::none:
    case AttackKind::hist_equalize:
    case AttackKind::poisson:
      return;
    case AttackKind::average_filter: detail::require_odd_kernel(v, "average filter k"); return;
    case AttackKind::median_filter: detail::require_odd_kernel(v, "median filter k"); return;
    case AttackKind::motion_blur: detail::require_odd_kernel(v, "motion blur length"); return;
    case AttackKind::jpeg:
      if (!detail::is_integer(v) || v < 1 || v > 100)
        throw ParameterError("jpeg quality must be an integer in 1..100, got " + detail::format_number(v));
      return;
    case AttackKind::gaussian_noise:
    case AttackKind::speckle:
      if (!(v >= 0.0) || !std::isfinite(v))
        throw ParameterError("noise sigma must be finite and >= 0, got " + detail::format_number(v));
      return;
    case AttackKind::salt_pepper:
      if (!(v >= 0.0 && v <= 1.0))
        throw ParameterError("salt & pepper density must lie in [0, 1], got " + detail::format_number(v));
      return;
    case AttackKind::crop_center:
      if (!(v > 0.0 && v <= 1.0))
        throw ParameterError("crop area fraction must lie in (0, 1], got " + detail::format_number(v));
      return;
    case AttackKind::resize_roundtrip:
      if (!(v > 0.0) || !std::isfinite(v))
        throw ParameterError("resize factor must be positive, got " + detail::format_number(v));
      return;
    case AttackKind::rotate:
      if (!std::isfinite(v)) throw ParameterError("rotation angle must be finite");
      return;
    case AttackKind::pixelate:
      if (!detail::is_integer(v) || v < 1)
        throw ParameterError("pixelate block size must be an integer >= 1, got " + detail::format_number(v));
      return;
    case AttackKind::sharpen:
      if (!(v >= 0.0) || !std::isfinite(v))
        throw ParameterError("sharpen amount must be finite and >= 0, got " + detail::format_number(v));
      return;
    case AttackKind::gamma:
      if (!(v > 0.0) || !std::isfinite(v))
        throw ParameterError("gamma must be positive, got " + detail::format_number(v));
      return;
  }
  throw ParameterError("unsupported attack kind");
}

/// Canonical text form, e.g. "median:k=13", "sp:d=0.05:seed=42", "histeq".
inline std::string to_string(const AttackSpec& spec) {
  const auto& t = detail::traits_of(spec.kind);
  std::string out(t.name);
  if (!t.param.empty()) out += ":" + std::string(t.param) + "=" + detail::format_number(spec.value);
  if (t.stochastic) out += ":seed=" + std::to_string(spec.seed);
  return out;
}

/// Parses the canonical text form. Omitted parameters take the kind's default;
/// an omitted seed takes `default_seed`.
inline AttackSpec parse_attack(std::string_view text, std::uint64_t default_seed = 0) {
  std::vector<std::string_view> parts;
  for (std::size_t start = 0;;) {
    const auto colon = text.find(':', start);
    parts.push_back(text.substr(start, colon == std::string_view::npos ? colon : colon - start));
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  const detail::AttackTraits* traits = nullptr;
  for (const auto& t : detail::kAttackTable)
    if (t.name == parts[0]) traits = &t;
  if (traits == nullptr) throw ParameterError("unknown attack '" + std::string(parts[0]) + "'");

  // Deterministic kinds ignore the seed; keep it zero so equal attacks compare equal.
  AttackSpec spec{traits->kind, traits->default_value, traits->stochastic ? default_seed : 0};
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const auto eq = parts[i].find('=');
    if (eq == std::string_view::npos) {
      throw ParameterError("malformed attack parameter '" + std::string(parts[i]) + "' in '" +
                           std::string(text) + "'");
    }
    const auto key = parts[i].substr(0, eq);
    const auto val = parts[i].substr(eq + 1);
    if (key == "seed" && traits->stochastic) {
      std::uint64_t seed = 0;
      auto [p, ec] = std::from_chars(val.data(), val.data() + val.size(), seed);
      if (ec != std::errc() || p != val.data() + val.size())
        throw ParameterError("invalid seed '" + std::string(val) + "'");
      spec.seed = seed;
    } else if (!traits->param.empty() && key == traits->param) {
      double v = 0.0;
      auto [p, ec] = std::from_chars(val.data(), val.data() + val.size(), v);
      if (ec != std::errc() || p != val.data() + val.size())
        throw ParameterError("invalid number '" + std::string(val) + "' for " + std::string(key));
      spec.value = v;
    } else {
      throw ParameterError("attack '" + std::string(traits->name) + "' has no parameter '" +
                           std::string(key) + "'");
    }
  }
  validate(spec);
  return spec;
}

// ---------------------------------------------------------------------------
// Individual attacks. Borders are handled by edge replication unless noted.

namespace detail {

inline double at_clamped(const GrayImage& img, long long r, long long c) {
  r = std::clamp<long long>(r, 0, static_cast<long long>(img.rows()) - 1);
  c = std::clamp<long long>(c, 0, static_cast<long long>(img.cols()) - 1);
  return img(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
}

// Separable box filter with window (2*ry+1) x (2*rx+1).
inline GrayImage box_filter(const GrayImage& img, long long ry, long long rx) {
  GrayImage tmp(img.rows(), img.cols());
  for (std::size_t r = 0; r < img.rows(); ++r) {
    for (std::size_t c = 0; c < img.cols(); ++c) {
      double acc = 0.0;
      for (long long d = -rx; d <= rx; ++d) acc += at_clamped(img, static_cast<long long>(r), static_cast<long long>(c) + d);
      tmp(r, c) = acc / static_cast<double>(2 * rx + 1);
    }
  }
  GrayImage out(img.rows(), img.cols());
  for (std::size_t r = 0; r < img.rows(); ++r) {
    for (std::size_t c = 0; c < img.cols(); ++c) {
      double acc = 0.0;
      for (long long d = -ry; d <= ry; ++d) acc += at_clamped(tmp, static_cast<long long>(r) + d, static_cast<long long>(c));
      out(r, c) = acc / static_cast<double>(2 * ry + 1);
    }
  }
  return out;
}

inline std::array<int, 64> jpeg_luma_table() {
  return {16, 11, 10, 16, 24,  40,  51,  61,  12, 12, 14, 19, 26,  58,  60,  55,
          14, 13, 16, 24, 40,  57,  69,  56,  14, 17, 22, 29, 51,  87,  80,  62,
          18, 22, 37, 56, 68,  109, 103, 77,  24, 35, 55, 64, 81,  104, 113, 92,
          49, 64, 78, 87, 103, 121, 120, 101, 72, 92, 95, 98, 112, 100, 103, 99};
}

}  // namespace detail

/// k x k mean filter.
inline GrayImage average_filter(const GrayImage& img, int k) {
  detail::require_odd_kernel(k, "average filter k");
  return detail::box_filter(img, k / 2, k / 2);
}

/// k x k median filter.
inline GrayImage median_filter(const GrayImage& img, int k) {
  detail::require_odd_kernel(k, "median filter k");
  const long long rad = k / 2;
  GrayImage out(img.rows(), img.cols());
  std::vector<double> window(static_cast<std::size_t>(k) * static_cast<std::size_t>(k));
  for (std::size_t r = 0; r < img.rows(); ++r) {
    for (std::size_t c = 0; c < img.cols(); ++c) {
      std::size_t n = 0;
      for (long long dr = -rad; dr <= rad; ++dr)
        for (long long dc = -rad; dc <= rad; ++dc)
          window[n++] = detail::at_clamped(img, static_cast<long long>(r) + dr, static_cast<long long>(c) + dc);
      auto mid = window.begin() + static_cast<std::ptrdiff_t>(n / 2);
      std::nth_element(window.begin(), mid, window.end());
      out(r, c) = *mid;
    }
  }
  return out;
}

/// Horizontal box blur of odd length.
inline GrayImage motion_blur(const GrayImage& img, int length) {
  detail::require_odd_kernel(length, "motion blur length");
  return detail::box_filter(img, 0, length / 2);
}

/// Unsharp mask against a 3x3 binomial blur: x + amount * (x - blur(x)).
inline GrayImage sharpen(const GrayImage& img, double amount) {
  constexpr std::array<double, 3> taps{0.25, 0.5, 0.25};
  GrayImage tmp(img.rows(), img.cols());
  for (std::size_t r = 0; r < img.rows(); ++r)
    for (std::size_t c = 0; c < img.cols(); ++c) {
      double acc = 0.0;
      for (int d = -1; d <= 1; ++d)
        acc += taps[d + 1] * detail::at_clamped(img, static_cast<long long>(r), static_cast<long long>(c) + d);
      tmp(r, c) = acc;
    }
  GrayImage out(img.rows(), img.cols());
  for (std::size_t r = 0; r < img.rows(); ++r)
    for (std::size_t c = 0; c < img.cols(); ++c) {
      double blur = 0.0;
      for (int d = -1; d <= 1; ++d)
        blur += taps[d + 1] * detail::at_clamped(tmp, static_cast<long long>(r) + d, static_cast<long long>(c));
      out(r, c) = img(r, c) + amount * (img(r, c) - blur);
    }
  return out;
}

/// 255 * (x / 255)^g on intensities clamped to [0, 255].
inline GrayImage gamma_correct(const GrayImage& img, double g) {
  GrayImage out = img;
  for (double& v : out.values()) v = 255.0 * std::pow(std::clamp(v, 0.0, 255.0) / 255.0, g);
  return out;
}

/// Keeps a centred window covering `area` of the image; zero elsewhere.
inline GrayImage crop_center(const GrayImage& img, double area) {
  const double side = std::sqrt(area);
  const auto keep_h = static_cast<std::size_t>(std::llround(side * static_cast<double>(img.rows())));
  const auto keep_w = static_cast<std::size_t>(std::llround(side * static_cast<double>(img.cols())));
  const std::size_t top = (img.rows() - keep_h) / 2;
  const std::size_t left = (img.cols() - keep_w) / 2;
  GrayImage out(img.rows(), img.cols());
  for (std::size_t r = top; r < top + keep_h; ++r)
    for (std::size_t c = left; c < left + keep_w; ++c) out(r, c) = img(r, c);
  return out;
}

/// Downscale by `factor` then back up to the original size, bilinear both ways.
inline GrayImage resize_roundtrip(const GrayImage& img, double factor) {
  const auto h = std::max<long long>(1, std::llround(factor * static_cast<double>(img.rows())));
  const auto w = std::max<long long>(1, std::llround(factor * static_cast<double>(img.cols())));
  return resize_to(resize_to(img, static_cast<std::size_t>(h), static_cast<std::size_t>(w)),
                   img.rows(), img.cols());
}

/// Rotation about the image centre with bilinear sampling; pixels whose source
/// falls outside the image become 0. Output keeps the input dimensions.
inline GrayImage rotate(const GrayImage& img, double degrees) {
  const double theta = degrees * std::numbers::pi / 180.0;
  const double cs = std::cos(theta);
  const double sn = std::sin(theta);
  const double cy = (static_cast<double>(img.rows()) - 1.0) / 2.0;
  const double cx = (static_cast<double>(img.cols()) - 1.0) / 2.0;
  const double max_y = static_cast<double>(img.rows()) - 1.0;
  const double max_x = static_cast<double>(img.cols()) - 1.0;
  GrayImage out(img.rows(), img.cols());
  for (std::size_t r = 0; r < img.rows(); ++r) {
    for (std::size_t c = 0; c < img.cols(); ++c) {
      const double dy = static_cast<double>(r) - cy;
      const double dx = static_cast<double>(c) - cx;
      const double sx = cs * dx + sn * dy + cx;
      const double sy = -sn * dx + cs * dy + cy;
      if (sx < 0.0 || sy < 0.0 || sx > max_x || sy > max_y) continue;
      const auto x0 = static_cast<std::size_t>(sx);
      const auto y0 = static_cast<std::size_t>(sy);
      const std::size_t x1 = std::min(x0 + 1, img.cols() - 1);
      const std::size_t y1 = std::min(y0 + 1, img.rows() - 1);
      const double fx = sx - static_cast<double>(x0);
      const double fy = sy - static_cast<double>(y0);
      const double top = img(y0, x0) + fx * (img(y0, x1) - img(y0, x0));
      const double bottom = img(y1, x0) + fx * (img(y1, x1) - img(y1, x0));
      out(r, c) = top + fy * (bottom - top);
    }
  }
  return out;
}

/// Replaces each block x block tile (partial at the edges) by its mean.
inline GrayImage pixelate(const GrayImage& img, std::size_t block) {
  if (block == 0) throw ParameterError("pixelate block size must be >= 1");
  GrayImage out(img.rows(), img.cols());
  for (std::size_t r0 = 0; r0 < img.rows(); r0 += block) {
    for (std::size_t c0 = 0; c0 < img.cols(); c0 += block) {
      const std::size_t r1 = std::min(r0 + block, img.rows());
      const std::size_t c1 = std::min(c0 + block, img.cols());
      double acc = 0.0;
      for (std::size_t r = r0; r < r1; ++r)
        for (std::size_t c = c0; c < c1; ++c) acc += img(r, c);
      const double mean = acc / static_cast<double>((r1 - r0) * (c1 - c0));
      for (std::size_t r = r0; r < r1; ++r)
        for (std::size_t c = c0; c < c1; ++c) out(r, c) = mean;
    }
  }
  return out;
}

/// Global 256-bin histogram equalisation of the 8-bit-quantised image.
inline GrayImage hist_equalize(const GrayImage& img) {
  const GrayImage q = quantize(img);
  std::array<std::size_t, 256> cdf{};
  for (double v : q.values()) ++cdf[static_cast<std::size_t>(v)];
  for (std::size_t i = 1; i < cdf.size(); ++i) cdf[i] += cdf[i - 1];
  const std::size_t total = q.size();
  std::size_t cdf_min = 0;
  for (std::size_t c : cdf)
    if (c != 0) {
      cdf_min = c;
      break;
    }
  if (total == cdf_min) return q;
  GrayImage out = q;
  for (double& v : out.values()) {
    const auto level = static_cast<std::size_t>(v);
    v = std::round(static_cast<double>(cdf[level] - cdf_min) /
                   static_cast<double>(total - cdf_min) * 255.0);
  }
  return out;
}

/// Standard JPEG luminance table scaled to `quality`, entries clamped >= 1.
inline std::array<int, 64> jpeg_quant_table(int quality) {
  if (quality < 1 || quality > 100) {
    throw ParameterError("jpeg quality must be in 1..100, got " + std::to_string(quality));
  }
  const int scale = quality < 50 ? 5000 / quality : 200 - 2 * quality;
  auto table = detail::jpeg_luma_table();
  for (int& t : table) t = std::max(1, (t * scale + 50) / 100);
  return table;
}

/// Lossy JPEG round trip without entropy coding: level shift, 8x8 DCT,
/// quantise/dequantise with the scaled luminance table, inverse DCT, then the
/// decoder's clamp-and-round to 8 bits. Non-multiple-of-8 sizes are padded by
/// edge replication and cropped back.
inline GrayImage jpeg_simulate(const GrayImage& img, int quality) {
  const auto table = jpeg_quant_table(quality);
  const std::size_t ph = (img.rows() + 7) / 8 * 8;
  const std::size_t pw = (img.cols() + 7) / 8 * 8;
  const Matrix basis = dct_basis(8);
  const Matrix basis_t = transpose(basis);

  GrayImage out(img.rows(), img.cols());
  Matrix block(8, 8);
  for (std::size_t br = 0; br < ph; br += 8) {
    for (std::size_t bc = 0; bc < pw; bc += 8) {
      for (std::size_t r = 0; r < 8; ++r)
        for (std::size_t c = 0; c < 8; ++c)
          block(r, c) = detail::at_clamped(img, static_cast<long long>(br + r), static_cast<long long>(bc + c)) - 128.0;
      Matrix coeffs = multiply(multiply(basis, block), basis_t);
      for (std::size_t i = 0; i < 64; ++i) {
        const double step = table[i];
        coeffs.values()[i] = std::round(coeffs.values()[i] / step) * step;
      }
      const Matrix rec = multiply(multiply(basis_t, coeffs), basis);
      for (std::size_t r = 0; r < 8 && br + r < img.rows(); ++r)
        for (std::size_t c = 0; c < 8 && bc + c < img.cols(); ++c)
          out(br + r, bc + c) = quantize_pixel(rec(r, c) + 128.0);
    }
  }
  return out;
}

struct NoiseModel {
  enum class Kind { gaussian, salt_pepper, speckle, poisson };
  Kind kind = Kind::gaussian;
  double param = 0.0;  // sigma, density, or sigma; unused for poisson
};

/// Seeded noise. Pixel i uses generator draws derived from index i only.
///   gaussian:    x + sigma * z
///   salt_pepper: with probability `density`, x := 0 or 255 (equal odds)
///   speckle:     x * (1 + sigma * z)
///   poisson:     Poisson draw with mean clamp(x, 0, 255), by CDF inversion
inline GrayImage add_noise(const GrayImage& img, const NoiseModel& model, std::uint64_t seed) {
  const CounterRng rng(seed);
  GrayImage out = img;
  auto px = out.values();
  switch (model.kind) {
    case NoiseModel::Kind::gaussian:
      if (!(model.param >= 0.0)) throw ParameterError("gaussian sigma must be >= 0");
      for (std::size_t i = 0; i < px.size(); ++i) px[i] += model.param * rng.normal(i);
      break;
    case NoiseModel::Kind::speckle:
      if (!(model.param >= 0.0)) throw ParameterError("speckle sigma must be >= 0");
      for (std::size_t i = 0; i < px.size(); ++i) px[i] *= 1.0 + model.param * rng.normal(i);
      break;
    case NoiseModel::Kind::salt_pepper:
      if (!(model.param >= 0.0 && model.param <= 1.0))
        throw ParameterError("salt & pepper density must lie in [0, 1]");
      for (std::size_t i = 0; i < px.size(); ++i) {
        if (rng.uniform(2 * i) < model.param) px[i] = rng.uniform(2 * i + 1) < 0.5 ? 0.0 : 255.0;
      }
      break;
    case NoiseModel::Kind::poisson:
      for (std::size_t i = 0; i < px.size(); ++i) {
        const double mean = std::clamp(px[i], 0.0, 255.0);
        const double u = rng.uniform(i);
        double p = std::exp(-mean);
        double cdf = p;
        double k = 0.0;
        const double cap = mean + 40.0 * std::sqrt(mean) + 40.0;
        while (u > cdf && k < cap) {
          k += 1.0;
          p *= mean / k;
          cdf += p;
        }
        px[i] = k;
      }
      break;
  }
  return out;
}

/// Applies one attack. The output always has the input's dimensions.
inline GrayImage apply_attack(const GrayImage& img, const AttackSpec& spec) {
  validate(spec);
  const double v = spec.value;
  switch (spec.kind) {
    case AttackKind::none: return img;
    case AttackKind::average_filter: return average_filter(img, static_cast<int>(v));
    case AttackKind::median_filter: return median_filter(img, static_cast<int>(v));
    case AttackKind::gaussian_noise: return add_noise(img, {NoiseModel::Kind::gaussian, v}, spec.seed);
    case AttackKind::jpeg: return jpeg_simulate(img, static_cast<int>(v));
    case AttackKind::crop_center: return crop_center(img, v);
    case AttackKind::resize_roundtrip: return resize_roundtrip(img, v);
    case AttackKind::rotate: return rotate(img, v);
    case AttackKind::pixelate: return pixelate(img, static_cast<std::size_t>(v));
    case AttackKind::hist_equalize: return hist_equalize(img);
    case AttackKind::motion_blur: return motion_blur(img, static_cast<int>(v));
    case AttackKind::sharpen: return sharpen(img, v);
    case AttackKind::salt_pepper: return add_noise(img, {NoiseModel::Kind::salt_pepper, v}, spec.seed);
    case AttackKind::speckle: return add_noise(img, {NoiseModel::Kind::speckle, v}, spec.seed);
    case AttackKind::poisson: return add_noise(img, {NoiseModel::Kind::poisson, 0.0}, spec.seed);
    case AttackKind::gamma: return gamma_correct(img, v);
  }
  throw ParameterError("unsupported attack kind");
}

/// The benchmark's default grid: one row per implemented attack setting.
inline std::vector<std::string> default_attack_grid() {
  return {"none",       "avg:k=3",      "avg:k=13",        "median:k=3",  "median:k=13",
          "gauss:sigma=5", "gauss:sigma=15", "gauss:sigma=25", "jpeg:q=10", "jpeg:q=50",
          "crop:area=0.25", "resize:f=0.25", "rotate:deg=50", "pixelate:b=3", "histeq",
          "motion:len=9", "sharpen:amount=1", "sp:d=0.05",   "speckle:sigma=0.2", "poisson",
          "gamma:g=0.6"};
}

}  // namespace specmark
