#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "specmark/error.hpp"
#include "specmark/grid.hpp"

namespace specmark {

using Bytes = std::vector<std::uint8_t>;

/// Clamp to [0, 255] then round half away from zero.
inline double quantize_pixel(double v) { return std::round(std::clamp(v, 0.0, 255.0)); }

/// The 8-bit channel: every pixel passed through quantize_pixel.
inline GrayImage quantize(const GrayImage& img) {
  GrayImage out = img;
  for (double& v : out.values()) v = quantize_pixel(v);
  return out;
}

namespace detail {

class PgmHeaderCursor {
 public:
  explicit PgmHeaderCursor(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t offset() const noexcept { return pos_; }
  std::size_t last_token_offset() const noexcept { return token_start_; }

  // Skips whitespace and '#' comments (which run to end of line).
  void skip_separators() {
    while (pos_ < bytes_.size()) {
      const auto ch = bytes_[pos_];
      if (ch == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
      } else if (std::isspace(ch)) {
        ++pos_;
      } else {
        return;
      }
    }
  }

  std::size_t read_unsigned(const char* field) {
    skip_separators();
    const std::size_t start = pos_;
    token_start_ = start;
    std::size_t value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + static_cast<std::size_t>(bytes_[pos_] - '0');
      if (value > (1u << 24)) throw ParseError(start, std::string("PGM ") + field + " too large");
      ++pos_;
    }
    if (pos_ == start) throw ParseError(start, std::string("expected PGM ") + field);
    return value;
  }

  // Exactly one whitespace byte separates maxval from the raster.
  void consume_raster_separator() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw ParseError(pos_, "expected single whitespace before PGM raster");
    }
    ++pos_;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
  std::size_t token_start_ = 0;
};

}  // namespace detail

/// Decodes a binary (P5) PGM with maxval 255. Comments are accepted anywhere
/// a header separator is allowed; bytes after the raster are ignored.
inline GrayImage read_pgm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2) throw ParseError(0, "truncated PGM magic");
  if (bytes[0] != 'P' || bytes[1] != '5') {
    throw ParseError(0, "unsupported PGM magic (only binary P5 is accepted)");
  }
  std::size_t pos = 2;
  if (pos < bytes.size() && !std::isspace(bytes[pos]) && bytes[pos] != '#') {
    throw ParseError(pos, "expected whitespace after PGM magic");
  }
  detail::PgmHeaderCursor header(bytes.subspan(pos));
  const std::size_t width = header.read_unsigned("width");
  const std::size_t height = header.read_unsigned("height");
  const std::size_t maxval = header.read_unsigned("maxval");
  const std::size_t maxval_offset = pos + header.last_token_offset();
  if (width == 0 || height == 0) throw ParseError(pos, "PGM dimensions must be positive");
  if (maxval != 255) {
    throw ParseError(maxval_offset, "PGM maxval must be 255, got " + std::to_string(maxval));
  }
  header.consume_raster_separator();
  const std::size_t raster_start = pos + header.offset();
  const std::size_t needed = width * height;
  if (bytes.size() - raster_start < needed) {
    throw ParseError(bytes.size(), "truncated PGM raster: need " + std::to_string(needed) +
                                       " bytes from offset " + std::to_string(raster_start) +
                                       ", have " + std::to_string(bytes.size() - raster_start));
  }
  GrayImage img(height, width);
  auto out = img.values();
  for (std::size_t i = 0; i < needed; ++i) out[i] = static_cast<double>(bytes[raster_start + i]);
  return img;
}

/// Encodes as "P5\n<w> <h>\n255\n" followed by the quantized raster.
inline Bytes write_pgm(const GrayImage& img) {
  const std::string header =
      "P5\n" + std::to_string(img.cols()) + " " + std::to_string(img.rows()) + "\n255\n";
  Bytes out;
  out.reserve(header.size() + img.size());
  out.insert(out.end(), header.begin(), header.end());
  for (double v : img.values()) out.push_back(static_cast<std::uint8_t>(quantize_pixel(v)));
  return out;
}

/// Bilinear resampling with half-pixel centre alignment and edge clamping.
inline GrayImage resize_to(const GrayImage& img, std::size_t h, std::size_t w) {
  if (h == 0 || w == 0) throw DimensionError("resize_to: target dimensions must be >= 1");
  if (img.empty()) throw DimensionError("resize_to: empty source image");
  if (h == img.rows() && w == img.cols()) return img;

  const double sy = static_cast<double>(img.rows()) / static_cast<double>(h);
  const double sx = static_cast<double>(img.cols()) / static_cast<double>(w);
  const double max_y = static_cast<double>(img.rows() - 1);
  const double max_x = static_cast<double>(img.cols() - 1);

  GrayImage out(h, w);
  for (std::size_t r = 0; r < h; ++r) {
    const double y = std::clamp((static_cast<double>(r) + 0.5) * sy - 0.5, 0.0, max_y);
    const auto y0 = static_cast<std::size_t>(y);
    const std::size_t y1 = std::min(y0 + 1, img.rows() - 1);
    const double fy = y - static_cast<double>(y0);
    for (std::size_t c = 0; c < w; ++c) {
      const double x = std::clamp((static_cast<double>(c) + 0.5) * sx - 0.5, 0.0, max_x);
      const auto x0 = static_cast<std::size_t>(x);
      const std::size_t x1 = std::min(x0 + 1, img.cols() - 1);
      const double fx = x - static_cast<double>(x0);
      const double top = img(y0, x0) + fx * (img(y0, x1) - img(y0, x0));
      const double bottom = img(y1, x0) + fx * (img(y1, x1) - img(y1, x0));
      const auto [lo, hi] = std::minmax({img(y0, x0), img(y0, x1), img(y1, x0), img(y1, x1)});
      out(r, c) = std::clamp(top + fy * (bottom - top), lo, hi);
    }
  }
  return out;
}

}  // namespace specmark
