#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "specmark/error.hpp"
#include "specmark/image.hpp"
#include "specmark/svd.hpp"
#include "specmark/watermark.hpp"

// Key file layout (little-endian):
//   "WMK1" | u32 version = 1 | u32 N | f64 alpha
//   for band in LH, HL, HH:
//     f64[N/2] host singulars | f64[(N/2)^2] Uw row-major | f64[(N/2)^2] Vw row-major
//   f64[(N/2)^2] watermark LL row-major

namespace specmark {

inline constexpr std::uint32_t kKeyVersion = 1;
inline constexpr std::uint32_t kMaxKeySide = 1u << 16;
inline constexpr double kKeyOrthogonalityTolerance = 1e-6;

/// Exact byte size of a key for a host of side n.
inline std::size_t key_file_size(std::size_t n) {
  const std::size_t h = n / 2;
  return 4 + 4 + 4 + 8 + 3 * 8 * (h + 2 * h * h) + 8 * h * h;
}

namespace detail {

class KeyWriter {
 public:
  explicit KeyWriter(std::size_t reserve) { out_.reserve(reserve); }

  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
  }
  void f64s(std::span<const double> vs) {
    for (double v : vs) f64(v);
  }
  void raw(std::string_view s) { out_.insert(out_.end(), s.begin(), s.end()); }

  Bytes take() { return std::move(out_); }

 private:
  Bytes out_;
};

class KeyReader {
 public:
  explicit KeyReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  void need(std::size_t n, const std::string& section) const {
    if (bytes_.size() - pos_ < n) {
      throw FormatError("truncated key file: missing " + section + " (need " +
                        std::to_string(n) + " bytes at offset " + std::to_string(pos_) +
                        ", have " + std::to_string(bytes_.size() - pos_) + ")");
    }
  }
  std::uint32_t u32(const std::string& section) {
    need(4, section);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }
  double f64_unchecked() {
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
    pos_ += 8;
    return std::bit_cast<double>(bits);
  }
  double f64(const std::string& section) {
    need(8, section);
    return f64_unchecked();
  }
  std::vector<double> f64s(std::size_t count, const std::string& section) {
    need(8 * count, section);
    std::vector<double> out(count);
    for (double& v : out) v = f64_unchecked();
    return out;
  }
  std::span<const std::uint8_t> take(std::size_t n, const std::string& section) {
    need(n, section);
    auto s = bytes_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

inline bool all_finite(std::span<const double> vs) {
  return std::all_of(vs.begin(), vs.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace detail

/// Throws IntegrityError unless every EmbedKey invariant holds.
inline void validate_key(const EmbedKey& key) {
  if (key.side == 0 || key.side % 2 != 0) {
    throw IntegrityError("key side length must be positive and even, got " +
                         std::to_string(key.side));
  }
  if (!(key.alpha > 0.0) || !std::isfinite(key.alpha)) {
    throw IntegrityError("key alpha must be positive and finite, got " + std::to_string(key.alpha));
  }
  const std::size_t h = key.half();
  for (DetailBand b : kDetailBands) {
    const auto idx = static_cast<std::size_t>(b);
    const std::string name = band_name(b);
    const auto& s = key.host_singulars[idx];
    if (s.size() != h) {
      throw IntegrityError(name + " host singular vector has length " + std::to_string(s.size()) +
                           ", expected " + std::to_string(h));
    }
    if (!detail::all_finite(s)) throw IntegrityError(name + " host singulars are not finite");
    for (std::size_t i = 0; i < h; ++i) {
      if (s[i] < 0.0 || (i > 0 && s[i] > s[i - 1])) {
        throw IntegrityError(name + " host singulars must be non-negative and non-increasing");
      }
    }
    for (const Matrix* m : {&key.wm_factors[idx].u, &key.wm_factors[idx].v}) {
      const char* which = m == &key.wm_factors[idx].u ? "U" : "V";
      if (m->rows() != h || m->cols() != h) {
        throw IntegrityError(name + " watermark " + which + " is " + dims_string(*m) +
                             ", expected " + dims_string(h, h));
      }
      if (!detail::all_finite(m->values())) {
        throw IntegrityError(name + " watermark " + which + " is not finite");
      }
      const double err = orthogonality_error(*m);
      if (err > kKeyOrthogonalityTolerance) {
        throw IntegrityError(name + " watermark " + which + " is not orthogonal (error " +
                             std::to_string(err) + ")");
      }
    }
  }
  if (key.wm_ll.rows() != h || key.wm_ll.cols() != h) {
    throw IntegrityError("watermark LL band is " + dims_string(key.wm_ll) + ", expected " +
                         dims_string(h, h));
  }
  if (!detail::all_finite(key.wm_ll.values())) {
    throw IntegrityError("watermark LL band is not finite");
  }
}

inline Bytes write_key(const EmbedKey& key) {
  validate_key(key);
  detail::KeyWriter w(key_file_size(key.side));
  w.raw("WMK1");
  w.u32(kKeyVersion);
  w.u32(static_cast<std::uint32_t>(key.side));
  w.f64(key.alpha);
  for (DetailBand b : kDetailBands) {
    const auto idx = static_cast<std::size_t>(b);
    w.f64s(key.host_singulars[idx]);
    w.f64s(key.wm_factors[idx].u.values());
    w.f64s(key.wm_factors[idx].v.values());
  }
  w.f64s(key.wm_ll.values());
  return w.take();
}

inline EmbedKey read_key(std::span<const std::uint8_t> bytes) {
  detail::KeyReader r(bytes);
  const auto magic = r.take(4, "magic");
  if (!std::equal(magic.begin(), magic.end(), "WMK1")) {
    throw FormatError("bad key file magic (expected \"WMK1\")");
  }
  const std::uint32_t version = r.u32("version");
  if (version != kKeyVersion) {
    throw FormatError("unsupported key file version " + std::to_string(version) + " (expected " +
                      std::to_string(kKeyVersion) + ")");
  }
  const std::uint32_t side = r.u32("side length");
  if (side == 0 || side % 2 != 0 || side > kMaxKeySide) {
    throw FormatError("key side length " + std::to_string(side) +
                      " is not a positive even number <= " + std::to_string(kMaxKeySide));
  }
  EmbedKey key;
  key.side = side;
  key.alpha = r.f64("alpha");
  const std::size_t h = key.half();
  for (DetailBand b : kDetailBands) {
    const auto idx = static_cast<std::size_t>(b);
    const std::string name = band_name(b);
    key.host_singulars[idx] = r.f64s(h, name + " host singulars");
    key.wm_factors[idx].u = Matrix(h, h, r.f64s(h * h, name + " watermark U"));
    key.wm_factors[idx].v = Matrix(h, h, r.f64s(h * h, name + " watermark V"));
  }
  key.wm_ll = Matrix(h, h, r.f64s(h * h, "watermark LL band"));
  if (r.remaining() != 0) {
    throw FormatError("key file has " + std::to_string(r.remaining()) +
                      " trailing bytes; expected exactly " + std::to_string(key_file_size(side)));
  }
  validate_key(key);
  return key;
}

}  // namespace specmark
