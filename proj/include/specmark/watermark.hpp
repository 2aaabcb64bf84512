#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "specmark/dct.hpp"
#include "specmark/dwt.hpp"
#include "specmark/error.hpp"
#include "specmark/grid.hpp"
#include "specmark/svd.hpp"
#include "specmark/zigzag.hpp"

namespace specmark {

inline constexpr double kDefaultAlpha = 0.05;

/// The three detail bands that carry the mark, in key-file order.
enum class DetailBand { lh = 0, hl = 1, hh = 2 };
inline constexpr std::array<DetailBand, 3> kDetailBands{DetailBand::lh, DetailBand::hl,
                                                        DetailBand::hh};

inline const char* band_name(DetailBand b) {
  switch (b) {
    case DetailBand::lh: return "LH";
    case DetailBand::hl: return "HL";
    case DetailBand::hh: return "HH";
  }
  return "?";
}

inline Matrix& band_of(SubBands& sb, DetailBand b) {
  switch (b) {
    case DetailBand::lh: return sb.lh;
    case DetailBand::hl: return sb.hl;
    case DetailBand::hh: return sb.hh;
  }
  return sb.hh;
}

inline const Matrix& band_of(const SubBands& sb, DetailBand b) {
  switch (b) {
    case DetailBand::lh: return sb.lh;
    case DetailBand::hl: return sb.hl;
    case DetailBand::hh: return sb.hh;
  }
  return sb.hh;
}

struct WatermarkFactors {
  Matrix u;
  Matrix v;

  friend bool operator==(const WatermarkFactors&, const WatermarkFactors&) = default;
};

/// Side information needed to pull the watermark back out of a suspect image.
/// Singular vectors and factors are indexed by DetailBand.
struct EmbedKey {
  double alpha = kDefaultAlpha;
  std::array<std::vector<double>, 3> host_singulars;
  std::array<WatermarkFactors, 3> wm_factors;
  Matrix wm_ll;
  std::size_t side = 0;  // host height == width

  std::size_t half() const noexcept { return side / 2; }

  friend bool operator==(const EmbedKey&, const EmbedKey&) = default;
};

struct WatermarkResult {
  GrayImage watermarked;  // real-valued, not clamped
  EmbedKey key;
};

/// s + alpha * s_w, element-wise.
inline std::vector<double> modify_singulars(const std::vector<double>& host,
                                            const std::vector<double>& mark, double alpha) {
  if (host.size() != mark.size()) {
    throw DimensionError("modify_singulars: length mismatch " + std::to_string(host.size()) +
                         " vs " + std::to_string(mark.size()));
  }
  std::vector<double> out(host.size());
  for (std::size_t i = 0; i < host.size(); ++i) out[i] = host[i] + alpha * mark[i];
  return out;
}

/// (s_marked - s_host) / alpha, element-wise.
inline std::vector<double> recover_singulars(const std::vector<double>& marked,
                                             const std::vector<double>& host, double alpha) {
  if (marked.size() != host.size()) {
    throw DimensionError("recover_singulars: length mismatch " + std::to_string(marked.size()) +
                         " vs " + std::to_string(host.size()));
  }
  std::vector<double> out(marked.size());
  for (std::size_t i = 0; i < marked.size(); ++i) out[i] = (marked[i] - host[i]) / alpha;
  return out;
}

namespace detail {

inline void require_embeddable(const GrayImage& img, const char* what) {
  if (!img.is_square() || img.empty() || img.rows() % 2 != 0) {
    throw DimensionError(std::string(what) + " must be square with an even side, got " +
                         dims_string(img));
  }
}

inline void require_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw ParameterError("alpha must be a positive finite number, got " + std::to_string(alpha));
  }
}

}  // namespace detail

/// Hides `wm` in the singular values of the DCT of each detail band of the
/// zigzag-rearranged host. LL passes through untouched.
inline WatermarkResult embed(const GrayImage& host, const GrayImage& wm, double alpha) {
  detail::require_embeddable(host, "host image");
  require_same_dims(host, wm, "embed (watermark must match host; resize it first)");
  detail::require_alpha(alpha);

  SubBands host_bands = dwt2(zigzag_scan(host));
  const SubBands wm_bands = dwt2(wm);

  EmbedKey key;
  key.alpha = alpha;
  key.side = host.rows();
  key.wm_ll = wm_bands.ll;

  for (DetailBand b : kDetailBands) {
    const auto idx = static_cast<std::size_t>(b);
    SvdFactors host_f = svd(dct2(band_of(host_bands, b)));
    SvdFactors wm_f = svd(dct2(band_of(wm_bands, b)));

    key.host_singulars[idx] = host_f.s;
    host_f.s = modify_singulars(host_f.s, wm_f.s, alpha);
    band_of(host_bands, b) = idct2(svd_reconstruct(host_f));
    key.wm_factors[idx] = WatermarkFactors{std::move(wm_f.u), std::move(wm_f.v)};
  }

  return WatermarkResult{zigzag_unscan(idwt2(host_bands)), std::move(key)};
}

/// Non-blind recovery: reads the suspect's detail-band singular values and
/// rebuilds the watermark from the key's stored factors and LL band.
inline GrayImage extract(const GrayImage& suspect, const EmbedKey& key) {
  if (suspect.rows() != key.side || suspect.cols() != key.side) {
    throw DimensionError("extract: suspect image is " + dims_string(suspect) +
                         " but the key was made for " + dims_string(key.side, key.side));
  }
  detail::require_alpha(key.alpha);
  const SubBands suspect_bands = dwt2(zigzag_scan(suspect));

  SubBands recovered{key.wm_ll, Matrix(), Matrix(), Matrix()};
  for (DetailBand b : kDetailBands) {
    const auto idx = static_cast<std::size_t>(b);
    const auto marked = singular_values(dct2(band_of(suspect_bands, b)));
    SvdFactors wm_f{key.wm_factors[idx].u,
                    recover_singulars(marked, key.host_singulars[idx], key.alpha),
                    key.wm_factors[idx].v};
    band_of(recovered, b) = idct2(svd_reconstruct(wm_f));
  }
  return idwt2(recovered);
}

}  // namespace specmark
