#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

#include "specmark/error.hpp"
#include "specmark/grid.hpp"

namespace specmark {

enum class NccVariant {
  eq6,      // sum(w * w') / sum(w^2), unnormalised in w'
  pearson,  // mean-centred correlation coefficient
};

inline const char* ncc_variant_name(NccVariant v) {
  return v == NccVariant::eq6 ? "eq6" : "pearson";
}

inline NccVariant parse_ncc_variant(const std::string& s) {
  if (s == "eq6") return NccVariant::eq6;
  if (s == "pearson") return NccVariant::pearson;
  throw ParameterError("unknown NCC variant '" + s + "' (expected eq6 or pearson)");
}

inline double mse(const GrayImage& a, const GrayImage& b) {
  require_same_dims(a, b, "mse");
  if (a.empty()) throw DimensionError("mse: empty images");
  auto av = a.values();
  auto bv = b.values();
  double acc = 0.0;
  for (std::size_t i = 0; i < av.size(); ++i) {
    const double d = av[i] - bv[i];
    acc += d * d;
  }
  return acc / static_cast<double>(av.size());
}

/// 10 log10(255^2 / mse); +infinity when the images are identical.
inline double psnr_from_mse(double m) {
  if (m == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(255.0 * 255.0 / m);
}

inline double psnr(const GrayImage& a, const GrayImage& b) { return psnr_from_mse(mse(a, b)); }

inline double ncc(const GrayImage& w, const GrayImage& w_prime, NccVariant variant = NccVariant::eq6) {
  require_same_dims(w, w_prime, "ncc");
  auto a = w.values();
  auto b = w_prime.values();
  if (variant == NccVariant::eq6) {
    double cross = 0.0;
    double energy = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      cross += a[i] * b[i];
      energy += a[i] * a[i];
    }
    if (energy == 0.0) throw DegenerateInputError("ncc: reference watermark is identically zero");
    return cross / energy;
  }

  const double n = static_cast<double>(a.size());
  double mean_a = 0.0;
  double mean_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    mean_a += a[i];
    mean_b += b[i];
  }
  mean_a /= n;
  mean_b /= n;
  double cross = 0.0, var_a = 0.0, var_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - mean_a;
    const double db = b[i] - mean_b;
    cross += da * db;
    var_a += da * da;
    var_b += db * db;
  }
  if (var_a == 0.0 || var_b == 0.0) {
    throw DegenerateInputError("ncc (pearson): an input has zero variance");
  }
  return cross / std::sqrt(var_a * var_b);
}

struct QualityReport {
  double mse = 0.0;
  double psnr_db = std::numeric_limits<double>::infinity();
  double ncc = 1.0;
  std::size_t height = 0;
  std::size_t width = 0;
  std::string notes;
};

/// PSNR between `original` and `distorted`, NCC between `wm` and `wm_recovered`.
inline QualityReport make_report(const GrayImage& original, const GrayImage& distorted,
                                 const GrayImage& wm, const GrayImage& wm_recovered,
                                 NccVariant variant = NccVariant::eq6) {
  QualityReport r;
  r.mse = mse(original, distorted);
  r.psnr_db = psnr_from_mse(r.mse);
  r.ncc = ncc(wm, wm_recovered, variant);
  r.height = original.rows();
  r.width = original.cols();
  r.notes = std::string("ncc=") + ncc_variant_name(variant);
  return r;
}

}  // namespace specmark
