#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "specmark/attacks.hpp"
#include "specmark/error.hpp"
#include "specmark/image.hpp"
#include "specmark/io.hpp"
#include "specmark/metrics.hpp"
#include "specmark/watermark.hpp"

namespace specmark {

inline constexpr const char* kSeedEnvVar = "SPECMARK_SEED";
inline constexpr const char* kCsvHeader = "attack,host,watermark,ncc,psnr_attacked";

/// Global default seed for stochastic attacks: $SPECMARK_SEED, else 0.
inline std::uint64_t default_seed_from_env() {
  const char* env = std::getenv(kSeedEnvVar);
  if (env == nullptr || *env == '\0') return 0;
  const std::string_view s(env);
  std::uint64_t seed = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), seed);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw ParameterError(std::string(kSeedEnvVar) + " must be an unsigned integer, got '" + env + "'");
  }
  return seed;
}

struct BenchConfig {
  std::vector<std::string> host_paths;
  std::vector<std::string> wm_paths;
  double alpha = kDefaultAlpha;
  std::vector<std::string> attack_grid;  // canonical attack strings, echoed verbatim
  std::string output_dir = ".";
  bool emit_csv = true;
  bool emit_markdown = true;
  NccVariant ncc_variant = NccVariant::eq6;
  std::uint64_t seed = 0;
  std::filesystem::path base_dir;  // relative paths resolve against this
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace detail

/// Parses the flat key=value config. Keys: host, watermark (repeatable),
/// alpha, attack (repeatable; default grid when absent), output_dir,
/// emit (csv, markdown or both, comma separated), ncc_variant, seed.
/// '#' starts a comment line.
inline BenchConfig parse_bench_config(std::string_view text, std::uint64_t default_seed = 0) {
  BenchConfig cfg;
  cfg.seed = default_seed;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    const auto raw = text.substr(start, nl == std::string_view::npos ? text.size() - start : nl - start);
    start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const std::string line = detail::trim(raw);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParameterError("config line " + std::to_string(line_no) + ": expected key=value");
    }
    const std::string key = detail::trim(std::string_view(line).substr(0, eq));
    const std::string val = detail::trim(std::string_view(line).substr(eq + 1));
    const std::string where = "config line " + std::to_string(line_no) + ": ";
    if (key == "host") {
      cfg.host_paths.push_back(val);
    } else if (key == "watermark") {
      cfg.wm_paths.push_back(val);
    } else if (key == "alpha") {
      double a = 0.0;
      auto [p, ec] = std::from_chars(val.data(), val.data() + val.size(), a);
      if (ec != std::errc() || p != val.data() + val.size() || !(a > 0.0) || !std::isfinite(a))
        throw ParameterError(where + "alpha must be a positive number, got '" + val + "'");
      cfg.alpha = a;
    } else if (key == "attack") {
      cfg.attack_grid.push_back(val);
    } else if (key == "output_dir") {
      cfg.output_dir = val;
    } else if (key == "emit") {
      cfg.emit_csv = cfg.emit_markdown = false;
      std::stringstream ss(val);
      std::string item;
      while (std::getline(ss, item, ',')) {
        item = detail::trim(item);
        if (item == "csv") cfg.emit_csv = true;
        else if (item == "markdown") cfg.emit_markdown = true;
        else throw ParameterError(where + "unknown emit format '" + item + "'");
      }
    } else if (key == "ncc_variant") {
      cfg.ncc_variant = parse_ncc_variant(val);
    } else if (key == "seed") {
      std::uint64_t s = 0;
      auto [p, ec] = std::from_chars(val.data(), val.data() + val.size(), s);
      if (ec != std::errc() || p != val.data() + val.size())
        throw ParameterError(where + "seed must be an unsigned integer, got '" + val + "'");
      cfg.seed = s;
    } else {
      throw ParameterError(where + "unknown key '" + key + "'");
    }
  }
  if (cfg.attack_grid.empty()) cfg.attack_grid = default_attack_grid();
  if (cfg.host_paths.empty()) throw ParameterError("config lists no host images");
  if (cfg.wm_paths.empty()) throw ParameterError("config lists no watermark images");
  for (const auto& a : cfg.attack_grid) parse_attack(a, cfg.seed);
  return cfg;
}

struct BenchCell {
  std::string attack;
  std::optional<double> ncc;
  double psnr_attacked = 0.0;
  std::string error;
};

struct BenchPair {
  std::string host;
  std::string watermark;
  std::size_t wm_rows = 0;  // watermark size as read, before any resize
  std::size_t wm_cols = 0;
  bool wm_resized = false;
  std::optional<double> psnr;  // host vs 8-bit watermarked
  std::optional<double> ncc;   // unattacked extraction
  std::string error;
  std::vector<BenchCell> cells;
};

struct BenchReport {
  double alpha = kDefaultAlpha;
  NccVariant ncc_variant = NccVariant::eq6;
  std::vector<std::string> attacks;
  std::vector<BenchPair> pairs;

  bool any_failed() const {
    for (const auto& p : pairs) {
      if (!p.error.empty()) return true;
      for (const auto& c : p.cells)
        if (!c.error.empty()) return true;
    }
    return false;
  }
};

/// Resizes a watermark to the host's dimensions when they differ.
inline GrayImage fit_watermark(const GrayImage& wm, const GrayImage& host) {
  return resize_to(wm, host.rows(), host.cols());
}

/// The recovered watermark as it is written to disk (8-bit). Reported NCC
/// values are computed on this image so they match an evaluation of the file.
inline GrayImage extract_8bit(const GrayImage& suspect, const EmbedKey& key) {
  return quantize(extract(suspect, key));
}

/// Runs one (host, watermark) pair through every attack in the grid. The
/// watermarked image and every attacked image pass through the 8-bit channel.
inline BenchPair run_bench_pair(const GrayImage& host, const GrayImage& wm_raw,
                                const BenchConfig& cfg) {
  BenchPair pair;
  pair.wm_rows = wm_raw.rows();
  pair.wm_cols = wm_raw.cols();
  pair.wm_resized = wm_raw.rows() != host.rows() || wm_raw.cols() != host.cols();
  const GrayImage wm = fit_watermark(wm_raw, host);

  const WatermarkResult embedded = embed(host, wm, cfg.alpha);
  const GrayImage marked = quantize(embedded.watermarked);
  pair.psnr = psnr(host, marked);
  pair.ncc = ncc(wm, extract_8bit(marked, embedded.key), cfg.ncc_variant);

  for (const auto& text : cfg.attack_grid) {
    BenchCell cell;
    cell.attack = text;
    try {
      const AttackSpec spec = parse_attack(text, cfg.seed);
      const GrayImage attacked = quantize(apply_attack(marked, spec));
      cell.psnr_attacked = psnr(marked, attacked);
      cell.ncc = ncc(wm, extract_8bit(attacked, embedded.key), cfg.ncc_variant);
    } catch (const Error& e) {
      cell.error = e.kind() + ": " + e.what();
    }
    pair.cells.push_back(std::move(cell));
  }
  return pair;
}

inline BenchReport run_bench(const BenchConfig& cfg) {
  BenchReport report;
  report.alpha = cfg.alpha;
  report.ncc_variant = cfg.ncc_variant;
  report.attacks = cfg.attack_grid;
  for (const auto& host_path : cfg.host_paths) {
    for (const auto& wm_path : cfg.wm_paths) {
      BenchPair pair;
      try {
        const GrayImage host = load_pgm(cfg.base_dir / host_path);
        const GrayImage wm = load_pgm(cfg.base_dir / wm_path);
        pair = run_bench_pair(host, wm, cfg);
      } catch (const Error& e) {
        pair.error = e.kind() + ": " + e.what();
        for (const auto& a : cfg.attack_grid) pair.cells.push_back({a, std::nullopt, 0.0, pair.error});
      }
      pair.host = host_path;
      pair.watermark = wm_path;
      report.pairs.push_back(std::move(pair));
    }
  }
  return report;
}

namespace detail {

inline std::string fixed(double v, int decimals) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace detail

/// One row per (attack, pair), attack-major. Failed cells carry "error".
inline std::string render_csv(const BenchReport& report) {
  std::string out = std::string(kCsvHeader) + "\n";
  for (std::size_t a = 0; a < report.attacks.size(); ++a) {
    for (const auto& pair : report.pairs) {
      const BenchCell& cell = pair.cells[a];
      out += detail::csv_field(cell.attack) + "," + detail::csv_field(pair.host) + "," +
             detail::csv_field(pair.watermark) + ",";
      if (cell.ncc) {
        out += detail::fixed(*cell.ncc, 6) + "," + detail::fixed(cell.psnr_attacked, 4);
      } else {
        out += "error,error";
      }
      out += "\n";
    }
  }
  return out;
}

inline std::string render_markdown(const BenchReport& report) {
  std::string out = "# Watermark robustness benchmark\n\n";
  out += "alpha = " + detail::format_number(report.alpha) +
         ", NCC variant = " + ncc_variant_name(report.ncc_variant) + "\n\n";

  out += "## Unattacked\n\n| Host | Watermark | PSNR (dB) | NCC |\n|---|---|---|---|\n";
  for (const auto& pair : report.pairs) {
    std::string wm = pair.watermark;
    if (pair.wm_resized) wm += " (resized from " + dims_string(pair.wm_rows, pair.wm_cols) + ")";
    if (pair.psnr && pair.ncc) {
      out += "| " + pair.host + " | " + wm + " | " + detail::fixed(*pair.psnr, 4) + " | " +
             detail::fixed(*pair.ncc, 4) + " |\n";
    } else {
      out += "| " + pair.host + " | " + wm + " | error | error |\n";
    }
  }

  out += "\n## NCC after attack\n\n| Attack |";
  std::string rule = "|---|";
  for (const auto& pair : report.pairs) {
    out += " " + pair.host + " / " + pair.watermark + " |";
    rule += "---|";
  }
  out += "\n" + rule + "\n";
  for (std::size_t a = 0; a < report.attacks.size(); ++a) {
    out += "| " + report.attacks[a] + " |";
    for (const auto& pair : report.pairs) {
      const BenchCell& cell = pair.cells[a];
      out += " " + (cell.ncc ? detail::fixed(*cell.ncc, 4) : std::string("error")) + " |";
    }
    out += "\n";
  }

  bool header = false;
  for (const auto& pair : report.pairs) {
    for (const auto& cell : pair.cells) {
      if (cell.error.empty()) continue;
      if (!header) {
        out += "\n## Errors\n\n";
        header = true;
      }
      out += "- " + cell.attack + " on " + pair.host + " / " + pair.watermark + ": " + cell.error + "\n";
    }
  }
  return out;
}

inline Bytes to_bytes(const std::string& s) { return Bytes(s.begin(), s.end()); }

/// Writes bench.csv and/or bench.md into cfg.output_dir (resolved against
/// cfg.base_dir). Returns the paths written.
inline std::vector<std::filesystem::path> write_bench_outputs(const BenchReport& report,
                                                              const BenchConfig& cfg) {
  const std::filesystem::path dir = cfg.base_dir / cfg.output_dir;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
  AtomicFileSet files;
  std::vector<std::filesystem::path> written;
  if (cfg.emit_csv) {
    files.stage(dir / "bench.csv", to_bytes(render_csv(report)));
    written.push_back(dir / "bench.csv");
  }
  if (cfg.emit_markdown) {
    files.stage(dir / "bench.md", to_bytes(render_markdown(report)));
    written.push_back(dir / "bench.md");
  }
  files.commit();
  return written;
}

}  // namespace specmark
