// specmark: command-line front end for embedding, extraction, attacks,
// evaluation and the robustness benchmark.
//
// Every failure prints exactly one line "error: <kind>: <message>" to stderr
// and exits nonzero (1 for runtime failures, 2 for usage errors).

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "specmark/specmark.hpp"

namespace fs = std::filesystem;
using namespace specmark;

namespace {

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

int cmd_embed(const std::string& host_path, const std::string& wm_path, double alpha,
              const std::string& out_path, const std::string& key_path) {
  const GrayImage host = load_pgm(host_path);
  const GrayImage wm_raw = load_pgm(wm_path);
  const GrayImage wm = fit_watermark(wm_raw, host);
  const WatermarkResult res = embed(host, wm, alpha);
  const GrayImage marked = quantize(res.watermarked);

  AtomicFileSet files;
  files.stage(out_path, write_pgm(marked));
  files.stage(key_path, write_key(res.key));
  files.commit();

  std::printf("size=%s\n", dims_string(host).c_str());
  std::printf("alpha=%s\n", fmt(alpha).c_str());
  std::printf("psnr_db=%s\n", fmt(psnr(host, marked)).c_str());
  if (wm_raw.rows() != wm.rows() || wm_raw.cols() != wm.cols()) {
    std::printf("note=watermark resized from %s to %s\n", dims_string(wm_raw).c_str(),
                dims_string(wm).c_str());
  }
  return 0;
}

int cmd_extract(const std::string& suspect_path, const std::string& key_path,
                const std::string& out_path, const std::optional<std::string>& ref_path,
                NccVariant variant) {
  EmbedKey key;
  try {
    key = load_key(key_path);
  } catch (const Error& e) {
    throw Error(e.kind(), key_path + ": " + e.what());
  }
  const GrayImage suspect = load_pgm(suspect_path);
  const GrayImage recovered = extract_8bit(suspect, key);
  write_file_atomic(out_path, write_pgm(recovered));

  std::printf("size=%s\n", dims_string(recovered).c_str());
  if (ref_path) {
    const GrayImage ref_raw = load_pgm(*ref_path);
    const GrayImage ref = resize_to(ref_raw, recovered.rows(), recovered.cols());
    std::printf("ncc_variant=%s\n", ncc_variant_name(variant));
    std::printf("ncc=%s\n", fmt(ncc(ref, recovered, variant)).c_str());
  }
  return 0;
}

int cmd_attack(const std::string& input_path, const std::string& spec_text,
               const std::string& out_path) {
  const AttackSpec spec = parse_attack(spec_text, default_seed_from_env());
  const GrayImage input = load_pgm(input_path);
  const GrayImage attacked = quantize(apply_attack(input, spec));
  write_file_atomic(out_path, write_pgm(attacked));
  std::printf("attack=%s\n", to_string(spec).c_str());
  std::printf("psnr_db=%s\n", fmt(psnr(input, attacked)).c_str());
  return 0;
}

int cmd_evaluate(const std::string& a_path, const std::string& b_path, NccVariant variant) {
  const GrayImage a = load_pgm(a_path);
  const GrayImage b = load_pgm(b_path);
  const double m = mse(a, b);
  std::printf("size=%s\n", dims_string(a).c_str());
  std::printf("mse=%s\n", fmt(m).c_str());
  std::printf("psnr_db=%s\n", fmt(psnr_from_mse(m)).c_str());
  std::printf("ncc_variant=%s\n", ncc_variant_name(variant));
  std::printf("ncc=%s\n", fmt(ncc(a, b, variant)).c_str());
  return 0;
}

int cmd_bench(const std::string& config_path) {
  const Bytes text = read_file(config_path);
  BenchConfig cfg = parse_bench_config(std::string_view(reinterpret_cast<const char*>(text.data()), text.size()),
                                       default_seed_from_env());
  cfg.base_dir = fs::path(config_path).parent_path();
  const BenchReport report = run_bench(cfg);
  for (const auto& path : write_bench_outputs(report, cfg)) std::printf("wrote=%s\n", path.string().c_str());

  for (const auto& pair : report.pairs) {
    if (pair.psnr && pair.ncc) {
      std::printf("pair=%s,%s psnr_db=%s ncc=%s\n", pair.host.c_str(), pair.watermark.c_str(),
                  fmt(*pair.psnr).c_str(), fmt(*pair.ncc).c_str());
    }
  }
  if (report.any_failed()) {
    std::fprintf(stderr, "error: bench: one or more cells failed; see the report\n");
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid DWT-DCT-SVD image watermarking toolkit"};
  app.require_subcommand(1);

  std::string host, wm, out, key, suspect, input, spec_text, a_path, b_path, config, variant_text = "eq6";
  std::optional<std::string> ref;
  double alpha = kDefaultAlpha;

  auto* embed_cmd = app.add_subcommand("embed", "Embed a watermark into a host PGM");
  embed_cmd->add_option("host", host, "Host image (square, even side, P5 PGM)")->required();
  embed_cmd->add_option("watermark", wm, "Watermark image (resized to host size if needed)")->required();
  embed_cmd->add_option("--alpha", alpha, "Embedding strength")->capture_default_str();
  embed_cmd->add_option("--out", out, "Watermarked image output")->required();
  embed_cmd->add_option("--key", key, "Key file output")->required();

  auto* extract_cmd = app.add_subcommand("extract", "Recover a watermark using a key file");
  extract_cmd->add_option("suspect", suspect, "Suspect image")->required();
  extract_cmd->add_option("--key", key, "Key file written by embed")->required();
  extract_cmd->add_option("--out", out, "Recovered watermark output")->required();
  extract_cmd->add_option("--ref-watermark", ref, "Original watermark for NCC reporting");
  extract_cmd->add_option("--ncc-variant", variant_text, "eq6 or pearson")->capture_default_str();

  auto* attack_cmd = app.add_subcommand("attack", "Apply one attack to an image");
  attack_cmd->add_option("input", input, "Input image")->required();
  attack_cmd->add_option("spec", spec_text, "Attack, e.g. median:k=13 or sp:d=0.05:seed=42")->required();
  attack_cmd->add_option("--out", out, "Attacked image output")->required();

  auto* eval_cmd = app.add_subcommand("evaluate", "MSE/PSNR/NCC between two images");
  eval_cmd->add_option("reference", a_path, "Reference image (PSNR original, NCC w)")->required();
  eval_cmd->add_option("candidate", b_path, "Candidate image")->required();
  eval_cmd->add_option("--ncc-variant", variant_text, "eq6 or pearson")->capture_default_str();

  auto* bench_cmd = app.add_subcommand("bench", "Run the attack grid described by a config file");
  bench_cmd->add_option("config", config, "key=value config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "error: usage: %s\n", e.what());
    return 2;
  }

  try {
    const NccVariant variant = parse_ncc_variant(variant_text);
    if (*embed_cmd) return cmd_embed(host, wm, alpha, out, key);
    if (*extract_cmd) return cmd_extract(suspect, key, out, ref, variant);
    if (*attack_cmd) return cmd_attack(input, spec_text, out);
    if (*eval_cmd) return cmd_evaluate(a_path, b_path, variant);
    if (*bench_cmd) return cmd_bench(config);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s: %s\n", e.kind().c_str(), e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: internal: %s\n", e.what());
    return 1;
  }
  return 1;
}
