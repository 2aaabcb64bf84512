#include <gtest/gtest.h>

#include <array>
#include <bit>
#include <cstring>

#include "specmark/attacks.hpp"
#include "specmark/image.hpp"
#include "specmark/key_file.hpp"
#include "specmark/metrics.hpp"
#include "specmark/watermark.hpp"
#include "support/property.hpp"
#include "support/test_images.hpp"

using namespace specmark;
using specmark::testing::for_all;
using specmark::testing::random_image;

namespace {

GrayImage detail_free(const Matrix& ll) {
  const Matrix zero(ll.rows(), ll.cols());
  return idwt2(SubBands{ll, zero, zero, zero});
}

EmbedKey small_key(std::uint64_t seed, std::size_t n = 8, double alpha = 0.05) {
  std::mt19937_64 rng(seed);
  return embed(random_image(rng, n, n), random_image(rng, n, n), alpha).key;
}

}  // namespace

TEST(Embed, VanishingAlphaLeavesHostUnchanged) {
  std::mt19937_64 rng(31);
  const GrayImage host = random_image(rng, 32, 32);
  const GrayImage wm = random_image(rng, 32, 32);
  EXPECT_LE(max_abs_diff(embed(host, wm, 1e-12).watermarked, host), 1e-6);
}

TEST(Embed, ZeroWatermarkLeavesHostUnchanged) {
  std::mt19937_64 rng(32);
  const GrayImage host = random_image(rng, 32, 32);
  EXPECT_LE(max_abs_diff(embed(host, GrayImage(32, 32), 0.2).watermarked, host), 1e-9);
}

TEST(Embed, KeyRecordsInputs) {
  std::mt19937_64 rng(33);
  const GrayImage host = random_image(rng, 16, 16);
  const GrayImage wm = random_image(rng, 16, 16);
  const WatermarkResult r = embed(host, wm, 0.07);
  EXPECT_EQ(r.key.alpha, 0.07);
  EXPECT_EQ(r.key.side, 16u);
  EXPECT_EQ(r.key.wm_ll, dwt2(wm).ll);
  EXPECT_EQ(r.watermarked.rows(), 16u);
  EXPECT_NO_THROW(validate_key(r.key));
}

TEST(Embed, RejectsBadShapesAndAlpha) {
  EXPECT_THROW(embed(GrayImage(8, 6), GrayImage(8, 6), 0.05), DimensionError);
  EXPECT_THROW(embed(GrayImage(7, 7), GrayImage(7, 7), 0.05), DimensionError);
  EXPECT_THROW(embed(GrayImage(8, 8), GrayImage(16, 16), 0.05), DimensionError);
  EXPECT_THROW(embed(GrayImage(8, 8), GrayImage(8, 8), 0.0), ParameterError);
  EXPECT_THROW(embed(GrayImage(8, 8), GrayImage(8, 8), -1.0), ParameterError);
}

TEST(Extract, HostItselfYieldsOnlyStoredLL) {
  std::mt19937_64 rng(34);
  const GrayImage host = random_image(rng, 32, 32);
  const WatermarkResult r = embed(host, random_image(rng, 32, 32), 0.05);
  const GrayImage recovered = extract(host, r.key);
  EXPECT_LE(max_abs_diff(recovered, detail_free(r.key.wm_ll)), 1e-6);
}

TEST(Extract, DimensionMismatchNamesBothSizes) {
  const EmbedKey key = small_key(1);
  try {
    extract(GrayImage(10, 10), key);
    FAIL() << "expected DimensionError";
  } catch (const DimensionError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("10x10"), std::string::npos);
    EXPECT_NE(msg.find("8x8"), std::string::npos);
  }
}

TEST(Extract, QuantisedRoundTripOnSyntheticImages) {
  const std::size_t n = 128;
  const GrayImage host = specmark::testing::scene_host(n);
  const GrayImage wm = specmark::testing::logo_watermark(n);
  const WatermarkResult r = embed(host, wm, kDefaultAlpha);
  const GrayImage marked = quantize(r.watermarked);
  EXPECT_GE(ncc(wm, extract(marked, r.key)), 0.99);
  EXPECT_GE(ncc(wm, quantize(extract(marked, r.key))), 0.99);
}

TEST(Extract, SurvivesHeavyJpeg) {
  const std::size_t n = 256;
  const GrayImage host = specmark::testing::texture_host(n);
  const GrayImage wm = specmark::testing::logo_watermark(n);
  const WatermarkResult r = embed(host, wm, kDefaultAlpha);
  const GrayImage marked = quantize(r.watermarked);
  const GrayImage attacked = jpeg_simulate(marked, 10);
  ASSERT_GT(mse(marked, attacked), 1.0);  // visibly degraded
  EXPECT_GE(ncc(wm, extract(attacked, r.key)), 0.9);
}

TEST(WatermarkProperty, AlgebraicRoundTrip64) {
  for (double alpha : {0.01, 0.05, 0.2}) {
    for_all(10, 35, [alpha](std::mt19937_64& rng, int) {
      const GrayImage host = random_image(rng, 64, 64);
      const GrayImage wm = random_image(rng, 64, 64);
      const WatermarkResult r = embed(host, wm, alpha);
      EXPECT_GE(ncc(wm, extract(r.watermarked, r.key)), 0.999) << "alpha " << alpha;
    });
  }
}

TEST(WatermarkProperty, AlgebraicRoundTripSmall) {
  for_all(100, 36, [](std::mt19937_64& rng, int i) {
    const std::array<double, 3> alphas{0.01, 0.05, 0.2};
    const GrayImage host = random_image(rng, 16, 16);
    const GrayImage wm = random_image(rng, 16, 16);
    const WatermarkResult r = embed(host, wm, alphas[static_cast<std::size_t>(i) % 3]);
    EXPECT_GE(ncc(wm, extract(r.watermarked, r.key)), 0.999);
  });
}

TEST(WatermarkProperty, DistortionGrowsWithAlpha) {
  for_all(100, 37, [](std::mt19937_64& rng, int) {
    const GrayImage host = random_image(rng, 16, 16);
    const GrayImage wm = random_image(rng, 16, 16);
    double previous = std::numeric_limits<double>::infinity();
    for (double alpha : {0.01, 0.05, 0.1, 0.2, 0.5}) {
      const double p = psnr(host, embed(host, wm, alpha).watermarked);
      EXPECT_LE(p, previous) << "alpha " << alpha;
      previous = p;
    }
  });
}

TEST(WatermarkProperty, LowBandIsUntouched) {
  for_all(100, 38, [](std::mt19937_64& rng, int) {
    std::uniform_int_distribution<std::size_t> half(1, 12);
    const std::size_t n = 2 * half(rng);
    const GrayImage host = random_image(rng, n, n);
    const WatermarkResult r = embed(host, random_image(rng, n, n), 0.2);
    const Matrix ll_marked = dwt2(zigzag_scan(r.watermarked)).ll;
    EXPECT_LE(max_abs_diff(ll_marked, dwt2(zigzag_scan(host)).ll), 1e-9);
  });
}

TEST(WatermarkProperty, SingularValueAlgebraInverts) {
  for_all(100, 39, [](std::mt19937_64& rng, int) {
    std::uniform_int_distribution<std::size_t> len(1, 40);
    std::uniform_real_distribution<double> val(0.0, 5000.0);
    std::uniform_real_distribution<double> alpha(0.001, 1.0);
    const std::size_t n = len(rng);
    std::vector<double> s(n), sw(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = val(rng);
      sw[i] = val(rng);
    }
    std::sort(s.begin(), s.end(), std::greater<>());
    std::sort(sw.begin(), sw.end(), std::greater<>());
    const double a = alpha(rng);
    const auto back = recover_singulars(modify_singulars(s, sw, a), s, a);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(back[i], sw[i], 1e-9 * std::max(1.0, sw[i]));
  });
}

// --- key file ----------------------------------------------------------------

TEST(KeyFile, LayoutHeader) {
  const EmbedKey key = small_key(2, 8, 0.05);
  const Bytes bytes = write_key(key);
  ASSERT_EQ(bytes.size(), key_file_size(8));
  EXPECT_EQ(key_file_size(8), 20u + 3 * 8 * (4 + 32) + 8 * 16);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "WMK1");
  EXPECT_EQ(bytes[4], 1);
  EXPECT_EQ(bytes[5] | bytes[6] | bytes[7], 0);
  EXPECT_EQ(bytes[8], 8);
  std::uint64_t alpha_bits = 0;
  for (int i = 0; i < 8; ++i) alpha_bits |= static_cast<std::uint64_t>(bytes[12 + i]) << (8 * i);
  EXPECT_EQ(std::bit_cast<double>(alpha_bits), 0.05);
  std::uint64_t s0_bits = 0;
  for (int i = 0; i < 8; ++i) s0_bits |= static_cast<std::uint64_t>(bytes[20 + i]) << (8 * i);
  EXPECT_EQ(std::bit_cast<double>(s0_bits), key.host_singulars[0][0]);
}

TEST(KeyFile, EqualKeysSerialiseIdentically) {
  EXPECT_EQ(write_key(small_key(3)), write_key(small_key(3)));
}

TEST(KeyFile, TruncationNamesMissingSection) {
  const Bytes full = write_key(small_key(4));
  struct Case {
    std::size_t keep;
    const char* section;
  };
  const std::size_t h = 4;
  for (const Case& c : {Case{2, "magic"}, Case{6, "version"}, Case{10, "side length"},
                        Case{15, "alpha"}, Case{20 + 8, "LH host singulars"},
                        Case{20 + 8 * h + 8, "LH watermark U"},
                        Case{full.size() - 1, "watermark LL band"}}) {
    try {
      read_key(std::span(full).first(c.keep));
      ADD_FAILURE() << "expected FormatError for " << c.section;
    } catch (const FormatError& e) {
      EXPECT_NE(std::string(e.what()).find(c.section), std::string::npos) << e.what();
    }
  }
}

TEST(KeyFile, RejectsBadMagicVersionAndTrailingBytes) {
  Bytes bytes = write_key(small_key(5));
  Bytes bad = bytes;
  bad[0] ^= 0xFF;
  EXPECT_THROW(read_key(bad), FormatError);
  bad = bytes;
  bad[4] = 2;
  EXPECT_THROW(read_key(bad), FormatError);
  bad = bytes;
  bad[8] = 9;  // odd side
  EXPECT_THROW(read_key(bad), FormatError);
  bad = bytes;
  bad.push_back(0);
  EXPECT_THROW(read_key(bad), FormatError);
}

TEST(KeyFile, RejectsNonPositiveAlpha) {
  Bytes bytes = write_key(small_key(6));
  for (double alpha : {0.0, -0.05, std::numeric_limits<double>::quiet_NaN()}) {
    const auto bits = std::bit_cast<std::uint64_t>(alpha);
    for (int i = 0; i < 8; ++i) bytes[12 + static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(bits >> (8 * i));
    EXPECT_THROW(read_key(bytes), IntegrityError);
  }
}

TEST(KeyFile, RejectsNonOrthogonalFactor) {
  EmbedKey key = small_key(7);
  const Bytes good = write_key(key);
  Bytes bad = good;
  // First entry of LH's U lives right after LH's 4 host singulars.
  const std::size_t u00 = 20 + 8 * 4;
  const double perturbed = key.wm_factors[0].u(0, 0) + 1e-3;
  const auto bits = std::bit_cast<std::uint64_t>(perturbed);
  for (int i = 0; i < 8; ++i) bad[u00 + static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(bits >> (8 * i));
  EXPECT_THROW(read_key(bad), IntegrityError);
  key.wm_factors[0].u(0, 0) = perturbed;
  EXPECT_THROW(write_key(key), IntegrityError);
}

TEST(KeyFileProperty, RoundTripIsBitExact) {
  for_all(100, 40, [](std::mt19937_64& rng, int) {
    std::uniform_int_distribution<std::size_t> half(1, 8);
    std::uniform_real_distribution<double> alpha(0.001, 1.0);
    const std::size_t n = 2 * half(rng);
    const EmbedKey key = embed(random_image(rng, n, n), random_image(rng, n, n), alpha(rng)).key;
    const Bytes bytes = write_key(key);
    EXPECT_EQ(bytes.size(), key_file_size(n));
    const EmbedKey back = read_key(bytes);
    EXPECT_EQ(back, key);
    EXPECT_EQ(write_key(back), bytes);
  });
}
