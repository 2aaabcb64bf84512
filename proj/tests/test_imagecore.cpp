#include <gtest/gtest.h>

#include <algorithm>
#include <string>

#include "specmark/image.hpp"
#include "support/property.hpp"

using namespace specmark;
using specmark::testing::for_all;

namespace {

Bytes bytes_of(const std::string& header, std::initializer_list<int> raster) {
  Bytes b(header.begin(), header.end());
  for (int v : raster) b.push_back(static_cast<std::uint8_t>(v));
  return b;
}

}  // namespace

TEST(ReadPgm, CopiesRasterRowMajor) {
  const GrayImage img = read_pgm(bytes_of("P5\n2 2\n255\n", {0, 128, 255, 64}));
  ASSERT_EQ(img.rows(), 2u);
  ASSERT_EQ(img.cols(), 2u);
  EXPECT_EQ(img, (GrayImage{{0, 128}, {255, 64}}));
}

TEST(ReadPgm, NonSquareUsesWidthThenHeight) {
  const GrayImage img = read_pgm(bytes_of("P5 3 1 255\n", {1, 2, 3}));
  EXPECT_EQ(img.rows(), 1u);
  EXPECT_EQ(img.cols(), 3u);
  EXPECT_EQ(img(0, 2), 3.0);
}

TEST(ReadPgm, CommentsBetweenTokensAreIgnored) {
  const auto plain = read_pgm(bytes_of("P5\n2 2\n255\n", {9, 8, 7, 6}));
  const auto commented =
      read_pgm(bytes_of("P5\n# made by hand\n2 # width\n  2\n# maxval next\n255\n", {9, 8, 7, 6}));
  EXPECT_EQ(plain, commented);
}

TEST(ReadPgm, RejectsAsciiVariant) {
  try {
    read_pgm(bytes_of("P2\n2 2\n255\n", {}));
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 0u);
  }
}

TEST(ReadPgm, RejectsOtherMaxvalAtItsOffset) {
  try {
    read_pgm(bytes_of("P5\n2 2\n65535\n", {0, 0, 0, 0}));
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 7u);
    EXPECT_NE(std::string(e.what()).find("maxval"), std::string::npos);
  }
}

TEST(ReadPgm, RejectsTruncatedRaster) {
  try {
    read_pgm(bytes_of("P5\n2 2\n255\n", {1, 2, 3}));
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 14u);  // end of the available bytes
    EXPECT_NE(std::string(e.what()).find("truncated"), std::string::npos);
  }
}

TEST(ReadPgm, RejectsMalformedHeaders) {
  EXPECT_THROW(read_pgm(bytes_of("P5", {})), ParseError);
  EXPECT_THROW(read_pgm(bytes_of("P5\nx 2\n255\n", {})), ParseError);
  EXPECT_THROW(read_pgm(bytes_of("P5\n0 2\n255\n", {})), ParseError);
  EXPECT_THROW(read_pgm(bytes_of("P5\n2 2\n255", {})), ParseError);
  EXPECT_THROW(read_pgm(bytes_of("P52 2\n255\n", {1, 2, 3, 4})), ParseError);
  EXPECT_THROW(read_pgm(Bytes{}), ParseError);
}

TEST(WritePgm, ClampsThenRoundsHalfAwayFromZero) {
  const Bytes out = write_pgm(GrayImage{{-4.2, 255.9, 127.5}});
  const std::string header = "P5\n3 1\n255\n";
  ASSERT_EQ(out.size(), header.size() + 3);
  EXPECT_TRUE(std::equal(header.begin(), header.end(), out.begin()));
  EXPECT_EQ(out[header.size() + 0], 0);
  EXPECT_EQ(out[header.size() + 1], 255);
  EXPECT_EQ(out[header.size() + 2], 128);
}

TEST(WritePgm, ExactHeaderAndByteCountFor512Zero) {
  const Bytes out = write_pgm(GrayImage(512, 512, 0.0));
  const std::string header = "P5\n512 512\n255\n";
  ASSERT_EQ(out.size(), header.size() + 262144u);
  EXPECT_TRUE(std::equal(header.begin(), header.end(), out.begin()));
  EXPECT_TRUE(std::all_of(out.begin() + static_cast<std::ptrdiff_t>(header.size()), out.end(),
                          [](std::uint8_t b) { return b == 0; }));
}

TEST(Quantize, HalfAwayFromZero) {
  EXPECT_EQ(quantize_pixel(0.5), 1.0);
  EXPECT_EQ(quantize_pixel(2.5), 3.0);
  EXPECT_EQ(quantize_pixel(2.4999), 2.0);
  EXPECT_EQ(quantize_pixel(-0.5), 0.0);
  EXPECT_EQ(quantize_pixel(1e9), 255.0);
}

TEST(PgmProperty, ReadOfWriteIsIdentityOnByteImages) {
  for_all(100, 11, [](std::mt19937_64& rng, int) {
    std::uniform_int_distribution<std::size_t> dim(1, 40);
    const GrayImage img = specmark::testing::random_byte_image(rng, dim(rng), dim(rng));
    EXPECT_EQ(read_pgm(write_pgm(img)), img);
  });
}

TEST(PgmProperty, WriteOfReadIsIdentityOnNormalisedFiles) {
  for_all(100, 12, [](std::mt19937_64& rng, int) {
    std::uniform_int_distribution<std::size_t> dim(1, 30);
    const GrayImage img = specmark::testing::random_byte_image(rng, dim(rng), dim(rng));
    const Bytes canonical = write_pgm(img);
    EXPECT_EQ(write_pgm(read_pgm(canonical)), canonical);

    // Non-canonical header whitespace and comments normalise to the canonical form.
    std::string loose = "P5 \t# comment\n" + std::to_string(img.cols()) + "\n\n" +
                        std::to_string(img.rows()) + " 255\n";
    Bytes noncanonical(loose.begin(), loose.end());
    noncanonical.insert(noncanonical.end(), canonical.end() - static_cast<std::ptrdiff_t>(img.size()),
                        canonical.end());
    EXPECT_EQ(write_pgm(read_pgm(noncanonical)), canonical);
  });
}

TEST(Resize, ConstantStaysConstant) {
  const GrayImage out = resize_to(GrayImage(5, 7, 42.5), 13, 3);
  ASSERT_EQ(out.rows(), 13u);
  ASSERT_EQ(out.cols(), 3u);
  for (double v : out.values()) EXPECT_EQ(v, 42.5);
}

TEST(Resize, SameSizeIsIdentity) {
  std::mt19937_64 rng(3);
  const GrayImage img = specmark::testing::random_image(rng, 9, 6);
  EXPECT_EQ(resize_to(img, 9, 6), img);
}

TEST(Resize, CentreAlignedBilinearMidpoint) {
  // Sample abscissae for 2 -> 3 columns: (c + 0.5) * 2/3 - 0.5 = -1/6, 1/2, 7/6,
  // clamped to [0, 1]: 0, 0.5, 1 -> values 0, 50, 100.
  const GrayImage out = resize_to(GrayImage{{0, 100}, {0, 100}}, 2, 3);
  for (std::size_t r = 0; r < 2; ++r) {
    EXPECT_DOUBLE_EQ(out(r, 0), 0.0);
    EXPECT_DOUBLE_EQ(out(r, 1), 50.0);
    EXPECT_DOUBLE_EQ(out(r, 2), 100.0);
  }
}

TEST(Resize, RejectsZeroTarget) {
  EXPECT_THROW(resize_to(GrayImage(2, 2), 0, 2), DimensionError);
}

TEST(ResizeProperty, OutputStaysWithinInputEnvelope) {
  for_all(100, 13, [](std::mt19937_64& rng, int) {
    std::uniform_int_distribution<std::size_t> dim(1, 24);
    const GrayImage img = specmark::testing::random_image(rng, dim(rng), dim(rng));
    const auto [lo, hi] = std::minmax_element(img.values().begin(), img.values().end());
    const GrayImage out = resize_to(img, dim(rng), dim(rng));
    for (double v : out.values()) {
      EXPECT_GE(v, *lo);
      EXPECT_LE(v, *hi);
    }
  });
}
