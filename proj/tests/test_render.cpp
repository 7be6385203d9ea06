#include <doctest.h>

#include <string>

#include "fanoband/raster.hpp"
#include "fanoband/render.hpp"
#include "test_util.hpp"

using namespace fanoband;

namespace {

std::string header_of(const std::vector<std::uint8_t>& ppm, std::size_t rows, std::size_t cols) {
  const std::string expected = "P6\n" + std::to_string(cols) + " " + std::to_string(rows) + "\n255\n";
  return std::string(ppm.begin(), ppm.begin() + static_cast<std::ptrdiff_t>(expected.size()));
}

}  // namespace

TEST_SUITE("render") {

TEST_CASE("all-unlabeled map renders black") {
  const LabelImage img{3, 4, std::vector<std::uint16_t>(12, 0)};
  const auto ppm = render_ppm(img, Palette::named("classic"));
  const std::string head = "P6\n4 3\n255\n";
  REQUIRE(ppm.size() == head.size() + 36);
  CHECK(header_of(ppm, 3, 4) == head);
  for (std::size_t i = head.size(); i < ppm.size(); ++i) CHECK(ppm[i] == 0);
}

TEST_CASE("single pixel takes its palette colour") {
  for (const char* name : {"classic", "gray"}) {
    const Palette pal = Palette::named(name);
    const auto ppm = render_ppm(LabelImage{1, 1, {1}}, pal);
    const Rgb c = pal.colour(1);
    REQUIRE(ppm.size() == 11 + 3);
    CHECK(ppm[11] == c[0]);
    CHECK(ppm[12] == c[1]);
    CHECK(ppm[13] == c[2]);
    CHECK(pal.colour(0) == Rgb{0, 0, 0});
  }
}

TEST_CASE("classic palette colours are distinct") {
  const Palette pal = Palette::named("classic");
  for (std::uint16_t a = 0; a <= 16; ++a)
    for (std::uint16_t b = a + 1; b <= 16; ++b) CHECK(pal.colour(a) != pal.colour(b));
}

TEST_CASE("rendering is byte-stable") {
  LabelImage img{5, 7, {}};
  for (std::size_t i = 0; i < 35; ++i) img.labels.push_back(static_cast<std::uint16_t>(i % 17));
  const Palette pal = Palette::named("classic");
  CHECK(render_ppm(img, pal) == render_ppm(img, pal));
}

TEST_CASE("labels beyond the palette and bad sizes are rejected") {
  const Palette pal = Palette::named("classic");
  CHECK_THROWS_AS(render_ppm(LabelImage{1, 1, {17}}, pal), std::out_of_range);
  CHECK_THROWS_AS(render_ppm(LabelImage{2, 2, {1, 2, 3}}, pal), std::invalid_argument);
  CHECK_THROWS_AS(Palette::named("rainbow"), std::invalid_argument);
  CHECK_THROWS_AS(render_ppm_pair(LabelImage{1, 2, {1, 1}}, LabelImage{2, 1, {1, 1}}, pal), std::invalid_argument);
}

TEST_CASE("side-by-side output has a white gutter") {
  const Palette pal = Palette::named("classic");
  const LabelImage a{2, 3, std::vector<std::uint16_t>(6, 0)};
  const LabelImage b{2, 3, std::vector<std::uint16_t>(6, 2)};
  const auto ppm = render_ppm_pair(a, b, pal);
  const std::size_t width = 3 + 4 + 3;
  const std::string head = "P6\n" + std::to_string(width) + " 2\n255\n";
  REQUIRE(ppm.size() == head.size() + width * 2 * 3);
  CHECK(header_of(ppm, 2, width) == head);
  auto px = [&](std::size_t r, std::size_t c) {
    const std::size_t o = head.size() + (r * width + c) * 3;
    return Rgb{ppm[o], ppm[o + 1], ppm[o + 2]};
  };
  for (std::size_t r = 0; r < 2; ++r) {
    CHECK(px(r, 0) == Rgb{0, 0, 0});
    for (std::size_t c = 3; c < 7; ++c) CHECK(px(r, c) == Rgb{255, 255, 255});
    CHECK(px(r, 9) == pal.colour(2));
  }
}

TEST_CASE("label rasters load through their descriptor") {
  testutil::TempDir dir;
  const GroundTruth gt(2, 2, {0, 1, 2, 3}, 3);
  save_gt_with_descriptor(dir / "gt.raw", gt, RasterDescriptor{});
  const auto img = load_label_image(dir / "gt.raw");
  CHECK(img.rows == 2);
  CHECK(img.cols == 2);
  CHECK(img.labels == std::vector<std::uint16_t>{0, 1, 2, 3});
  CHECK_THROWS_AS(load_label_image(dir / "missing.raw"), IoError);
}

}  // TEST_SUITE
