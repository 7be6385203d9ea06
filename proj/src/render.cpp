#include "fanoband/render.hpp"

#include <stdexcept>
#include <string>

#include "fanoband/raster.hpp"

namespace fanoband {

namespace {

constexpr std::array<Rgb, 16> kClassic{{
    {{230, 25, 75}},   {{60, 180, 75}},   {{255, 225, 25}}, {{0, 130, 200}},
    {{245, 130, 48}},  {{145, 30, 180}},  {{70, 240, 240}}, {{240, 50, 230}},
    {{210, 245, 60}},  {{250, 190, 212}}, {{0, 128, 128}},  {{220, 190, 255}},
    {{170, 110, 40}},  {{255, 250, 200}}, {{128, 0, 0}},    {{170, 255, 195}},
}};

constexpr std::size_t kGutter = 4;

std::vector<std::uint8_t> header(std::size_t width, std::size_t height) {
  const std::string h = "P6\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  return {h.begin(), h.end()};
}

void put(std::vector<std::uint8_t>& out, Rgb c) { out.insert(out.end(), c.begin(), c.end()); }

void check(const LabelImage& image) {
  if (image.labels.size() != image.rows * image.cols)
    throw std::invalid_argument("label image size does not match rows*cols");
}

}  // namespace

Palette Palette::named(std::string_view name) {
  Palette p;
  if (name == "classic") {
    for (std::size_t i = 0; i < kClassic.size(); ++i) p.colours[i + 1] = kClassic[i];
  } else if (name == "gray") {
    for (std::size_t i = 1; i < p.colours.size(); ++i) {
      const auto v = static_cast<std::uint8_t>(i * 15);
      p.colours[i] = {v, v, v};
    }
  } else {
    throw std::invalid_argument("unknown palette '" + std::string(name) + "' (expected classic or gray)");
  }
  return p;
}

Rgb Palette::colour(std::uint16_t label) const {
  if (label >= colours.size())
    throw std::out_of_range("label " + std::to_string(label) + " outside palette range 0..16");
  return colours[label];
}

std::vector<std::uint8_t> render_ppm(const LabelImage& image, const Palette& palette) {
  check(image);
  auto out = header(image.cols, image.rows);
  out.reserve(out.size() + image.labels.size() * 3);
  for (auto l : image.labels) put(out, palette.colour(l));
  return out;
}

std::vector<std::uint8_t> render_ppm_pair(const LabelImage& left, const LabelImage& right,
                                          const Palette& palette) {
  check(left);
  check(right);
  if (left.rows != right.rows || left.cols != right.cols)
    throw std::invalid_argument("side-by-side maps differ in size");
  const Rgb white{255, 255, 255};
  auto out = header(2 * left.cols + kGutter, left.rows);
  for (std::size_t r = 0; r < left.rows; ++r) {
    for (std::size_t c = 0; c < left.cols; ++c) put(out, palette.colour(left.labels[r * left.cols + c]));
    for (std::size_t g = 0; g < kGutter; ++g) put(out, white);
    for (std::size_t c = 0; c < right.cols; ++c) put(out, palette.colour(right.labels[r * right.cols + c]));
  }
  return out;
}

LabelImage load_label_image(const std::filesystem::path& path) {
  RasterDescriptor d = read_descriptor(descriptor_path(path));
  if (d.bands != 1) throw IoError("label raster must have bands=1: " + path.string());
  // A one-band cube decodes the same raster without label validation.
  const HyperCube raw = load_cube(path, d);
  return LabelImage{d.rows, d.cols, {raw.data().begin(), raw.data().end()}};
}

}  // namespace fanoband
