#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

namespace fanoband {

using Rgb = std::array<std::uint8_t, 3>;

/// Colour table for labels 0..16; label 0 is always black.
struct Palette {
  std::array<Rgb, 17> colours{};

  /// "classic" (16 distinct hues) or "gray". Throws std::invalid_argument.
  static Palette named(std::string_view name);
  Rgb colour(std::uint16_t label) const;  // throws std::out_of_range above 16
};

/// Unvalidated row-major label image, e.g. a ground truth or estimated map.
struct LabelImage {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint16_t> labels;
};

/// Binary PPM (P6, maxval 255) of one label image.
std::vector<std::uint8_t> render_ppm(const LabelImage& image, const Palette& palette);

/// Two label images of equal size side by side with a white 4-pixel gutter.
std::vector<std::uint8_t> render_ppm_pair(const LabelImage& left, const LabelImage& right,
                                          const Palette& palette);

/// Loads a single-band label raster via its sidecar descriptor.
LabelImage load_label_image(const std::filesystem::path& path);

}  // namespace fanoband
