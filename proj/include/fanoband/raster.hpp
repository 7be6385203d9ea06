#pragma once

// Headerless integer rasters with a key=value text sidecar, e.g.
//
//   bands=220
//   rows=145
//   cols=145
//   dtype=u16
//   byteorder=le
//   interleave=bsq
//
// Ground-truth rasters use the same sidecar with bands=1 and may carry an
// optional classes=<n> entry.

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "fanoband/cube.hpp"

namespace fanoband {

/// Raised for unreadable/unwritable files and malformed raster content.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SampleType { U8, U16 };
enum class ByteOrder { Little, Big };
enum class Interleave { Bsq, Bil, Bip };

struct RasterDescriptor {
  std::size_t bands = 1;
  std::size_t rows = 0;
  std::size_t cols = 0;
  SampleType dtype = SampleType::U16;
  ByteOrder byte_order = ByteOrder::Little;
  Interleave interleave = Interleave::Bsq;
  std::optional<int> classes;

  std::size_t sample_width() const noexcept { return dtype == SampleType::U8 ? 1 : 2; }
  std::size_t file_size() const noexcept { return bands * rows * cols * sample_width(); }

  friend bool operator==(const RasterDescriptor&, const RasterDescriptor&) = default;
};

Interleave parse_interleave(std::string_view s);
std::string_view to_string(Interleave v);
std::string_view to_string(SampleType v);
std::string_view to_string(ByteOrder v);

/// Throws IoError on unknown keys, bad values, or missing dimensions.
RasterDescriptor parse_descriptor(std::string_view text);
std::string format_descriptor(const RasterDescriptor& d);

/// Sidecar convention: "<raster>.desc".
std::filesystem::path descriptor_path(const std::filesystem::path& raster);
RasterDescriptor read_descriptor(const std::filesystem::path& path);
void write_descriptor(const std::filesystem::path& path, const RasterDescriptor& d);

/// Reads any interleave into band-major order. Throws IoError("file length
/// does not match descriptor") on a size mismatch.
HyperCube load_cube(const std::filesystem::path& path, const RasterDescriptor& d);

/// Writes the cube using the descriptor's dtype/byte order/interleave. The
/// descriptor's dimensions must match the cube.
void save_cube(const std::filesystem::path& path, const HyperCube& cube, const RasterDescriptor& d);

/// Reads a single-band row-major label raster. n_classes falls back to the
/// descriptor's classes entry, then to the largest label present.
GroundTruth load_gt(const std::filesystem::path& path, const RasterDescriptor& d,
                    std::optional<int> n_classes = std::nullopt);
void save_gt(const std::filesystem::path& path, const GroundTruth& gt, const RasterDescriptor& d);

/// Convenience wrappers reading/writing the raster and its sidecar together.
HyperCube load_cube(const std::filesystem::path& path);
GroundTruth load_gt(const std::filesystem::path& path, std::optional<int> n_classes = std::nullopt);
void save_cube_with_descriptor(const std::filesystem::path& path, const HyperCube& cube,
                               const RasterDescriptor& d);
void save_gt_with_descriptor(const std::filesystem::path& path, const GroundTruth& gt,
                             RasterDescriptor d);

}  // namespace fanoband
