#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fanoband/infotheory.hpp"

namespace fanoband {

using Sample = std::uint16_t;
using Label = std::uint16_t;
using PixelIndex = std::uint32_t;

/// Band-major stack of integer reflectance images: data[b][r][c].
class HyperCube {
 public:
  HyperCube(std::size_t bands, std::size_t rows, std::size_t cols, std::vector<Sample> data);

  std::size_t bands() const noexcept { return bands_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t pixels() const noexcept { return rows_ * cols_; }

  std::span<const Sample> band(std::size_t b) const {
    return {data_.data() + b * pixels(), pixels()};
  }
  Sample at(std::size_t b, std::size_t r, std::size_t c) const {
    return data_[(b * rows_ + r) * cols_ + c];
  }
  std::span<const Sample> data() const noexcept { return data_; }

  friend bool operator==(const HyperCube&, const HyperCube&) = default;

 private:
  std::size_t bands_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Sample> data_;
};

/// Row-major class map. Label 0 marks an unlabeled pixel.
class GroundTruth {
 public:
  /// Throws std::invalid_argument when a label exceeds n_classes, when no
  /// pixel is labeled ("no labeled pixels"), or when n_classes < 1.
  /// n_classes == 0 means "use the largest label present".
  GroundTruth(std::size_t rows, std::size_t cols, std::vector<Label> labels, int n_classes = 0);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t pixels() const noexcept { return rows_ * cols_; }
  int n_classes() const noexcept { return n_classes_; }
  std::span<const Label> labels() const noexcept { return labels_; }
  Label at(PixelIndex p) const { return labels_[p]; }

  /// Ascending indices of labeled pixels.
  std::span<const PixelIndex> labeled() const noexcept { return labeled_; }

  /// Class labels of the labeled pixels as a symbol sequence over [0, n_classes].
  SymbolSequence labeled_symbols() const;

  friend bool operator==(const GroundTruth& a, const GroundTruth& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.n_classes_ == b.n_classes_ &&
           a.labels_ == b.labels_;
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Label> labels_;
  int n_classes_;
  std::vector<PixelIndex> labeled_;
};

/// Disjoint train/test partition of the labeled pixels (both ascending).
struct PixelSplit {
  std::vector<PixelIndex> train;
  std::vector<PixelIndex> test;
  std::uint64_t seed = 0;
};

/// Uniform unstratified split; |train| = floor(fraction * n_labeled + 0.5).
/// Throws std::invalid_argument unless 0 < train_fraction < 1.
PixelSplit random_split(const GroundTruth& gt, double train_fraction, std::uint64_t seed);

/// Equal-width binning of integer values between their own min and max.
/// A constant input maps to code 0. n_bins must lie in [1, 65536].
SymbolSequence quantize_values(std::span<const Sample> values, std::size_t n_bins);
SymbolSequence quantize_values(std::span<const double> values, std::size_t n_bins);

/// Quantizes one band over the given pixels (min/max taken over those pixels).
SymbolSequence quantize_band(const HyperCube& cube, std::size_t band, std::size_t n_bins,
                             std::span<const PixelIndex> pixels);

/// Quantizes one band over every pixel of the image.
SymbolSequence quantize_band(const HyperCube& cube, std::size_t band, std::size_t n_bins);

/// Inclusive, zero-based band interval.
struct BandRange {
  std::size_t first = 0;
  std::size_t last = 0;
};

/// Per-pixel arithmetic mean over the band range, row-major.
/// Throws std::invalid_argument on an empty or out-of-bounds range.
std::vector<double> approximate_gt(const HyperCube& cube, BandRange range);

/// Same map restricted to the given pixels and quantized to n_bins codes.
SymbolSequence approximate_gt_symbols(const HyperCube& cube, BandRange range, std::size_t n_bins,
                                      std::span<const PixelIndex> pixels);

/// Throws std::invalid_argument unless the cube and ground truth share rows/cols.
void require_same_geometry(const HyperCube& cube, const GroundTruth& gt);

}  // namespace fanoband
