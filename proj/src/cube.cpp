#include "fanoband/cube.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fanoband/random.hpp"

namespace fanoband {

HyperCube::HyperCube(std::size_t bands, std::size_t rows, std::size_t cols, std::vector<Sample> data)
    : bands_(bands), rows_(rows), cols_(cols), data_(std::move(data)) {
  if (bands_ == 0 || rows_ == 0 || cols_ == 0)
    throw std::invalid_argument("cube dimensions must be positive");
  if (data_.size() != bands_ * rows_ * cols_)
    throw std::invalid_argument("cube data length does not match bands*rows*cols");
}

GroundTruth::GroundTruth(std::size_t rows, std::size_t cols, std::vector<Label> labels, int n_classes)
    : rows_(rows), cols_(cols), labels_(std::move(labels)), n_classes_(n_classes) {
  if (rows_ == 0 || cols_ == 0) throw std::invalid_argument("ground truth dimensions must be positive");
  if (labels_.size() != rows_ * cols_)
    throw std::invalid_argument("ground truth length does not match rows*cols");
  if (n_classes_ < 0) throw std::invalid_argument("n_classes must be non-negative");
  const Label max_label = *std::max_element(labels_.begin(), labels_.end());
  if (max_label == 0) throw std::invalid_argument("no labeled pixels");
  if (n_classes_ == 0) n_classes_ = max_label;
  if (max_label > n_classes_)
    throw std::invalid_argument("label " + std::to_string(max_label) + " exceeds class count " +
                                std::to_string(n_classes_));
  for (std::size_t p = 0; p < labels_.size(); ++p)
    if (labels_[p] != 0) labeled_.push_back(static_cast<PixelIndex>(p));
}

SymbolSequence GroundTruth::labeled_symbols() const {
  std::vector<Symbol> s;
  s.reserve(labeled_.size());
  for (PixelIndex p : labeled_) s.push_back(labels_[p]);
  return SymbolSequence(std::move(s), static_cast<std::size_t>(n_classes_) + 1);
}

PixelSplit random_split(const GroundTruth& gt, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw std::invalid_argument("train fraction must lie strictly between 0 and 1");
  std::vector<PixelIndex> order(gt.labeled().begin(), gt.labeled().end());
  Rng rng(seed);
  for (std::size_t i = order.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.uniform_below(i));
    std::swap(order[i - 1], order[j]);
  }
  const auto n_train = static_cast<std::size_t>(
      std::floor(train_fraction * static_cast<double>(order.size()) + 0.5));
  PixelSplit split;
  split.seed = seed;
  split.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  split.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

namespace {

void check_bins(std::size_t n_bins) {
  if (n_bins < 1 || n_bins > 65536) throw std::invalid_argument("bin count must lie in [1, 65536]");
}

}  // namespace

SymbolSequence quantize_values(std::span<const Sample> values, std::size_t n_bins) {
  check_bins(n_bins);
  if (values.empty()) throw std::invalid_argument("empty input");
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const std::uint64_t lo = *lo_it;
  const std::uint64_t width = static_cast<std::uint64_t>(*hi_it) - lo;
  std::vector<Symbol> codes(values.size(), 0);
  if (width > 0) {
    // Exact integer arithmetic: code = floor((v - lo) * bins / width), top edge folded in.
    for (std::size_t i = 0; i < values.size(); ++i) {
      const std::uint64_t code = (values[i] - lo) * n_bins / width;
      codes[i] = static_cast<Symbol>(std::min<std::uint64_t>(code, n_bins - 1));
    }
  }
  return SymbolSequence(std::move(codes), n_bins);
}

SymbolSequence quantize_values(std::span<const double> values, std::size_t n_bins) {
  check_bins(n_bins);
  if (values.empty()) throw std::invalid_argument("empty input");
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double width = *hi_it - lo;
  std::vector<Symbol> codes(values.size(), 0);
  if (width > 0.0) {
    const double bins = static_cast<double>(n_bins);
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double code = std::floor((values[i] - lo) / width * bins);
      codes[i] = static_cast<Symbol>(std::clamp(code, 0.0, bins - 1.0));
    }
  }
  return SymbolSequence(std::move(codes), n_bins);
}

SymbolSequence quantize_band(const HyperCube& cube, std::size_t band, std::size_t n_bins,
                             std::span<const PixelIndex> pixels) {
  if (band >= cube.bands()) throw std::out_of_range("band index out of range");
  const auto values = cube.band(band);
  std::vector<Sample> picked;
  picked.reserve(pixels.size());
  for (PixelIndex p : pixels) picked.push_back(values[p]);
  return quantize_values(std::span<const Sample>(picked), n_bins);
}

SymbolSequence quantize_band(const HyperCube& cube, std::size_t band, std::size_t n_bins) {
  if (band >= cube.bands()) throw std::out_of_range("band index out of range");
  return quantize_values(cube.band(band), n_bins);
}

std::vector<double> approximate_gt(const HyperCube& cube, BandRange range) {
  if (range.first > range.last) throw std::invalid_argument("empty band range");
  if (range.last >= cube.bands()) throw std::invalid_argument("band range exceeds cube");
  std::vector<double> mean(cube.pixels(), 0.0);
  for (std::size_t b = range.first; b <= range.last; ++b) {
    const auto values = cube.band(b);
    for (std::size_t p = 0; p < mean.size(); ++p) mean[p] += values[p];
  }
  const double n = static_cast<double>(range.last - range.first + 1);
  for (double& m : mean) m /= n;
  return mean;
}

SymbolSequence approximate_gt_symbols(const HyperCube& cube, BandRange range, std::size_t n_bins,
                                      std::span<const PixelIndex> pixels) {
  const auto mean = approximate_gt(cube, range);
  std::vector<double> picked;
  picked.reserve(pixels.size());
  for (PixelIndex p : pixels) picked.push_back(mean[p]);
  return quantize_values(std::span<const double>(picked), n_bins);
}

void require_same_geometry(const HyperCube& cube, const GroundTruth& gt) {
  if (cube.rows() != gt.rows() || cube.cols() != gt.cols())
    throw std::invalid_argument("cube is " + std::to_string(cube.rows()) + "x" +
                                std::to_string(cube.cols()) + " but ground truth is " +
                                std::to_string(gt.rows()) + "x" + std::to_string(gt.cols()));
}

}  // namespace fanoband
