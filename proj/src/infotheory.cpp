#include "fanoband/infotheory.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace fanoband {

SymbolSequence::SymbolSequence(std::vector<Symbol> symbols, std::size_t alphabet_size)
    : symbols_(std::move(symbols)), alphabet_size_(alphabet_size) {
  if (symbols_.empty()) throw std::invalid_argument("empty input");
  const Symbol max_code = *std::max_element(symbols_.begin(), symbols_.end());
  if (alphabet_size_ == 0) {
    alphabet_size_ = static_cast<std::size_t>(max_code) + 1;
  } else if (max_code >= alphabet_size_) {
    throw std::invalid_argument("symbol " + std::to_string(max_code) +
                                " outside alphabet of size " + std::to_string(alphabet_size_));
  }
}

JointHistogram::JointHistogram(std::size_t rows, std::size_t cols, std::vector<Count> counts)
    : rows_(rows), cols_(cols), counts_(std::move(counts)), total_(0) {
  if (rows_ == 0 || cols_ == 0) throw std::invalid_argument("joint histogram has an empty dimension");
  if (counts_.size() != rows_ * cols_)
    throw std::invalid_argument("joint histogram buffer does not match its shape");
  total_ = std::accumulate(counts_.begin(), counts_.end(), Count{0});
  if (total_ == 0) throw std::invalid_argument("empty distribution");
}

std::vector<Count> JointHistogram::row_marginal() const {
  std::vector<Count> out(rows_, 0);
  for (std::size_t a = 0; a < rows_; ++a)
    for (std::size_t b = 0; b < cols_; ++b) out[a] += at(a, b);
  return out;
}

std::vector<Count> JointHistogram::col_marginal() const {
  std::vector<Count> out(cols_, 0);
  for (std::size_t a = 0; a < rows_; ++a)
    for (std::size_t b = 0; b < cols_; ++b) out[b] += at(a, b);
  return out;
}

JointHistogram JointHistogram::transposed() const {
  std::vector<Count> t(counts_.size());
  for (std::size_t a = 0; a < rows_; ++a)
    for (std::size_t b = 0; b < cols_; ++b) t[b * rows_ + a] = at(a, b);
  return JointHistogram(cols_, rows_, std::move(t));
}

std::vector<Count> histogram1d(const SymbolSequence& seq) {
  std::vector<Count> counts(seq.alphabet_size(), 0);
  for (Symbol s : seq.symbols()) ++counts[s];
  return counts;
}

JointHistogram joint_histogram(const SymbolSequence& a, const SymbolSequence& b) {
  if (a.size() != b.size()) throw std::invalid_argument("paired sequences differ in length");
  const std::size_t cols = b.alphabet_size();
  std::vector<Count> counts(a.alphabet_size() * cols, 0);
  auto sa = a.symbols();
  auto sb = b.symbols();
  for (std::size_t i = 0; i < sa.size(); ++i) ++counts[sa[i] * cols + sb[i]];
  return JointHistogram(a.alphabet_size(), cols, std::move(counts));
}

double entropy(std::span<const Count> counts) {
  const Count total = std::accumulate(counts.begin(), counts.end(), Count{0});
  if (total == 0) throw std::invalid_argument("empty distribution");
  const double n = static_cast<double>(total);
  double h = 0.0;
  for (Count c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    h -= p * std::log2(p);
  }
  return h < 0.0 ? 0.0 : h;
}

double joint_entropy(const JointHistogram& joint) { return entropy(joint.counts()); }

double mutual_information(const JointHistogram& joint) {
  const auto pa = joint.row_marginal();
  const auto pb = joint.col_marginal();
  const double n = static_cast<double>(joint.total());

  // Each term depends on (n_ab, n_a * n_b) only, and IEEE products commute,
  // so sorting the terms makes the sum independent of table orientation.
  std::vector<double> terms;
  terms.reserve(joint.counts().size());
  for (std::size_t a = 0; a < joint.rows(); ++a) {
    for (std::size_t b = 0; b < joint.cols(); ++b) {
      const Count nab = joint.at(a, b);
      if (nab == 0) continue;
      const double cell = static_cast<double>(nab);
      const double ratio =
          (cell * n) / (static_cast<double>(pa[a]) * static_cast<double>(pb[b]));
      terms.push_back(cell / n * std::log2(ratio));
    }
  }
  std::sort(terms.begin(), terms.end());
  double mi = 0.0;
  for (double t : terms) mi += t;
  return mi < 0.0 ? 0.0 : mi;
}

double conditional_entropy(const SymbolSequence& c, const SymbolSequence& x) {
  const JointHistogram joint = joint_histogram(c, x);
  const double h = joint_entropy(joint) - entropy(joint.col_marginal());
  return h < 0.0 ? 0.0 : h;
}

FanoBounds fano_bounds(double h_c_given_x, int n_classes) {
  if (n_classes < 2) throw std::invalid_argument("Fano bound undefined for fewer than 2 classes");
  if (!(h_c_given_x >= 0.0) || !std::isfinite(h_c_given_x))
    throw std::invalid_argument("conditional entropy must be a finite non-negative value");
  FanoBounds b;
  b.h_c_given_x = h_c_given_x;
  b.n_classes = n_classes;
  b.upper = h_c_given_x;
  b.lower = std::clamp((h_c_given_x - 1.0) / std::log2(static_cast<double>(n_classes)), 0.0, 1.0);
  return b;
}

double pe_score(double h_c_given_x, int n_classes) {
  const FanoBounds b = fano_bounds(h_c_given_x, n_classes);
  return b.upper - b.lower;
}

}  // namespace fanoband
