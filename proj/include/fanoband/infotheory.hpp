#pragma once

// Plug-in (maximum-likelihood) entropy and mutual information estimates over
// quantized symbol sequences, plus the Fano error-probability bounds used to
// score an estimated class map. All quantities are in bits.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace fanoband {

using Count = std::uint64_t;
using Symbol = std::uint32_t;

/// A non-empty sequence of integer codes drawn from [0, alphabet_size).
class SymbolSequence {
 public:
  /// Throws std::invalid_argument on an empty sequence ("empty input") or a
  /// code outside the alphabet. An alphabet_size of 0 means max code + 1.
  explicit SymbolSequence(std::vector<Symbol> symbols, std::size_t alphabet_size = 0);

  std::span<const Symbol> symbols() const noexcept { return symbols_; }
  std::size_t alphabet_size() const noexcept { return alphabet_size_; }
  std::size_t size() const noexcept { return symbols_.size(); }

 private:
  std::vector<Symbol> symbols_;
  std::size_t alphabet_size_;
};

/// Count matrix of co-occurring codes, stored row-major as (code_a, code_b).
class JointHistogram {
 public:
  /// Throws std::invalid_argument if the shape is empty, the buffer size does
  /// not match rows * cols, or every count is zero.
  JointHistogram(std::size_t rows, std::size_t cols, std::vector<Count> counts);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  Count total() const noexcept { return total_; }
  Count at(std::size_t a, std::size_t b) const { return counts_[a * cols_ + b]; }
  std::span<const Count> counts() const noexcept { return counts_; }

  std::vector<Count> row_marginal() const;
  std::vector<Count> col_marginal() const;
  JointHistogram transposed() const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Count> counts_;
  Count total_;
};

struct FanoBounds {
  double lower = 0.0;
  double upper = 0.0;
  double h_c_given_x = 0.0;
  int n_classes = 2;
};

std::vector<Count> histogram1d(const SymbolSequence& seq);

/// Throws std::invalid_argument("paired sequences differ in length").
JointHistogram joint_histogram(const SymbolSequence& a, const SymbolSequence& b);

/// Shannon entropy of an empirical distribution given by counts.
/// Throws std::invalid_argument("empty distribution") if all counts are zero.
double entropy(std::span<const Count> counts);

/// Entropy of the joint distribution H(A,B).
double joint_entropy(const JointHistogram& joint);

/// I(A;B) = sum p(a,b) log2[p(a,b) / (p(a) p(b))] over positive cells.
/// The per-cell terms are summed in a canonical order, so the result is
/// bit-identical for a table and its transpose.
double mutual_information(const JointHistogram& joint);

/// H(C|X) = H(C,X) - H(X), floored at zero.
double conditional_entropy(const SymbolSequence& c, const SymbolSequence& x);

/// Fano interval for the error probability of predicting one of n_classes
/// from X. The lower end is clamped into [0, 1]; the upper end is H(C|X) in
/// bits. Throws std::invalid_argument when n_classes < 2 or h is negative.
FanoBounds fano_bounds(double h_c_given_x, int n_classes);

/// Width of the Fano interval (upper - lower); non-decreasing in h.
double pe_score(double h_c_given_x, int n_classes);

}  // namespace fanoband
