#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "fanoband/classify.hpp"
#include "fanoband/cube.hpp"

namespace fanoband {

struct RankedBand {
  std::size_t band = 0;
  double mi_bits = 0.0;
};

/// Bands sorted by descending MI with the reference map; ties go to the
/// lower band index.
struct MIRanking {
  std::vector<RankedBand> entries;
};

/// MI of every band against a reference symbol sequence sampled at `pixels`,
/// returned in band order (not ranked).
std::vector<RankedBand> mi_per_band(const HyperCube& cube, const SymbolSequence& reference,
                                    std::span<const PixelIndex> pixels, std::size_t n_bins);

/// Sorts a per-band MI curve into a ranking.
MIRanking rank_bands(std::vector<RankedBand> curve);

/// Ranks bands by MI with the ground truth over labeled pixels only.
MIRanking mi_ranking(const HyperCube& cube, const GroundTruth& gt, std::size_t n_bins = 256);

struct SelectionConfig {
  double threshold = 0.0;       // may be negative or -infinity
  std::size_t max_bands = 1;    // stop once this many bands are selected
  std::size_t n_bins = 256;
  ClassifierSpec classifier{};
  // When unset, the top-ranked band is accepted unconditionally and its score
  // seeds the running best. When set, every candidate is tested against it.
  std::optional<double> initial_pe;
};

struct SelectionStep {
  std::size_t band = 0;
  double mi_bits = 0.0;
  double pe_after = 0.0;       // score of the tentative subset including this band
  bool accepted = false;
  double test_accuracy = 0.0;  // percent, tentative subset on the test pixels
  double h_c_given_est = 0.0;  // H(C | C_est) behind pe_after
};

struct SelectionTrace {
  std::vector<SelectionStep> steps;
  std::vector<std::size_t> selected;
  std::vector<std::size_t> rejected;
};

/// Greedy forward wrapper: walk the static MI ranking, tentatively add each
/// band, rebuild the estimated map (train on split.train, predict all labeled
/// pixels), score Pe = pe_score(H(C | C_est)) and keep the band iff
/// Pe <= best - threshold, in which case best becomes Pe. Stops when
/// max_bands are selected or the ranking is exhausted; rejected bands are
/// never revisited.
SelectionTrace wrapper_select(const HyperCube& cube, const GroundTruth& gt, const PixelSplit& split,
                              const SelectionConfig& config);
SelectionTrace wrapper_select(const HyperCube& cube, const GroundTruth& gt, const PixelSplit& split,
                              const SelectionConfig& config, const MIRanking& ranking);

/// Test accuracy after the n-th acceptance, n = 1..selected.size().
std::vector<double> accuracy_by_band_count(const SelectionTrace& trace);

struct SweepResult {
  std::vector<double> thresholds;
  std::vector<std::size_t> checkpoints;
  // cells[i][j]: test accuracy at checkpoints[i] for thresholds[j]; empty
  // when that threshold never reached the checkpoint.
  std::vector<std::vector<std::optional<double>>> cells;
  std::vector<SelectionTrace> traces;  // one per threshold
};

/// Runs wrapper_select once per threshold with max_bands = max(checkpoints)
/// (capped at the band count). Thresholds run concurrently. base.threshold
/// and base.max_bands are ignored.
SweepResult threshold_sweep(const HyperCube& cube, const GroundTruth& gt, const PixelSplit& split,
                            std::span<const double> thresholds, std::span<const std::size_t> checkpoints,
                            const SelectionConfig& base);

/// band,mi_bits in the order given.
void write_mi_csv(std::ostream& out, std::span<const RankedBand> rows);
/// step,band,mi_bits,pe,accepted (step 1-based, accepted as 1/0).
void write_trace_csv(std::ostream& out, const SelectionTrace& trace);
/// Rows are checkpoints, columns thresholds; missing cells are empty.
void write_sweep_table_csv(std::ostream& out, const SweepResult& sweep);
/// threshold,n_bands,accuracy_pct for every band count reached.
void write_sweep_curves_csv(std::ostream& out, const SweepResult& sweep);

}  // namespace fanoband
