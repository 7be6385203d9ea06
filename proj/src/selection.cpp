#include "fanoband/selection.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <ostream>
#include <stdexcept>

#include "fanoband/format.hpp"
#include "fanoband/infotheory.hpp"

namespace fanoband {

std::vector<RankedBand> mi_per_band(const HyperCube& cube, const SymbolSequence& reference,
                                    std::span<const PixelIndex> pixels, std::size_t n_bins) {
  if (reference.size() != pixels.size())
    throw std::invalid_argument("reference map does not match the pixel list");
  std::vector<RankedBand> curve(cube.bands());
  for (std::size_t b = 0; b < cube.bands(); ++b) {
    const SymbolSequence codes = quantize_band(cube, b, n_bins, pixels);
    curve[b] = {b, mutual_information(joint_histogram(reference, codes))};
  }
  return curve;
}

MIRanking rank_bands(std::vector<RankedBand> curve) {
  std::stable_sort(curve.begin(), curve.end(), [](const RankedBand& a, const RankedBand& b) {
    if (a.mi_bits != b.mi_bits) return a.mi_bits > b.mi_bits;
    return a.band < b.band;
  });
  return MIRanking{std::move(curve)};
}

MIRanking mi_ranking(const HyperCube& cube, const GroundTruth& gt, std::size_t n_bins) {
  require_same_geometry(cube, gt);
  return rank_bands(mi_per_band(cube, gt.labeled_symbols(), gt.labeled(), n_bins));
}

namespace {

void validate(const HyperCube& cube, const SelectionConfig& config) {
  if (config.max_bands < 1) throw std::invalid_argument("max_bands must be at least 1");
  if (config.max_bands > cube.bands())
    throw std::invalid_argument("max_bands " + std::to_string(config.max_bands) + " exceeds the " +
                                std::to_string(cube.bands()) + " available bands");
  if (std::isnan(config.threshold)) throw std::invalid_argument("threshold is NaN");
  if (config.initial_pe && !std::isfinite(*config.initial_pe))
    throw std::invalid_argument("initial Pe must be finite");
}

}  // namespace

SelectionTrace wrapper_select(const HyperCube& cube, const GroundTruth& gt, const PixelSplit& split,
                              const SelectionConfig& config) {
  validate(cube, config);
  return wrapper_select(cube, gt, split, config, mi_ranking(cube, gt, config.n_bins));
}

SelectionTrace wrapper_select(const HyperCube& cube, const GroundTruth& gt, const PixelSplit& split,
                              const SelectionConfig& config, const MIRanking& ranking) {
  validate(cube, config);
  require_same_geometry(cube, gt);
  SelectionTrace trace;
  std::optional<double> best = config.initial_pe;
  std::vector<std::size_t> candidate;
  for (const RankedBand& entry : ranking.entries) {
    if (trace.selected.size() >= config.max_bands) break;
    candidate = trace.selected;
    candidate.push_back(entry.band);

    const EstimatedMap c_est = build_estimated_map(cube, gt, candidate, split, config.classifier);
    SelectionStep step;
    step.band = entry.band;
    step.mi_bits = entry.mi_bits;
    step.h_c_given_est = conditional_entropy_of_map(gt, c_est);
    step.pe_after = pe_score(step.h_c_given_est, gt.n_classes());
    step.test_accuracy = evaluate(c_est, gt, split, EvalScope::Test).overall_accuracy;
    step.accepted = !best || step.pe_after <= *best - config.threshold;

    if (step.accepted) {
      trace.selected = std::move(candidate);
      best = step.pe_after;
    } else {
      trace.rejected.push_back(entry.band);
    }
    trace.steps.push_back(step);
  }
  return trace;
}

std::vector<double> accuracy_by_band_count(const SelectionTrace& trace) {
  std::vector<double> out;
  for (const auto& s : trace.steps)
    if (s.accepted) out.push_back(s.test_accuracy);
  return out;
}

SweepResult threshold_sweep(const HyperCube& cube, const GroundTruth& gt, const PixelSplit& split,
                            std::span<const double> thresholds, std::span<const std::size_t> checkpoints,
                            const SelectionConfig& base) {
  if (thresholds.empty()) throw std::invalid_argument("no thresholds given");
  if (checkpoints.empty()) throw std::invalid_argument("no checkpoints given");
  if (std::find(checkpoints.begin(), checkpoints.end(), std::size_t{0}) != checkpoints.end())
    throw std::invalid_argument("checkpoints must be positive");

  SweepResult result;
  result.thresholds.assign(thresholds.begin(), thresholds.end());
  result.checkpoints.assign(checkpoints.begin(), checkpoints.end());
  const std::size_t max_bands =
      std::min(*std::max_element(checkpoints.begin(), checkpoints.end()), cube.bands());
  const MIRanking ranking = mi_ranking(cube, gt, base.n_bins);

  std::vector<std::future<SelectionTrace>> jobs;
  for (double th : thresholds) {
    SelectionConfig cfg = base;
    cfg.threshold = th;
    cfg.max_bands = max_bands;
    jobs.push_back(std::async(std::launch::async, [&, cfg] {
      return wrapper_select(cube, gt, split, cfg, ranking);
    }));
  }
  for (auto& j : jobs) result.traces.push_back(j.get());

  result.cells.assign(checkpoints.size(), std::vector<std::optional<double>>(thresholds.size()));
  for (std::size_t t = 0; t < thresholds.size(); ++t) {
    const auto curve = accuracy_by_band_count(result.traces[t]);
    for (std::size_t c = 0; c < checkpoints.size(); ++c)
      if (checkpoints[c] <= curve.size()) result.cells[c][t] = curve[checkpoints[c] - 1];
  }
  return result;
}

void write_mi_csv(std::ostream& out, std::span<const RankedBand> rows) {
  out << "band,mi_bits\n";
  for (const auto& r : rows) out << r.band << ',' << format_shortest(r.mi_bits) << '\n';
}

void write_trace_csv(std::ostream& out, const SelectionTrace& trace) {
  out << "step,band,mi_bits,pe,accepted\n";
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const auto& s = trace.steps[i];
    out << i + 1 << ',' << s.band << ',' << format_shortest(s.mi_bits) << ','
        << format_shortest(s.pe_after) << ',' << (s.accepted ? 1 : 0) << '\n';
  }
}

void write_sweep_table_csv(std::ostream& out, const SweepResult& sweep) {
  out << "bands";
  for (double th : sweep.thresholds) out << ',' << format_shortest(th);
  out << '\n';
  for (std::size_t c = 0; c < sweep.checkpoints.size(); ++c) {
    out << sweep.checkpoints[c];
    for (const auto& cell : sweep.cells[c]) {
      out << ',';
      if (cell) out << format_fixed(*cell, 2);
    }
    out << '\n';
  }
}

void write_sweep_curves_csv(std::ostream& out, const SweepResult& sweep) {
  out << "threshold,n_bands,accuracy_pct\n";
  for (std::size_t t = 0; t < sweep.thresholds.size(); ++t) {
    const auto curve = accuracy_by_band_count(sweep.traces[t]);
    for (std::size_t n = 0; n < curve.size(); ++n)
      out << format_shortest(sweep.thresholds[t]) << ',' << n + 1 << ',' << format_fixed(curve[n], 2) << '\n';
  }
}

}  // namespace fanoband
