#pragma once

// Straight-line re-implementation of the MI-ranked forward wrapper, written
// from the definitions with naive loops. Used to freeze regression fixtures
// and to cross-check the library on small scenes.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "fanoband/cube.hpp"
#include "oracles.hpp"

namespace reference {

struct Result {
  std::vector<std::size_t> selected;
  std::vector<double> accepted_pe;
  std::vector<double> accuracy_by_count;
};

inline std::vector<std::uint32_t> quantize(const std::vector<double>& v, std::size_t bins) {
  double lo = v[0], hi = v[0];
  for (double x : v) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  std::vector<std::uint32_t> out(v.size(), 0);
  if (hi == lo) return out;
  // values are integers, so this integer form is exact
  const auto ilo = static_cast<std::uint64_t>(lo), iw = static_cast<std::uint64_t>(hi - lo);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::uint64_t k = (static_cast<std::uint64_t>(v[i]) - ilo) * bins / iw;
    out[i] = static_cast<std::uint32_t>(std::min<std::uint64_t>(k, bins - 1));
  }
  return out;
}

inline double mi(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
  std::uint32_t ma = 0, mb = 0;
  for (auto x : a) ma = std::max(ma, x);
  for (auto x : b) mb = std::max(mb, x);
  oracle::Table t(ma + 1, std::vector<std::uint64_t>(mb + 1, 0));
  for (std::size_t i = 0; i < a.size(); ++i) ++t[a[i]][b[i]];
  return oracle::mutual_information(t);
}

// Nearest centroid on z-scored features, lowest class wins ties.
inline std::vector<int> nearest_centroid(const std::vector<std::vector<double>>& train_x, const std::vector<int>& train_y,
                                         const std::vector<std::vector<double>>& query, int n_classes) {
  const std::size_t d = train_x.front().size();
  std::vector<double> mean(d, 0.0), sd(d, 0.0);
  for (const auto& r : train_x)
    for (std::size_t j = 0; j < d; ++j) mean[j] += r[j];
  for (auto& m : mean) m /= static_cast<double>(train_x.size());
  for (const auto& r : train_x)
    for (std::size_t j = 0; j < d; ++j) sd[j] += (r[j] - mean[j]) * (r[j] - mean[j]);
  for (auto& s : sd) {
    s = std::sqrt(s / static_cast<double>(train_x.size()));
    if (s == 0.0) s = 1.0;
  }
  std::vector<std::vector<double>> centroid(static_cast<std::size_t>(n_classes), std::vector<double>(d, 0.0));
  std::vector<double> count(static_cast<std::size_t>(n_classes), 0.0);
  for (std::size_t i = 0; i < train_x.size(); ++i) {
    const auto k = static_cast<std::size_t>(train_y[i] - 1);
    count[k] += 1.0;
    for (std::size_t j = 0; j < d; ++j) centroid[k][j] += (train_x[i][j] - mean[j]) / sd[j];
  }
  for (std::size_t k = 0; k < centroid.size(); ++k)
    for (auto& v : centroid[k]) v /= count[k];
  std::vector<int> out;
  for (const auto& q : query) {
    int best = 1;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < centroid.size(); ++k) {
      double dist = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        const double z = (q[j] - mean[j]) / sd[j];
        dist += (z - centroid[k][j]) * (z - centroid[k][j]);
      }
      if (dist < best_d) {
        best_d = dist;
        best = static_cast<int>(k) + 1;
      }
    }
    out.push_back(best);
  }
  return out;
}

inline double pe(double h, int n_classes) {
  const double lower = std::min(1.0, std::max(0.0, (h - 1.0) / std::log2(static_cast<double>(n_classes))));
  return h - lower;
}

/// Forward wrapper with the nearest-centroid classifier.
inline Result run(const fanoband::HyperCube& cube, const fanoband::GroundTruth& gt, const fanoband::PixelSplit& split,
                  double threshold, std::size_t max_bands, std::size_t bins) {
  const auto labeled = gt.labeled();
  std::vector<std::uint32_t> c;
  for (auto p : labeled) c.push_back(gt.at(p));

  std::vector<std::pair<double, std::size_t>> order;
  for (std::size_t b = 0; b < cube.bands(); ++b) {
    std::vector<double> v;
    for (auto p : labeled) v.push_back(cube.band(b)[p]);
    order.push_back({mi(c, quantize(v, bins)), b});
  }
  std::sort(order.begin(), order.end(), [](const auto& x, const auto& y) {
    return x.first != y.first ? x.first > y.first : x.second < y.second;
  });

  auto features = [&](const std::vector<std::size_t>& bands, std::span<const fanoband::PixelIndex> px) {
    std::vector<std::vector<double>> rows;
    for (auto p : px) {
      std::vector<double> r;
      for (auto b : bands) r.push_back(cube.band(b)[p]);
      rows.push_back(r);
    }
    return rows;
  };
  std::vector<int> train_y;
  for (auto p : split.train) train_y.push_back(gt.at(p));

  Result res;
  bool have_best = false;
  double best = 0.0;
  for (const auto& [mi_value, band] : order) {
    if (res.selected.size() >= max_bands) break;
    auto candidate = res.selected;
    candidate.push_back(band);
    const auto predicted = nearest_centroid(features(candidate, split.train), train_y,
                                            features(candidate, labeled), gt.n_classes());
    std::vector<std::uint32_t> est(predicted.begin(), predicted.end());
    const double score = pe(oracle::conditional_entropy(c, est), gt.n_classes());
    if (!have_best || score <= best - threshold) {
      have_best = true;
      best = score;
      res.selected = candidate;
      res.accepted_pe.push_back(score);
      std::size_t ok = 0;
      for (auto p : split.test) {
        const auto idx = static_cast<std::size_t>(std::lower_bound(labeled.begin(), labeled.end(), p) - labeled.begin());
        ok += predicted[idx] == gt.at(p);
      }
      res.accuracy_by_count.push_back(100.0 * static_cast<double>(ok) / static_cast<double>(split.test.size()));
    }
  }
  return res;
}

}  // namespace reference
