#include "fanoband/synth.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "fanoband/random.hpp"

namespace fanoband {

namespace {

constexpr double kBaseLevel = 1000.0;
constexpr double kLevelSpacing = 200.0;
constexpr double kCopyJitter = 1.0;
constexpr double kNoiseBandSd = 3.0;

Sample to_sample(double v) {
  return static_cast<Sample>(std::clamp(std::round(v), 0.0, 65535.0));
}

void validate(const SynthSpec& s) {
  if (s.n_classes < 2) throw std::invalid_argument("synthetic scene needs at least 2 classes");
  if (s.n_classes > 65535) throw std::invalid_argument("too many classes");
  if (s.rows == 0 || s.cols == 0) throw std::invalid_argument("synthetic scene needs positive rows/cols");
  if (s.informative_bands < 1) throw std::invalid_argument("need at least one informative band");
  if (!(s.noise_level >= 0.0) || !std::isfinite(s.noise_level))
    throw std::invalid_argument("noise level must be finite and non-negative");
}

std::vector<Label> voronoi_labels(const SynthSpec& s, Rng& rng) {
  const std::size_t n_cells = 3 * static_cast<std::size_t>(s.n_classes);
  std::vector<double> cy(n_cells), cx(n_cells);
  for (std::size_t i = 0; i < n_cells; ++i) {
    cy[i] = rng.uniform01() * static_cast<double>(s.rows);
    cx[i] = rng.uniform01() * static_cast<double>(s.cols);
  }
  std::vector<Label> labels(s.rows * s.cols, 0);
  for (std::size_t r = 0; r < s.rows; ++r) {
    for (std::size_t c = 0; c < s.cols; ++c) {
      std::size_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < n_cells; ++i) {
        const double dy = cy[i] - (static_cast<double>(r) + 0.5);
        const double dx = cx[i] - (static_cast<double>(c) + 0.5);
        const double d = dy * dy + dx * dx;
        if (d < best_d) {
          best_d = d;
          best = i;
        }
      }
      const auto k = static_cast<std::size_t>(s.n_classes);
      labels[r * s.cols + c] = best < 2 * k ? static_cast<Label>(best % k + 1) : Label{0};
    }
  }
  // The first labeled cell of each class may be swallowed by its neighbours on
  // tiny images; make sure every class and at least one pixel stays labeled.
  for (int k = 1; k <= s.n_classes; ++k) {
    if (std::find(labels.begin(), labels.end(), static_cast<Label>(k)) == labels.end())
      labels[rng.uniform_below(labels.size())] = static_cast<Label>(k);
  }
  return labels;
}

}  // namespace

SynthScene synth_cube(const SynthSpec& spec) {
  validate(spec);
  Rng rng(spec.seed);
  std::vector<Label> labels = voronoi_labels(spec, rng);
  const std::size_t n_pix = spec.rows * spec.cols;
  const std::size_t n_classes = static_cast<std::size_t>(spec.n_classes);
  const std::size_t n_copies = spec.informative_bands * spec.copies_per_informative;
  const std::size_t n_bands = spec.informative_bands + n_copies + spec.noise_bands;

  std::vector<Sample> data;
  data.reserve(n_bands * n_pix);
  std::vector<BandInfo> info;
  info.reserve(n_bands);

  const double noise_sd = spec.noise_level * kLevelSpacing;
  for (std::size_t b = 0; b < spec.informative_bands; ++b) {
    std::vector<std::size_t> perm(n_classes);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng.uniform_below(i)]);
    for (std::size_t p = 0; p < n_pix; ++p) {
      // Unlabeled pixels take a random class level so the band carries no
      // trace of the labeling mask.
      const std::size_t k = labels[p] != 0 ? labels[p] - 1u : rng.uniform_below(n_classes);
      const double level = kBaseLevel + kLevelSpacing * static_cast<double>(perm[k]);
      data.push_back(to_sample(level + noise_sd * rng.normal()));
    }
    info.push_back({BandRole::Informative, b});
  }
  for (std::size_t b = 0; b < spec.informative_bands; ++b) {
    for (std::size_t j = 0; j < spec.copies_per_informative; ++j) {
      for (std::size_t p = 0; p < n_pix; ++p)
        data.push_back(to_sample(data[b * n_pix + p] + kCopyJitter * rng.normal()));
      info.push_back({BandRole::Copy, b});
    }
  }
  for (std::size_t b = 0; b < spec.noise_bands; ++b) {
    for (std::size_t p = 0; p < n_pix; ++p) data.push_back(to_sample(kBaseLevel + kNoiseBandSd * rng.normal()));
    info.push_back({BandRole::Noise, info.size()});
  }

  HyperCube cube(n_bands, spec.rows, spec.cols, std::move(data));
  GroundTruth gt(spec.rows, spec.cols, std::move(labels), spec.n_classes);
  return SynthScene{std::move(cube), std::move(gt), std::move(info)};
}

std::string_view to_string(BandRole r) {
  switch (r) {
    case BandRole::Informative: return "informative";
    case BandRole::Copy: return "copy";
    case BandRole::Noise: return "noise";
  }
  return "?";
}

void write_band_roles(std::ostream& out, const std::vector<BandInfo>& bands) {
  out << "band,role,source\n";
  for (std::size_t b = 0; b < bands.size(); ++b) {
    out << b << ',' << to_string(bands[b].role) << ',';
    if (bands[b].role == BandRole::Copy) out << bands[b].source;
    out << '\n';
  }
}

std::vector<BandInfo> read_band_roles(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "band,role,source")
    throw std::invalid_argument("band roles: missing header");
  std::vector<BandInfo> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
      throw std::invalid_argument("band roles: malformed line '" + line + "'");
    const std::size_t band = std::stoul(line.substr(0, c1));
    if (band != out.size()) throw std::invalid_argument("band roles: bands out of order");
    const std::string role = line.substr(c1 + 1, c2 - c1 - 1);
    BandInfo info;
    info.source = band;
    if (role == "informative") {
      info.role = BandRole::Informative;
    } else if (role == "noise") {
      info.role = BandRole::Noise;
    } else if (role == "copy") {
      info.role = BandRole::Copy;
      info.source = std::stoul(line.substr(c2 + 1));
    } else {
      throw std::invalid_argument("band roles: unknown role '" + role + "'");
    }
    out.push_back(info);
  }
  return out;
}

}  // namespace fanoband
