#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fanoband/cube.hpp"

namespace fanoband {

/// Parameters of a desk-scale surrogate scene with planted redundancy.
struct SynthSpec {
  int n_classes = 8;
  std::size_t rows = 60;
  std::size_t cols = 60;
  std::size_t informative_bands = 8;
  std::size_t copies_per_informative = 4;  // extra copies of each informative band
  std::size_t noise_bands = 16;
  double noise_level = 1.0;  // per-pixel noise sd, in units of class-level spacing
  std::uint64_t seed = 1;
};

enum class BandRole { Informative, Copy, Noise };

struct BandInfo {
  BandRole role = BandRole::Informative;
  std::size_t source = 0;  // for copies: index of the original band; else the band itself
};

struct SynthScene {
  HyperCube cube;
  GroundTruth gt;
  std::vector<BandInfo> bands;
};

/// Band layout: informative bands first, then the copies (grouped by source),
/// then noise bands. Deterministic for a fixed spec.
///
/// Ground truth is a Voronoi partition with three cells per class; one third
/// of the cells are left unlabeled. Informative band b maps class k to level
/// 1000 + 200 * perm_b(k) plus Gaussian noise of sd 200 * noise_level, with an
/// independent class permutation per band. Copies add unit-sd jitter to their
/// source. Noise bands are label-independent values around 1000 with sd 3.
SynthScene synth_cube(const SynthSpec& spec);

std::string_view to_string(BandRole r);

/// CSV with header band,role,source (source empty except for copies).
void write_band_roles(std::ostream& out, const std::vector<BandInfo>& bands);
std::vector<BandInfo> read_band_roles(std::istream& in);

}  // namespace fanoband
