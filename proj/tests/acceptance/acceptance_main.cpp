// Acceptance gate: one PASS/FAIL line per criterion, exit status 0 iff every
// gating criterion passes. Criterion 7 needs external data and is reported
// but never gates.

#include <dlfcn.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <string>

#include "../oracles.hpp"
#include "../test_util.hpp"
#include "fanoband/cli.hpp"
#include "fanoband/infotheory.hpp"
#include "fanoband/raster.hpp"
#include "fanoband/selection.hpp"
#include "fanoband/synth.hpp"

using namespace fanoband;

namespace {

// Pinned tolerances and budgets.
constexpr double kMiOracleTol = 1e-12;
constexpr double kIdentityTol = 1e-10;
constexpr double kCriterion1BudgetS = 1.0;
constexpr double kCriterion5BudgetS = 60.0;
constexpr double kEqualAccuracyPct = 1.0;
constexpr double kAvirisAdvisoryPct = 5.0;
constexpr double kAvirisExpectedPct = 90.00;
constexpr int kRandomTables = 1000;

struct Verdict {
  bool pass = true;
  std::string detail;
  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

JointHistogram to_joint(const oracle::Table& t) {
  return JointHistogram(t.size(), t.front().size(), oracle::flatten(t));
}

// Expands a count table into paired (row, col) symbol sequences.
std::pair<SymbolSequence, SymbolSequence> to_sequences(const oracle::Table& t) {
  std::vector<Symbol> a, b;
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = 0; j < t[i].size(); ++j)
      for (std::uint64_t k = 0; k < t[i][j]; ++k) {
        a.push_back(static_cast<Symbol>(i));
        b.push_back(static_cast<Symbol>(j));
      }
  return {SymbolSequence(std::move(a), t.size()), SymbolSequence(std::move(b), t.front().size())};
}

Verdict criterion1() {
  Verdict v;
  std::mt19937_64 rng(1001);
  std::vector<oracle::Table> tables;
  for (int i = 0; i < kRandomTables; ++i) tables.push_back(oracle::random_table(rng, 4, 20));
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (const auto& t : tables) worst = std::max(worst, std::abs(mutual_information(to_joint(t)) - oracle::mutual_information(t)));
  const double elapsed = seconds_since(t0);
  if (worst >= kMiOracleTol) v.fail("max |error| " + num(worst));
  if (elapsed >= kCriterion1BudgetS) v.fail("took " + num(elapsed) + " s");
  if (v.pass) v.detail = "max |error| " + num(worst) + ", " + num(elapsed) + " s";
  return v;
}

Verdict criterion2() {
  Verdict v;
  std::mt19937_64 rng(2002);
  double worst_mi = 0.0, worst_cond = 0.0;
  for (int i = 0; i < kRandomTables; ++i) {
    const auto t = oracle::random_table(rng, 6, 60);
    const auto j = to_joint(t);
    const double i_ab = mutual_information(j);
    const double h_a = entropy(j.row_marginal());
    const double h_b = entropy(j.col_marginal());
    worst_mi = std::max(worst_mi, std::abs(i_ab - (h_a + h_b - joint_entropy(j))));
    const auto [c, x] = to_sequences(t);
    worst_cond = std::max(worst_cond, std::abs(conditional_entropy(c, x) - (h_a - i_ab)));
  }
  if (worst_mi >= kIdentityTol) v.fail("MI identity off by " + num(worst_mi));
  if (worst_cond >= kIdentityTol) v.fail("H(C|X) identity off by " + num(worst_cond));
  if (v.pass) v.detail = "max deviations " + num(worst_mi) + ", " + num(worst_cond);
  return v;
}

Verdict criterion3() {
  Verdict v;
  const int n = 16;
  const double top = std::log2(16.0);
  double prev = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < 100; ++i) {
    const double h = top * i / 99.0;
    const auto b = fano_bounds(h, n);
    if (!(b.lower <= b.upper)) v.fail("lower > upper at H=" + num(h));
    if (b.lower < 0.0 || b.lower > 1.0) v.fail("lower outside [0,1] at H=" + num(h));
    const double s = pe_score(h, n);
    if (s < prev) v.fail("pe_score decreases at H=" + num(h));
    prev = s;
  }
  if (pe_score(0.0, 16) != 0.0) v.fail("pe_score(0,16) = " + num(pe_score(0.0, 16)));
  if (pe_score(2.0, 16) != 1.75) v.fail("pe_score(2,16) = " + num(pe_score(2.0, 16)));
  if (v.pass) v.detail = "100-point grid, pe_score(2,16) = 1.75";
  return v;
}

Verdict criterion4() {
  Verdict v;
  int scenes = 0;
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    SynthSpec s;
    s.rows = 40;
    s.cols = 40;
    s.n_classes = 6;
    s.informative_bands = 5;
    s.copies_per_informative = 2;
    s.noise_bands = 5;
    s.noise_level = 1.5;
    s.seed = seed;
    const auto scene = synth_cube(s);
    const auto split = random_split(scene.gt, 0.5, seed);
    const auto ranking = mi_ranking(scene.cube, scene.gt, 256);
    SelectionConfig cfg;
    cfg.threshold = -1.0;
    cfg.max_bands = scene.cube.bands();
    const auto trace = wrapper_select(scene.cube, scene.gt, split, cfg, ranking);
    std::vector<std::size_t> prefix;
    for (const auto& e : ranking.entries) prefix.push_back(e.band);
    if (trace.selected != prefix) v.fail("seed " + std::to_string(seed) + ": selection differs from ranking");
    ++scenes;
  }
  if (v.pass) v.detail = std::to_string(scenes) + " scenes, full-length prefixes equal";
  return v;
}

Verdict criterion5() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  SynthSpec s;  // 60x60, 8 classes, 8 informative x 4 copies, 16 noise
  s.rows = 60;
  s.cols = 60;
  s.n_classes = 8;
  s.informative_bands = 8;
  s.copies_per_informative = 4;
  s.noise_bands = 16;
  s.noise_level = 1.0;
  s.seed = 1;
  const auto scene = synth_cube(s);
  const auto split = random_split(scene.gt, 0.5, 1);
  const auto ranking = mi_ranking(scene.cube, scene.gt, 256);

  // Frozen from the brute-force reference wrapper.
  const std::map<double, std::vector<std::size_t>> frozen{
      {0.0, {38, 15, 19, 22, 10, 31, 4, 33, 34, 32, 40, 51, 47, 49, 53, 54, 52, 46, 50, 42, 43, 44, 55, 48}},
      {0.01, {38, 15, 19, 22, 10, 31, 4, 33}}};

  std::map<double, SelectionTrace> traces;
  for (const auto& [th, expected] : frozen) {
    SelectionConfig cfg;
    cfg.threshold = th;
    cfg.max_bands = scene.cube.bands();
    auto trace = wrapper_select(scene.cube, scene.gt, split, cfg, ranking);
    if (trace.selected != expected) v.fail("Th=" + num(th) + " trace differs from frozen fixture");
    std::optional<double> prev;
    for (const auto& step : trace.steps) {
      if (!step.accepted) continue;
      if (prev && !(step.pe_after <= *prev - th && step.pe_after <= *prev))
        v.fail("Th=" + num(th) + " accepted Pe not dropping by Th");
      prev = step.pe_after;
    }
    traces.emplace(th, std::move(trace));
  }
  const double elapsed = seconds_since(t0);

  auto copies = [&](const SelectionTrace& t) {
    return std::count_if(t.selected.begin(), t.selected.end(),
                         [&](std::size_t b) { return scene.bands[b].role == BandRole::Copy; });
  };
  const auto c0 = copies(traces[0.0]);
  const auto c1 = copies(traces[0.01]);
  const double a0 = accuracy_by_band_count(traces[0.0]).back();
  const double a1 = accuracy_by_band_count(traces[0.01]).back();
  if (!(c1 < c0)) v.fail("copies " + std::to_string(c1) + " vs " + std::to_string(c0));
  if (std::abs(a0 - a1) > kEqualAccuracyPct) v.fail("accuracy " + num(a1) + " vs " + num(a0));
  if (elapsed >= kCriterion5BudgetS) v.fail("took " + num(elapsed) + " s");
  if (v.pass)
    v.detail = "copies " + std::to_string(c1) + " < " + std::to_string(c0) + ", accuracy " + num(a1) + " vs " +
               num(a0) + ", " + num(elapsed) + " s";
  return v;
}

Verdict criterion6() {
  Verdict v;
  SynthSpec s;
  s.rows = 80;
  s.cols = 80;
  s.n_classes = 8;
  s.informative_bands = 16;
  s.copies_per_informative = 2;
  s.noise_bands = 8;
  s.noise_level = 2.0;
  s.seed = 1;
  const auto scene = synth_cube(s);
  const auto split = random_split(scene.gt, 0.5, 7);
  const std::vector<double> thresholds{0.0, 0.005, 0.02};
  const std::vector<std::size_t> checkpoints{10};
  const auto sweep = threshold_sweep(scene.cube, scene.gt, split, thresholds, checkpoints, SelectionConfig{});
  std::string row;
  std::optional<double> prev;
  for (std::size_t j = 0; j < thresholds.size(); ++j) {
    const auto& cell = sweep.cells[0][j];
    if (!cell) {
      v.fail("Th=" + num(thresholds[j]) + " never reached 10 bands");
      continue;
    }
    if (prev && *cell < *prev) v.fail("accuracy drops at Th=" + num(thresholds[j]));
    prev = *cell;
    row += (row.empty() ? "" : " -> ") + num(*cell);
  }
  if (v.pass) v.detail = "10 bands: " + row;
  return v;
}

// Optional: needs FANOBAND_AVIRIS_CUBE, FANOBAND_AVIRIS_GT and a shared object
// in FANOBAND_SVM_PLUGIN exporting `void fanoband_register_plugins()` that
// registers a classifier named "svm".
std::optional<Verdict> criterion7() {
  const char* cube_path = std::getenv("FANOBAND_AVIRIS_CUBE");
  const char* gt_path = std::getenv("FANOBAND_AVIRIS_GT");
  const char* plugin = std::getenv("FANOBAND_SVM_PLUGIN");
  if (!cube_path || !gt_path || !plugin) return std::nullopt;
  Verdict v;
  void* handle = dlopen(plugin, RTLD_NOW);
  if (!handle) {
    v.fail(std::string("cannot load plugin: ") + dlerror());
    return v;
  }
  auto* reg = reinterpret_cast<void (*)()>(dlsym(handle, "fanoband_register_plugins"));
  if (!reg) {
    v.fail("plugin lacks fanoband_register_plugins");
    return v;
  }
  reg();
  try {
    const auto cube = load_cube(cube_path);
    const auto gt = load_gt(gt_path);
    const auto split = random_split(gt, 0.5, 0);
    SelectionConfig cfg;
    cfg.threshold = 0.03;
    cfg.max_bands = cube.bands();
    cfg.classifier = ClassifierSpec::parse("svm");
    const auto trace = wrapper_select(cube, gt, split, cfg);
    const double acc = accuracy_by_band_count(trace).back();
    const double gap = std::abs(acc - kAvirisExpectedPct);
    if (gap > kAvirisAdvisoryPct) v.fail("accuracy " + num(acc) + "%, off by " + num(gap));
    else v.detail = std::to_string(trace.selected.size()) + " bands, accuracy " + num(acc) + "%";
  } catch (const std::exception& e) {
    v.fail(e.what());
  }
  return v;
}

Verdict criterion8() {
  Verdict v;
  testutil::TempDir dir;
  auto run = [&](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    if (code != 0) v.fail(args.front() + " exited " + std::to_string(code) + ": " + err.str());
  };
  const std::string prefix = (dir / "s").string();
  run({"synth", "--rows", "40", "--cols", "40", "--classes", "6", "--informative", "5", "--copies", "2",
       "--noise-bands", "4", "--noise-level", "1.5", "--seed", "9", "-o", prefix});
  const std::string cube = prefix + "_cube.raw", gt = prefix + "_gt.raw";
  const std::vector<std::string> select{"select", "--cube", cube, "--gt", gt, "--threshold", "0.005",
                                        "--seed", "3", "-o", (dir / "sel").string()};
  const std::vector<std::string> sweep{"sweep", "--cube", cube, "--gt", gt, "--thresholds", "0,0.005,0.02",
                                       "--checkpoints", "1,5,10", "--seed", "3", "-o", (dir / "sw").string()};
  const std::vector<std::string> files{"sel_trace.csv", "sel_report.csv", "sel_run.json", "sel_cest.raw",
                                       "sw_table.csv", "sw_curves.csv", "sw_run.json"};
  std::vector<std::string> first;
  for (int pass = 0; pass < 2; ++pass) {
    run(select);
    run(sweep);
    for (std::size_t i = 0; i < files.size(); ++i) {
      const auto bytes = testutil::read_file(dir / files[i]);
      if (pass == 0) {
        if (bytes.empty()) v.fail(files[i] + " is empty");
        first.push_back(bytes);
      } else if (bytes != first[i]) {
        v.fail(files[i] + " differs between runs");
      }
    }
  }
  if (v.pass) v.detail = std::to_string(files.size()) + " artifacts byte-identical";
  return v;
}

}  // namespace

int main() {
  bool all = true;
  auto report = [&](int id, const char* name, const std::function<Verdict()>& check) {
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v.fail(std::string("exception: ") + e.what());
    }
    all = all && v.pass;
    std::cout << "criterion " << id << " [" << (v.pass ? "PASS" : "FAIL") << "] " << name << ": " << v.detail
              << std::endl;
  };
  report(1, "MI matches literal summation", criterion1);
  report(2, "entropy identities", criterion2);
  report(3, "Fano bound shape", criterion3);
  report(4, "negative threshold keeps the MI ranking", criterion4);
  report(5, "threshold removes planted copies", criterion5);
  report(6, "accuracy at 10 bands rises with threshold", criterion6);

  std::optional<Verdict> c7;
  try {
    c7 = criterion7();
  } catch (const std::exception& e) {
    c7 = Verdict{false, e.what()};
  }
  if (!c7)
    std::cout << "criterion 7 [SKIPPED] AVIRIS accuracy at Th=0.03 (non-gating): set FANOBAND_AVIRIS_CUBE, "
                 "FANOBAND_AVIRIS_GT and FANOBAND_SVM_PLUGIN to run"
              << std::endl;
  else
    std::cout << "criterion 7 [" << (c7->pass ? "PASS" : "FAIL") << "] AVIRIS accuracy at Th=0.03 (non-gating): "
              << c7->detail << std::endl;

  report(8, "select/sweep outputs are deterministic", criterion8);
  std::cout << (all ? "acceptance: PASS" : "acceptance: FAIL") << std::endl;
  return all ? 0 : 1;
}
