#include "fanoband/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include "fanoband/classify.hpp"
#include "fanoband/cube.hpp"
#include "fanoband/format.hpp"
#include "fanoband/raster.hpp"
#include "fanoband/render.hpp"
#include "fanoband/run_record.hpp"
#include "fanoband/selection.hpp"
#include "fanoband/synth.hpp"

namespace fanoband::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kToolName = "fanoband";

struct InputOptions {
  std::string cube;
  std::string cube_desc;
  std::string gt;
  std::string gt_desc;
  int classes = 0;
  std::size_t bins = 256;
};

struct SplitOptions {
  std::uint64_t seed = 0;
  double train_fraction = 0.5;
};

struct SelectOptions {
  InputOptions in;
  SplitOptions split;
  double threshold = 0.0;
  std::size_t max_bands = 0;
  std::string classifier = "nc";
  std::optional<double> initial_pe;
  std::string out_prefix;
  bool record_timing = false;
};

struct SweepOptions {
  InputOptions in;
  SplitOptions split;
  std::vector<double> thresholds;
  std::vector<std::size_t> checkpoints;
  std::string classifier = "nc";
  std::string out_prefix;
  bool record_timing = false;
};

struct RankOptions {
  InputOptions in;
  std::string out_prefix;
};

struct RankApproxOptions {
  InputOptions in;
  std::string range = "169:209";
  std::string out_prefix;
};

struct RenderOptions {
  std::string labels;
  std::string right;
  std::string palette = "classic";
  std::string out;
};

struct SynthOptions {
  SynthSpec spec;
  std::string interleave = "bsq";
  std::string byteorder = "le";
  std::string out_prefix;
};

void add_cube_options(CLI::App* cmd, InputOptions& in, bool need_gt) {
  cmd->add_option("--cube", in.cube, "Raw cube raster (sidecar <path>.desc)")->required();
  cmd->add_option("--cube-desc", in.cube_desc, "Explicit cube descriptor path");
  auto* gt = cmd->add_option("--gt", in.gt, "Ground-truth raster (sidecar <path>.desc)");
  if (need_gt) gt->required();
  cmd->add_option("--gt-desc", in.gt_desc, "Explicit ground-truth descriptor path");
  cmd->add_option("--classes", in.classes, "Number of classes (default: descriptor, else max label)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--bins", in.bins, "Quantization bins per band")->capture_default_str()->check(CLI::Range(1, 65536));
}

void add_split_options(CLI::App* cmd, SplitOptions& s) {
  cmd->add_option("--seed", s.seed, "Seed of the train/test split")->capture_default_str();
  cmd->add_option("--train-fraction", s.train_fraction, "Fraction of labeled pixels used for training")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
}

HyperCube read_cube(const InputOptions& in) {
  const fs::path desc = in.cube_desc.empty() ? descriptor_path(in.cube) : fs::path(in.cube_desc);
  return load_cube(in.cube, read_descriptor(desc));
}

GroundTruth read_gt(const InputOptions& in) {
  const fs::path desc = in.gt_desc.empty() ? descriptor_path(in.gt) : fs::path(in.gt_desc);
  std::optional<int> classes;
  if (in.classes > 0) classes = in.classes;
  return load_gt(in.gt, read_descriptor(desc), classes);
}

fs::path output_path(const std::string& prefix, const std::string& suffix) {
  fs::path p(prefix + suffix);
  if (p.has_parent_path() && !fs::exists(p.parent_path())) {
    std::error_code ec;
    fs::create_directories(p.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + p.parent_path().string() + ": " + ec.message());
  }
  return p;
}

void write_text(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  std::ostringstream buf;
  body(buf);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  const std::string s = buf.str();
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

void write_bytes(const fs::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

RecordJson input_record(const InputOptions& in, const HyperCube& cube, const GroundTruth* gt) {
  RecordJson r;
  r["cube"] = {{"path", in.cube}, {"desc", in.cube_desc}, {"bands", cube.bands()},
               {"rows", cube.rows()}, {"cols", cube.cols()}};
  if (gt) {
    r["gt"] = {{"path", in.gt}, {"desc", in.gt_desc}, {"n_classes", gt->n_classes()},
               {"labeled_pixels", gt->labeled().size()}};
  }
  r["bins"] = in.bins;
  return r;
}

BandRange parse_range(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("band range must look like first:last");
  try {
    std::size_t used_a = 0;
    std::size_t used_b = 0;
    const std::string a = text.substr(0, colon);
    const std::string b = text.substr(colon + 1);
    BandRange r{std::stoul(a, &used_a), std::stoul(b, &used_b)};
    if (used_a != a.size() || used_b != b.size()) throw std::invalid_argument("trailing characters");
    return r;
  } catch (const std::exception&) {
    throw std::invalid_argument("bad band range '" + text + "'");
  }
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

// --- commands ---------------------------------------------------------------

void cmd_rank(const RankOptions& o, std::ostream& out) {
  const HyperCube cube = read_cube(o.in);
  const GroundTruth gt = read_gt(o.in);
  const MIRanking ranking = mi_ranking(cube, gt, o.in.bins);
  std::vector<RankedBand> by_band = ranking.entries;
  std::sort(by_band.begin(), by_band.end(), [](const auto& a, const auto& b) { return a.band < b.band; });
  const auto band_path = output_path(o.out_prefix, "_mi_by_band.csv");
  const auto rank_path = output_path(o.out_prefix, "_mi_by_rank.csv");
  write_text(band_path, [&](std::ostream& s) { write_mi_csv(s, by_band); });
  write_text(rank_path, [&](std::ostream& s) { write_mi_csv(s, ranking.entries); });
  out << "ranked " << cube.bands() << " bands; top band " << ranking.entries.front().band << " ("
      << format_fixed(ranking.entries.front().mi_bits, 4) << " bits)\n"
      << "wrote " << band_path.string() << "\nwrote " << rank_path.string() << '\n';
}

void cmd_rank_approx(const RankApproxOptions& o, std::ostream& out) {
  const HyperCube cube = read_cube(o.in);
  const BandRange range = parse_range(o.range);
  std::vector<PixelIndex> pixels;
  if (!o.in.gt.empty()) {
    const GroundTruth gt = read_gt(o.in);
    require_same_geometry(cube, gt);
    pixels.assign(gt.labeled().begin(), gt.labeled().end());
  } else {
    pixels.resize(cube.pixels());
    for (std::size_t p = 0; p < pixels.size(); ++p) pixels[p] = static_cast<PixelIndex>(p);
  }
  const SymbolSequence reference = approximate_gt_symbols(cube, range, o.in.bins, pixels);
  const auto curve = mi_per_band(cube, reference, pixels, o.in.bins);
  const MIRanking ranking = rank_bands(curve);
  const auto band_path = output_path(o.out_prefix, "_mi_by_band.csv");
  const auto rank_path = output_path(o.out_prefix, "_mi_by_rank.csv");
  write_text(band_path, [&](std::ostream& s) { write_mi_csv(s, curve); });
  write_text(rank_path, [&](std::ostream& s) { write_mi_csv(s, ranking.entries); });
  out << "ranked " << cube.bands() << " bands against the mean of bands " << range.first << ".."
      << range.last << "\nwrote " << band_path.string() << "\nwrote " << rank_path.string() << '\n';
}

void cmd_select(const SelectOptions& o, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const HyperCube cube = read_cube(o.in);
  const GroundTruth gt = read_gt(o.in);
  require_same_geometry(cube, gt);
  const PixelSplit split = random_split(gt, o.split.train_fraction, o.split.seed);

  SelectionConfig cfg;
  cfg.threshold = o.threshold;
  cfg.max_bands = o.max_bands == 0 ? cube.bands() : o.max_bands;
  cfg.n_bins = o.in.bins;
  cfg.classifier = ClassifierSpec::parse(o.classifier);
  cfg.initial_pe = o.initial_pe;

  const MIRanking ranking = mi_ranking(cube, gt, cfg.n_bins);
  const SelectionTrace trace = wrapper_select(cube, gt, split, cfg, ranking);
  const EstimatedMap c_est = build_estimated_map(cube, gt, trace.selected, split, cfg.classifier);
  const EvaluationReport test_report = evaluate(c_est, gt, split, EvalScope::Test);
  const EvaluationReport all_report = evaluate(c_est, gt, split, EvalScope::All);

  const auto trace_path = output_path(o.out_prefix, "_trace.csv");
  const auto report_path = output_path(o.out_prefix, "_report.csv");
  const auto map_path = output_path(o.out_prefix, "_cest.raw");
  const auto record_path = output_path(o.out_prefix, "_run.json");
  write_text(trace_path, [&](std::ostream& s) { write_trace_csv(s, trace); });
  write_text(report_path, [&](std::ostream& s) { write_report_csv(s, test_report); });
  save_gt_with_descriptor(map_path, GroundTruth(gt.rows(), gt.cols(), c_est.labels, gt.n_classes()),
                          RasterDescriptor{});

  RecordJson record;
  record["tool"] = kToolName;
  record["command"] = "select";
  record["config"] = {{"threshold", o.threshold},
                      {"max_bands", cfg.max_bands},
                      {"classifier", cfg.classifier.to_string()},
                      {"initial_pe", o.initial_pe ? RecordJson(*o.initial_pe) : RecordJson(nullptr)},
                      {"out_prefix", o.out_prefix}};
  record["inputs"] = input_record(o.in, cube, &gt);
  record["split"] = to_record(split, o.split.train_fraction);
  record["ranking"] = to_record(ranking);
  record["trace"] = to_record(trace);
  record["reports"] = {{"test", to_record(test_report)}, {"all", to_record(all_report)}};
  record["outputs"] = {{"trace", trace_path.string()}, {"report", report_path.string()},
                       {"estimated_map", map_path.string()}};
  if (o.record_timing) record["timing"] = {{"elapsed_ms", elapsed_ms(start)}};
  write_text(record_path, [&](std::ostream& s) { s << serialize_record(record); });

  out << "selected " << trace.selected.size() << " of " << trace.steps.size() << " examined bands;"
      << " test accuracy " << format_fixed(test_report.overall_accuracy, 2) << "%\n";
  for (const auto& p : {trace_path, report_path, map_path, record_path}) out << "wrote " << p.string() << '\n';
}

void cmd_sweep(const SweepOptions& o, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const HyperCube cube = read_cube(o.in);
  const GroundTruth gt = read_gt(o.in);
  require_same_geometry(cube, gt);
  const PixelSplit split = random_split(gt, o.split.train_fraction, o.split.seed);

  SelectionConfig base;
  base.n_bins = o.in.bins;
  base.classifier = ClassifierSpec::parse(o.classifier);
  const SweepResult sweep = threshold_sweep(cube, gt, split, o.thresholds, o.checkpoints, base);

  const auto table_path = output_path(o.out_prefix, "_table.csv");
  const auto curves_path = output_path(o.out_prefix, "_curves.csv");
  const auto record_path = output_path(o.out_prefix, "_run.json");
  write_text(table_path, [&](std::ostream& s) { write_sweep_table_csv(s, sweep); });
  write_text(curves_path, [&](std::ostream& s) { write_sweep_curves_csv(s, sweep); });

  RecordJson record;
  record["tool"] = kToolName;
  record["command"] = "sweep";
  record["config"] = {{"thresholds", o.thresholds},
                      {"checkpoints", o.checkpoints},
                      {"classifier", base.classifier.to_string()},
                      {"out_prefix", o.out_prefix}};
  record["inputs"] = input_record(o.in, cube, &gt);
  record["split"] = to_record(split, o.split.train_fraction);
  record["sweep"] = to_record(sweep);
  record["outputs"] = {{"table", table_path.string()}, {"curves", curves_path.string()}};
  if (o.record_timing) record["timing"] = {{"elapsed_ms", elapsed_ms(start)}};
  write_text(record_path, [&](std::ostream& s) { s << serialize_record(record); });

  out << "swept " << o.thresholds.size() << " thresholds\n";
  for (const auto& p : {table_path, curves_path, record_path}) out << "wrote " << p.string() << '\n';
}

void cmd_render(const RenderOptions& o, std::ostream& out) {
  const Palette palette = Palette::named(o.palette);
  const LabelImage left = load_label_image(o.labels);
  std::vector<std::uint8_t> bytes;
  if (o.right.empty()) {
    bytes = render_ppm(left, palette);
  } else {
    bytes = render_ppm_pair(left, load_label_image(o.right), palette);
  }
  write_bytes(output_path(o.out, ""), bytes);
  out << "wrote " << o.out << '\n';
}

void cmd_synth(const SynthOptions& o, std::ostream& out) {
  const SynthScene scene = synth_cube(o.spec);
  RasterDescriptor d;
  d.bands = scene.cube.bands();
  d.rows = scene.cube.rows();
  d.cols = scene.cube.cols();
  d.interleave = parse_interleave(o.interleave);
  d.byte_order = o.byteorder == "be" ? ByteOrder::Big : ByteOrder::Little;
  const auto cube_path = output_path(o.out_prefix, "_cube.raw");
  const auto gt_path = output_path(o.out_prefix, "_gt.raw");
  const auto roles_path = output_path(o.out_prefix, "_bands.csv");
  save_cube_with_descriptor(cube_path, scene.cube, d);
  save_gt_with_descriptor(gt_path, scene.gt, RasterDescriptor{});
  write_text(roles_path, [&](std::ostream& s) { write_band_roles(s, scene.bands); });
  out << "synthesized " << d.bands << " bands of " << d.rows << "x" << d.cols << " pixels, "
      << scene.gt.labeled().size() << " labeled\n";
  for (const auto& p : {cube_path, gt_path, roles_path}) out << "wrote " << p.string() << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hyperspectral band selection driven by mutual information and Fano error bounds",
               kToolName};
  app.require_subcommand(1);

  RankOptions rank;
  auto* rank_cmd = app.add_subcommand("rank", "Rank bands by mutual information with the ground truth");
  add_cube_options(rank_cmd, rank.in, true);
  rank_cmd->add_option("-o,--out-prefix", rank.out_prefix, "Output file prefix")->required();

  RankApproxOptions approx;
  auto* approx_cmd = app.add_subcommand(
      "rank-approx", "Rank bands against a reference map averaged from a band range");
  add_cube_options(approx_cmd, approx.in, false);
  approx_cmd->add_option("--range", approx.range, "Inclusive zero-based band range first:last")
      ->capture_default_str();
  approx_cmd->add_option("-o,--out-prefix", approx.out_prefix, "Output file prefix")->required();

  SelectOptions sel;
  auto* sel_cmd = app.add_subcommand("select", "Wrapper band selection with a redundancy threshold");
  add_cube_options(sel_cmd, sel.in, true);
  add_split_options(sel_cmd, sel.split);
  sel_cmd->add_option("--threshold", sel.threshold, "Minimum Pe decrease for accepting a band")
      ->capture_default_str();
  sel_cmd->add_option("--max-bands", sel.max_bands, "Stop after this many bands (default: all)")
      ->check(CLI::PositiveNumber);
  sel_cmd->add_option("--classifier", sel.classifier, "nc | knn[:k] | registered plug-in")->capture_default_str();
  sel_cmd->add_option("--initial-pe", sel.initial_pe, "Initial Pe* (default: score of the top-MI band)");
  sel_cmd->add_option("-o,--out-prefix", sel.out_prefix, "Output file prefix")->required();
  sel_cmd->add_flag("--record-timing", sel.record_timing, "Include wall-clock timing in the run record");

  SweepOptions sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Selection accuracy over a grid of thresholds");
  add_cube_options(sweep_cmd, sweep.in, true);
  add_split_options(sweep_cmd, sweep.split);
  sweep_cmd->add_option("--thresholds", sweep.thresholds, "Comma-separated thresholds")
      ->required()
      ->delimiter(',');
  sweep_cmd->add_option("--checkpoints", sweep.checkpoints, "Comma-separated band counts")
      ->required()
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--classifier", sweep.classifier, "nc | knn[:k] | registered plug-in")
      ->capture_default_str();
  sweep_cmd->add_option("-o,--out-prefix", sweep.out_prefix, "Output file prefix")->required();
  sweep_cmd->add_flag("--record-timing", sweep.record_timing, "Include wall-clock timing in the run record");

  RenderOptions render;
  auto* render_cmd = app.add_subcommand("render", "Render a label map as a binary PPM");
  render_cmd->add_option("--labels", render.labels, "Label raster (ground truth or estimated map)")->required();
  render_cmd->add_option("--right", render.right, "Second label raster drawn to the right");
  render_cmd->add_option("--palette", render.palette, "classic | gray")->capture_default_str();
  render_cmd->add_option("-o,--out", render.out, "Output .ppm path")->required();

  SynthOptions synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic cube with planted redundancy");
  synth_cmd->add_option("--classes", synth.spec.n_classes)->capture_default_str()->check(CLI::Range(2, 65535));
  synth_cmd->add_option("--rows", synth.spec.rows)->capture_default_str()->check(CLI::PositiveNumber);
  synth_cmd->add_option("--cols", synth.spec.cols)->capture_default_str()->check(CLI::PositiveNumber);
  synth_cmd->add_option("--informative", synth.spec.informative_bands)->capture_default_str()->check(CLI::PositiveNumber);
  synth_cmd->add_option("--copies", synth.spec.copies_per_informative, "Extra copies per informative band")
      ->capture_default_str();
  synth_cmd->add_option("--noise-bands", synth.spec.noise_bands)->capture_default_str();
  synth_cmd->add_option("--noise-level", synth.spec.noise_level, "Noise sd in class-level spacings")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  synth_cmd->add_option("--seed", synth.spec.seed)->capture_default_str();
  synth_cmd->add_option("--interleave", synth.interleave)->capture_default_str()->check(CLI::IsMember({"bsq", "bil", "bip"}));
  synth_cmd->add_option("--byteorder", synth.byteorder)->capture_default_str()->check(CLI::IsMember({"le", "be"}));
  synth_cmd->add_option("-o,--out-prefix", synth.out_prefix, "Output file prefix")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << kToolName << ": " << e.what() << '\n';
    return kValidationError;
  }

  try {
    if (*rank_cmd) cmd_rank(rank, out);
    else if (*approx_cmd) cmd_rank_approx(approx, out);
    else if (*sel_cmd) cmd_select(sel, out);
    else if (*sweep_cmd) cmd_sweep(sweep, out);
    else if (*render_cmd) cmd_render(render, out);
    else if (*synth_cmd) cmd_synth(synth, out);
  } catch (const IoError& e) {
    err << kToolName << ": " << e.what() << '\n';
    return kIoError;
  } catch (const fs::filesystem_error& e) {
    err << kToolName << ": " << e.what() << '\n';
    return kIoError;
  } catch (const std::exception& e) {
    err << kToolName << ": " << e.what() << '\n';
    return kValidationError;
  }
  return kOk;
}

}  // namespace fanoband::cli
