#include "fanoband/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <utility>

#include "fanoband/format.hpp"

namespace fanoband {

FeatureMatrix::FeatureMatrix(std::size_t samples, std::vector<std::size_t> bands, std::vector<double> values)
    : samples_(samples), bands_(std::move(bands)), values_(std::move(values)) {
  if (bands_.empty()) throw std::invalid_argument("feature matrix needs at least one feature");
  if (values_.size() != samples_ * bands_.size())
    throw std::invalid_argument("feature matrix buffer does not match its shape");
  for (double v : values_)
    if (!std::isfinite(v)) throw std::invalid_argument("feature matrix holds a non-finite value");
}

FeatureMatrix extract_features(const HyperCube& cube, std::span<const std::size_t> bands,
                               std::span<const PixelIndex> pixels) {
  for (std::size_t b : bands)
    if (b >= cube.bands()) throw std::out_of_range("band " + std::to_string(b) + " out of range");
  std::vector<double> values(pixels.size() * bands.size());
  for (std::size_t j = 0; j < bands.size(); ++j) {
    const auto band = cube.band(bands[j]);
    for (std::size_t i = 0; i < pixels.size(); ++i) values[i * bands.size() + j] = band[pixels[i]];
  }
  return FeatureMatrix(pixels.size(), {bands.begin(), bands.end()}, std::move(values));
}

namespace {

// Summing in sorted order makes the statistics independent of sample order.
double sorted_sum(std::vector<double>& v) {
  std::sort(v.begin(), v.end());
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

}  // namespace

Standardizer Standardizer::fit(const FeatureMatrix& x) {
  Standardizer s;
  const std::size_t d = x.features();
  s.mean.assign(d, 0.0);
  s.scale.assign(d, 1.0);
  if (x.samples() == 0) return s;
  const double n = static_cast<double>(x.samples());
  std::vector<double> col(x.samples());
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < x.samples(); ++i) col[i] = x.at(i, j);
    const double mean = sorted_sum(col) / n;
    double ss = 0.0;
    for (double v : col) ss += (v - mean) * (v - mean);  // col is sorted now
    const double sd = std::sqrt(ss / n);
    s.mean[j] = mean;
    s.scale[j] = sd > 0.0 ? sd : 1.0;
  }
  return s;
}

void Standardizer::apply(std::span<const double> in, std::span<double> out) const {
  for (std::size_t j = 0; j < in.size(); ++j) out[j] = (in[j] - mean[j]) / scale[j];
}

namespace {

class CentroidModel final : public Model {
 public:
  CentroidModel(Standardizer z, std::vector<std::vector<double>> centroids)
      : z_(std::move(z)), centroids_(std::move(centroids)) {}

  Label predict_one(std::span<const double> features) const override {
    std::vector<double> q(features.size());
    z_.apply(features, q);
    Label best = 1;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < centroids_.size(); ++k) {
      double d = 0.0;
      for (std::size_t j = 0; j < q.size(); ++j) {
        const double diff = q[j] - centroids_[k][j];
        d += diff * diff;
      }
      if (d < best_d) {
        best_d = d;
        best = static_cast<Label>(k + 1);
      }
    }
    return best;
  }

 private:
  Standardizer z_;
  std::vector<std::vector<double>> centroids_;  // index k holds class k + 1
};

class NeighbourModel final : public Model {
 public:
  NeighbourModel(Standardizer z, std::vector<double> train, std::vector<Label> labels, std::size_t dims,
                 int k, int n_classes)
      : z_(std::move(z)), train_(std::move(train)), labels_(std::move(labels)), dims_(dims), k_(k),
        n_classes_(n_classes) {}

  Label predict_one(std::span<const double> features) const override {
    std::vector<double> q(features.size());
    z_.apply(features, q);
    std::vector<std::pair<double, Label>> dist(labels_.size());
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      const double* row = train_.data() + i * dims_;
      double d = 0.0;
      for (std::size_t j = 0; j < dims_; ++j) {
        const double diff = q[j] - row[j];
        d += diff * diff;
      }
      dist[i] = {d, labels_[i]};
    }
    const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(k_), dist.size());
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
    std::vector<int> votes(static_cast<std::size_t>(n_classes_) + 1, 0);
    for (std::size_t i = 0; i < k; ++i) ++votes[dist[i].second];
    Label best = 1;
    for (int c = 2; c <= n_classes_; ++c)
      if (votes[c] > votes[best]) best = static_cast<Label>(c);
    return best;
  }

 private:
  Standardizer z_;
  std::vector<double> train_;
  std::vector<Label> labels_;
  std::size_t dims_;
  int k_;
  int n_classes_;
};

void validate_training_set(const FeatureMatrix& x, std::span<const Label> y, int n_classes) {
  if (y.size() != x.samples())
    throw std::invalid_argument("label count " + std::to_string(y.size()) + " does not match " +
                                std::to_string(x.samples()) + " samples");
  if (n_classes < 2) throw std::invalid_argument("at least two classes are required");
  std::vector<std::size_t> count(static_cast<std::size_t>(n_classes) + 1, 0);
  for (Label l : y) {
    if (l < 1 || l > n_classes)
      throw std::invalid_argument("label " + std::to_string(l) + " outside [1, " +
                                  std::to_string(n_classes) + "]");
    ++count[l];
  }
  const auto distinct = std::count_if(count.begin() + 1, count.end(), [](std::size_t c) { return c > 0; });
  if (distinct < 2) throw std::invalid_argument("training data must contain at least two classes");
  std::string missing;
  for (int c = 1; c <= n_classes; ++c) {
    if (count[c] == 0) missing += (missing.empty() ? "" : ", ") + std::to_string(c);
  }
  if (!missing.empty()) throw std::invalid_argument("no training samples for class(es) " + missing);
}

}  // namespace

std::unique_ptr<const Model> NearestCentroid::fit(const FeatureMatrix& x, std::span<const Label> y,
                                                  int n_classes) const {
  validate_training_set(x, y, n_classes);
  Standardizer z = Standardizer::fit(x);
  const std::size_t d = x.features();
  const auto nk = static_cast<std::size_t>(n_classes);
  std::vector<std::vector<double>> centroids(nk, std::vector<double>(d, 0.0));
  std::vector<std::vector<double>> per_class(nk);
  for (std::size_t j = 0; j < d; ++j) {
    for (auto& v : per_class) v.clear();
    for (std::size_t i = 0; i < x.samples(); ++i) per_class[y[i] - 1u].push_back(x.at(i, j));
    for (std::size_t k = 0; k < nk; ++k) {
      const double n = static_cast<double>(per_class[k].size());
      const double raw = sorted_sum(per_class[k]) / n;
      centroids[k][j] = (raw - z.mean[j]) / z.scale[j];
    }
  }
  return std::make_unique<CentroidModel>(std::move(z), std::move(centroids));
}

KNearest::KNearest(int k) : k_(k) {
  if (k_ < 1) throw std::invalid_argument("k must be at least 1");
}

std::unique_ptr<const Model> KNearest::fit(const FeatureMatrix& x, std::span<const Label> y,
                                           int n_classes) const {
  validate_training_set(x, y, n_classes);
  Standardizer z = Standardizer::fit(x);
  const std::size_t d = x.features();
  std::vector<double> train(x.samples() * d);
  for (std::size_t i = 0; i < x.samples(); ++i)
    z.apply(x.row(i), std::span<double>(train.data() + i * d, d));
  return std::make_unique<NeighbourModel>(std::move(z), std::move(train),
                                          std::vector<Label>(y.begin(), y.end()), d, k_, n_classes);
}

ClassifierSpec ClassifierSpec::parse(const std::string& text) {
  ClassifierSpec spec;
  const auto colon = text.find(':');
  spec.name = text.substr(0, colon);
  if (spec.name.empty()) throw std::invalid_argument("empty classifier name");
  if (colon != std::string::npos) {
    const std::string k = text.substr(colon + 1);
    std::size_t used = 0;
    int value = 0;
    try {
      value = std::stoi(k, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != k.size() || k.empty() || value < 1)
      throw std::invalid_argument("bad classifier parameter '" + k + "' in '" + text + "'");
    spec.k = value;
  }
  return spec;
}

std::string ClassifierSpec::to_string() const {
  return name == "nc" ? name : name + ":" + std::to_string(k);
}

namespace {

struct Registry {
  std::mutex mutex;
  std::map<std::string, ClassifierFactory> factories{
      {"nc", [](const ClassifierSpec&) { return std::make_unique<NearestCentroid>(); }},
      {"knn", [](const ClassifierSpec& s) { return std::make_unique<KNearest>(s.k); }},
  };
};

Registry& registry() {
  static Registry r;
  return r;
}

}  // namespace

void register_classifier(const std::string& name, ClassifierFactory factory) {
  auto& r = registry();
  std::lock_guard lock(r.mutex);
  r.factories[name] = std::move(factory);
}

std::unique_ptr<Classifier> make_classifier(const ClassifierSpec& spec) {
  ClassifierFactory factory;
  {
    auto& r = registry();
    std::lock_guard lock(r.mutex);
    const auto it = r.factories.find(spec.name);
    if (it == r.factories.end()) throw std::invalid_argument("unknown classifier '" + spec.name + "'");
    factory = it->second;
  }
  return factory(spec);
}

TrainedModel train(const ClassifierSpec& spec, const FeatureMatrix& x, std::span<const Label> y,
                   int n_classes) {
  const auto classifier = make_classifier(spec);
  TrainedModel m;
  m.bands.assign(x.bands().begin(), x.bands().end());
  m.n_classes = n_classes;
  m.model = classifier->fit(x, y, n_classes);
  return m;
}

std::vector<Label> predict(const TrainedModel& model, const FeatureMatrix& x) {
  std::vector<Label> out(x.samples());
  if (x.samples() == 0) return out;
  if (!std::equal(model.bands.begin(), model.bands.end(), x.bands().begin(), x.bands().end()))
    throw std::invalid_argument("feature columns do not match the model's band list");

  const std::size_t work = x.samples() * x.features();
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t n_threads = work < 200000 ? 1 : std::min<std::size_t>(hw, 16);
  auto run = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) out[i] = model.model->predict_one(x.row(i));
  };
  if (n_threads == 1) {
    run(0, x.samples());
    return out;
  }
  std::vector<std::jthread> pool;
  const std::size_t chunk = (x.samples() + n_threads - 1) / n_threads;
  for (std::size_t t = 0; t < n_threads; ++t) {
    const std::size_t b = t * chunk;
    const std::size_t e = std::min(x.samples(), b + chunk);
    if (b < e) pool.emplace_back(run, b, e);
  }
  pool.clear();  // joins
  return out;
}

EstimatedMap build_estimated_map(const HyperCube& cube, const GroundTruth& gt,
                                 std::span<const std::size_t> bands, const PixelSplit& split,
                                 const ClassifierSpec& spec) {
  if (bands.empty()) throw std::invalid_argument("no bands selected");
  require_same_geometry(cube, gt);
  const FeatureMatrix train_x = extract_features(cube, bands, split.train);
  std::vector<Label> train_y;
  train_y.reserve(split.train.size());
  for (PixelIndex p : split.train) train_y.push_back(gt.at(p));
  const TrainedModel model = train(spec, train_x, train_y, gt.n_classes());

  const FeatureMatrix all_x = extract_features(cube, bands, gt.labeled());
  const std::vector<Label> predicted = predict(model, all_x);
  EstimatedMap map;
  map.rows = gt.rows();
  map.cols = gt.cols();
  map.n_classes = gt.n_classes();
  map.labels.assign(gt.pixels(), 0);
  for (std::size_t i = 0; i < predicted.size(); ++i) map.labels[gt.labeled()[i]] = predicted[i];
  return map;
}

EvaluationReport evaluate(const EstimatedMap& c_est, const GroundTruth& gt, const PixelSplit& split,
                          EvalScope scope) {
  if (c_est.rows != gt.rows() || c_est.cols != gt.cols() || c_est.labels.size() != gt.pixels())
    throw std::invalid_argument("estimated map is not aligned with the ground truth");
  const auto pixels = scope == EvalScope::Test ? std::span<const PixelIndex>(split.test) : gt.labeled();
  const auto nk = static_cast<std::size_t>(gt.n_classes());
  EvaluationReport r;
  r.confusion.assign(nk, std::vector<std::size_t>(nk, 0));
  for (PixelIndex p : pixels) {
    const Label truth = gt.at(p);
    const Label guess = c_est.labels[p];
    if (truth == 0) throw std::invalid_argument("evaluation pixel is unlabeled");
    if (guess < 1 || guess > nk)
      throw std::invalid_argument("estimated label " + std::to_string(guess) + " outside class range");
    ++r.confusion[truth - 1u][guess - 1u];
  }
  for (std::size_t k = 0; k < nk; ++k) {
    std::size_t row_total = 0;
    for (std::size_t v : r.confusion[k]) row_total += v;
    if (row_total == 0) continue;
    ClassAccuracy ca;
    ca.class_id = static_cast<int>(k + 1);
    ca.pixels = row_total;
    ca.correct = r.confusion[k][k];
    ca.percent = 100.0 * static_cast<double>(ca.correct) / static_cast<double>(row_total);
    r.total += row_total;
    r.correct += ca.correct;
    r.per_class.push_back(ca);
  }
  r.overall_accuracy = r.total == 0 ? 0.0 : 100.0 * static_cast<double>(r.correct) / static_cast<double>(r.total);
  return r;
}

void write_report_csv(std::ostream& out, const EvaluationReport& report) {
  out << "class,pixels,accuracy_pct\n";
  for (const auto& c : report.per_class)
    out << c.class_id << ',' << c.pixels << ',' << format_fixed(c.percent, 2) << '\n';
}

double conditional_entropy_of_map(const GroundTruth& gt, const EstimatedMap& c_est) {
  if (c_est.labels.size() != gt.pixels())
    throw std::invalid_argument("estimated map is not aligned with the ground truth");
  const auto alphabet = static_cast<std::size_t>(gt.n_classes()) + 1;
  std::vector<Symbol> truth, guess;
  truth.reserve(gt.labeled().size());
  guess.reserve(gt.labeled().size());
  for (PixelIndex p : gt.labeled()) {
    truth.push_back(gt.at(p));
    guess.push_back(c_est.labels[p]);
  }
  return conditional_entropy(SymbolSequence(std::move(truth), alphabet),
                             SymbolSequence(std::move(guess), alphabet));
}

}  // namespace fanoband
