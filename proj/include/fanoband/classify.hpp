#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "fanoband/cube.hpp"

namespace fanoband {

/// Row-major samples x features matrix of band reflectances, tagged with the
/// band each column came from.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::size_t samples, std::vector<std::size_t> bands, std::vector<double> values);

  std::size_t samples() const noexcept { return samples_; }
  std::size_t features() const noexcept { return bands_.size(); }
  std::span<const std::size_t> bands() const noexcept { return bands_; }
  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * features(), features()};
  }
  double at(std::size_t i, std::size_t j) const { return values_[i * features() + j]; }

 private:
  std::size_t samples_ = 0;
  std::vector<std::size_t> bands_;
  std::vector<double> values_;
};

/// Gathers the given bands at the given pixels.
FeatureMatrix extract_features(const HyperCube& cube, std::span<const std::size_t> bands,
                               std::span<const PixelIndex> pixels);

/// Per-feature z-scoring with statistics from the training set. A zero
/// variance feature keeps a unit divisor.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;

  static Standardizer fit(const FeatureMatrix& x);
  void apply(std::span<const double> in, std::span<double> out) const;
};

/// A fitted classifier. Implementations must be immutable after fitting.
class Model {
 public:
  virtual ~Model() = default;
  virtual Label predict_one(std::span<const double> features) const = 0;
};

/// Classifier protocol. Labels are class ids in [1, n_classes].
class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual std::unique_ptr<const Model> fit(const FeatureMatrix& x, std::span<const Label> y,
                                           int n_classes) const = 0;
};

/// Nearest class centroid on standardized features.
class NearestCentroid final : public Classifier {
 public:
  std::unique_ptr<const Model> fit(const FeatureMatrix& x, std::span<const Label> y,
                                   int n_classes) const override;
};

/// Majority vote of the k nearest training samples (Euclidean, standardized).
/// Neighbours are ordered by (distance, class id); vote ties go to the lowest id.
class KNearest final : public Classifier {
 public:
  explicit KNearest(int k = 1);
  std::unique_ptr<const Model> fit(const FeatureMatrix& x, std::span<const Label> y,
                                   int n_classes) const override;

 private:
  int k_;
};

/// Textual classifier selector: "nc", "knn" or "knn:<k>", or the name of a
/// registered plug-in (optionally "name:<k>").
struct ClassifierSpec {
  std::string name = "nc";
  int k = 1;

  static ClassifierSpec parse(const std::string& text);
  std::string to_string() const;
};

using ClassifierFactory = std::function<std::unique_ptr<Classifier>(const ClassifierSpec&)>;

/// Adds or replaces a named classifier, e.g. an external SVM. Thread-safe.
void register_classifier(const std::string& name, ClassifierFactory factory);

/// Throws std::invalid_argument for unknown names.
std::unique_ptr<Classifier> make_classifier(const ClassifierSpec& spec);

struct TrainedModel {
  std::vector<std::size_t> bands;
  int n_classes = 0;
  std::shared_ptr<const Model> model;
};

/// Throws std::invalid_argument for fewer than two distinct classes, for a
/// class in [1, n_classes] without samples (the message lists them), for a
/// label outside [1, n_classes], or for a row/label count mismatch.
TrainedModel train(const ClassifierSpec& spec, const FeatureMatrix& x, std::span<const Label> y,
                   int n_classes);

/// Throws std::invalid_argument when the feature columns differ from the
/// model's band list.
std::vector<Label> predict(const TrainedModel& model, const FeatureMatrix& x);

/// Full-size class map; unlabeled pixels hold 0.
struct EstimatedMap {
  std::size_t rows = 0;
  std::size_t cols = 0;
  int n_classes = 0;
  std::vector<Label> labels;
};

/// Trains on split.train restricted to `bands` and predicts every labeled pixel.
EstimatedMap build_estimated_map(const HyperCube& cube, const GroundTruth& gt,
                                 std::span<const std::size_t> bands, const PixelSplit& split,
                                 const ClassifierSpec& spec);

enum class EvalScope { Test, All };

struct ClassAccuracy {
  int class_id = 0;
  std::size_t pixels = 0;
  std::size_t correct = 0;
  double percent = 0.0;
};

struct EvaluationReport {
  double overall_accuracy = 0.0;  // percent
  std::size_t total = 0;
  std::size_t correct = 0;
  std::vector<ClassAccuracy> per_class;                 // ascending class id, classes in scope only
  std::vector<std::vector<std::size_t>> confusion;      // [true - 1][predicted - 1]
};

EvaluationReport evaluate(const EstimatedMap& c_est, const GroundTruth& gt, const PixelSplit& split,
                          EvalScope scope);

/// Header class,pixels,accuracy_pct; accuracy to two decimals.
void write_report_csv(std::ostream& out, const EvaluationReport& report);

/// H(C | C_est) over every labeled pixel.
double conditional_entropy_of_map(const GroundTruth& gt, const EstimatedMap& c_est);

}  // namespace fanoband
