#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "a11yrev/corpus.hpp"
#include "a11yrev/featurize.hpp"

namespace a11yrev {

class LearnerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Model file problems. `kind` tells a version mismatch from a damaged file.
class ModelFormatError : public LearnerError {
 public:
  enum class Kind { version, corrupt };
  ModelFormatError(Kind kind, const std::string& what) : LearnerError(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

enum class Algorithm {
  logreg,
  decision_forest,
  boosted_trees,
  neural_net,
  linear_svm,
  avg_perceptron,
  bayes_point,
};

std::string_view to_string(Algorithm algorithm);
Algorithm parse_algorithm(std::string_view name);
const std::vector<Algorithm>& all_algorithms();
bool is_linear(Algorithm algorithm);

using Hyperparameters = std::map<std::string, double, std::less<>>;

/// Default hyperparameters per algorithm:
///
///   logreg           optimiz_tol 1e-7, L1_weight 1, L2_weight 1, memory_L_BFGS 20,
///                    max_iter 1000
///   decision_forest  n_estimators 8, max_depth 32, n_random_splits 128,
///                    min_samples_leaf 1
///   boosted_trees    n_tree 100, max_n_leaf 20, min_samples_leaf 10, learning_rate 0.2
///   neural_net       n_nodes 100, learning_rate 0.1, n_learning_rate 100 (epochs),
///                    learning_rate_weights 0.1 (initial weight diameter), momentum 0
///   linear_svm       n_iter 1 (passes), Lambda 0.001
///   avg_perceptron   learning_rate 1, m_iter 10
///   bayes_point      n_training_iter 30 (perceptron samples), sample_epochs 10
Hyperparameters default_hyperparameters(Algorithm algorithm);

struct LearnerSpec {
  Algorithm algorithm = Algorithm::boosted_trees;
  Hyperparameters hyperparameters;
  std::uint64_t seed = 0;

  /// Spec with every hyperparameter at its default.
  static LearnerSpec defaults(Algorithm algorithm, std::uint64_t seed = 0);

  double get(std::string_view name) const;
  /// Copy with one hyperparameter replaced; unknown names are rejected.
  LearnerSpec with(const std::string& name, double value) const;
  /// Throws LearnerError when a hyperparameter is missing, unknown or out of range.
  void validate() const;

  bool operator==(const LearnerSpec&) const = default;
};

/// Linear decision function w.x + b over the model's feature columns.
struct LinearParams {
  std::vector<double> weights;
  double bias = 0.0;
};

/// Flat binary tree; a node with feature < 0 is a leaf holding `value`.
/// Internal nodes send x[feature] <= threshold to `left`.
struct Tree {
  std::vector<std::int32_t> feature;
  std::vector<double> threshold;
  std::vector<std::int32_t> left;
  std::vector<std::int32_t> right;
  std::vector<double> value;

  std::size_t size() const { return feature.size(); }
  std::size_t leaves() const;
};

/// Leaf values are the positive fraction of the leaf's training rows.
struct ForestParams {
  std::vector<Tree> trees;
};

/// Additive log-odds model: base_score + sum of leaf values.
struct BoostedParams {
  double base_score = 0.0;
  std::vector<Tree> trees;
  /// Summed split gain per feature column.
  std::vector<double> importance;
};

/// One hidden sigmoid layer. hidden_weights is column-major by input:
/// entry (input j, unit k) lives at j * hidden + k.
struct NetworkParams {
  std::size_t hidden = 0;
  std::vector<double> hidden_weights;
  std::vector<double> hidden_bias;
  std::vector<double> output_weights;
  double output_bias = 0.0;
};

using ModelParameters = std::variant<LinearParams, ForestParams, BoostedParams, NetworkParams>;

/// Featurization settings carried inside a model file so that prediction
/// reproduces training-time features.
struct ModelFeaturizer {
  FeaturizerConfig config;
  std::vector<std::string> stop_words;

  Featurizer make() const { return Featurizer(config, StopList(stop_words)); }
};

/// A fitted predictor. Feature columns are the hashed indices seen in the
/// training data; every other index has no influence on the score.
class TrainedModel {
 public:
  TrainedModel(LearnerSpec spec, std::uint32_t dimension, std::vector<std::uint32_t> features,
               ModelParameters parameters, double threshold = 0.5);

  Algorithm algorithm() const { return spec_.algorithm; }
  const LearnerSpec& spec() const { return spec_; }
  std::uint32_t dimension() const { return dimension_; }
  double threshold() const { return threshold_; }
  const std::vector<std::uint32_t>& features() const { return features_; }
  const ModelParameters& parameters() const { return parameters_; }
  const std::optional<ModelFeaturizer>& featurizer() const { return featurizer_; }

  TrainedModel with_threshold(double threshold) const;
  TrainedModel with_featurizer(ModelFeaturizer featurizer) const;

  /// Raw decision value: linear margin, boosted log-odds, network logit, or
  /// forest vote fraction.
  double decision_value(const SparseVector& vector) const;

 private:
  LearnerSpec spec_;
  std::uint32_t dimension_;
  std::vector<std::uint32_t> features_;
  ModelParameters parameters_;
  double threshold_;
  std::optional<ModelFeaturizer> featurizer_;
};

TrainedModel fit(const LearnerSpec& spec, const DesignMatrix& data);

/// Probability-like score in [0, 1].
double predict_score(const TrainedModel& model, const SparseVector& vector);
/// accessibility iff score >= threshold.
Label predict_label(const TrainedModel& model, const SparseVector& vector);

inline constexpr int kModelFormatVersion = 1;

std::string serialize_model(const TrainedModel& model);
TrainedModel deserialize_model(std::string_view text);
void save_model(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel load_model(const std::filesystem::path& path);

}  // namespace a11yrev
