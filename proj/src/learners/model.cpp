#include <algorithm>
#include <cmath>

#include "a11yrev/detail/training.hpp"
#include "a11yrev/learners.hpp"

namespace a11yrev {

namespace detail {

CompactData compact(const DesignMatrix& data) {
  if (data.dimension == 0) throw LearnerError("design matrix has dimension 0");
  if (data.empty()) throw LearnerError("cannot fit on an empty design matrix");
  if (data.rows.size() != data.labels.size()) throw LearnerError("rows and labels differ in size");
  const auto pos = data.count(Label::accessibility);
  if (pos == 0 || pos == data.size()) {
    throw LearnerError("training data contains a single class");
  }
  std::vector<std::uint32_t> features;
  for (const auto& row : data.rows) {
    if (row.dimension() != data.dimension) throw LearnerError("row dimension mismatch");
    for (const auto& e : row.entries()) {
      if (!std::isfinite(e.value)) throw LearnerError("non-finite feature value");
      features.push_back(e.index);
    }
  }
  std::sort(features.begin(), features.end());
  features.erase(std::unique(features.begin(), features.end()), features.end());

  CompactData out;
  out.rows.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    out.rows.push_back(to_columns(data.rows[i], features));
    out.labels.push_back(data.labels[i] == Label::accessibility ? 1 : 0);
  }
  out.features = std::move(features);
  return out;
}

CompactRow to_columns(const SparseVector& vector, std::span<const std::uint32_t> features) {
  CompactRow row;
  row.reserve(vector.nnz());
  auto it = features.begin();
  for (const auto& e : vector.entries()) {
    // both sequences are sorted, so the search resumes where it left off
    it = std::lower_bound(it, features.end(), e.index);
    if (it == features.end()) break;
    if (*it == e.index) {
      row.push_back({static_cast<std::uint32_t>(it - features.begin()), e.value});
    }
  }
  return row;
}

double row_value(const CompactRow& row, std::uint32_t column) {
  const auto it = std::lower_bound(row.begin(), row.end(), column,
                                   [](const CompactEntry& e, std::uint32_t c) { return e.column < c; });
  return it != row.end() && it->column == column ? it->value : 0.0;
}

double tree_output(const Tree& tree, const CompactRow& row) {
  std::int32_t node = 0;
  while (tree.feature[node] >= 0) {
    const double x = row_value(row, static_cast<std::uint32_t>(tree.feature[node]));
    node = x <= tree.threshold[node] ? tree.left[node] : tree.right[node];
  }
  return tree.value[node];
}

}  // namespace detail

std::size_t Tree::leaves() const {
  return static_cast<std::size_t>(std::count_if(feature.begin(), feature.end(), [](auto f) { return f < 0; }));
}

TrainedModel::TrainedModel(LearnerSpec spec, std::uint32_t dimension,
                           std::vector<std::uint32_t> features, ModelParameters parameters,
                           double threshold)
    : spec_(std::move(spec)),
      dimension_(dimension),
      features_(std::move(features)),
      parameters_(std::move(parameters)),
      threshold_(threshold) {
  if (!(threshold_ > 0.0 && threshold_ < 1.0)) {
    throw LearnerError("decision threshold must lie in (0, 1)");
  }
  if (dimension_ == 0) throw LearnerError("model dimension must be positive");
  if (!std::is_sorted(features_.begin(), features_.end()) ||
      std::adjacent_find(features_.begin(), features_.end()) != features_.end()) {
    throw LearnerError("model feature columns must be strictly increasing");
  }
  if (!features_.empty() && features_.back() >= dimension_) {
    throw LearnerError("model feature index exceeds dimension");
  }
  const auto columns = features_.size();
  const auto check_tree = [&](const Tree& t) {
    const auto n = t.feature.size();
    if (n == 0 || t.threshold.size() != n || t.left.size() != n || t.right.size() != n ||
        t.value.size() != n) {
      throw LearnerError("malformed tree");
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (t.feature[i] < 0) continue;
      if (static_cast<std::size_t>(t.feature[i]) >= columns || t.left[i] <= static_cast<std::int32_t>(i) ||
          t.right[i] <= static_cast<std::int32_t>(i) || static_cast<std::size_t>(t.left[i]) >= n ||
          static_cast<std::size_t>(t.right[i]) >= n) {
        throw LearnerError("malformed tree node");
      }
    }
  };
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, LinearParams>) {
          if (p.weights.size() != columns) throw LearnerError("weight vector shape mismatch");
        } else if constexpr (std::is_same_v<T, ForestParams>) {
          if (p.trees.empty()) throw LearnerError("forest has no trees");
          for (const auto& t : p.trees) check_tree(t);
        } else if constexpr (std::is_same_v<T, BoostedParams>) {
          for (const auto& t : p.trees) check_tree(t);
          if (p.importance.size() != columns) throw LearnerError("importance shape mismatch");
        } else {
          if (p.hidden == 0 || p.hidden_weights.size() != columns * p.hidden ||
              p.hidden_bias.size() != p.hidden || p.output_weights.size() != p.hidden) {
            throw LearnerError("network shape mismatch");
          }
        }
      },
      parameters_);
}

TrainedModel TrainedModel::with_threshold(double threshold) const {
  TrainedModel copy(spec_, dimension_, features_, parameters_, threshold);
  copy.featurizer_ = featurizer_;
  return copy;
}

TrainedModel TrainedModel::with_featurizer(ModelFeaturizer featurizer) const {
  if (featurizer.config.dimension() != dimension_) {
    throw LearnerError("featurizer dimension does not match model dimension");
  }
  TrainedModel copy = *this;
  copy.featurizer_ = std::move(featurizer);
  return copy;
}

double TrainedModel::decision_value(const SparseVector& vector) const {
  if (vector.dimension() != dimension_) {
    throw LearnerError("vector dimension " + std::to_string(vector.dimension()) +
                       " does not match model dimension " + std::to_string(dimension_));
  }
  const auto row = detail::to_columns(vector, features_);
  return std::visit(
      [&](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, LinearParams>) {
          return detail::dot(row, p.weights) + p.bias;
        } else if constexpr (std::is_same_v<T, ForestParams>) {
          std::size_t votes = 0;
          for (const auto& t : p.trees) votes += detail::tree_output(t, row) >= 0.5 ? 1 : 0;
          return static_cast<double>(votes) / static_cast<double>(p.trees.size());
        } else if constexpr (std::is_same_v<T, BoostedParams>) {
          double f = p.base_score;
          for (const auto& t : p.trees) f += detail::tree_output(t, row);
          return f;
        } else {
          return detail::network_output(p, row);
        }
      },
      parameters_);
}

double predict_score(const TrainedModel& model, const SparseVector& vector) {
  const double v = model.decision_value(vector);
  if (std::holds_alternative<ForestParams>(model.parameters())) return v;
  return detail::sigmoid(v);
}

Label predict_label(const TrainedModel& model, const SparseVector& vector) {
  return predict_score(model, vector) >= model.threshold() ? Label::accessibility : Label::other;
}

TrainedModel fit(const LearnerSpec& spec, const DesignMatrix& data) {
  spec.validate();
  const auto compacted = detail::compact(data);
  ModelParameters params = [&]() -> ModelParameters {
    switch (spec.algorithm) {
      case Algorithm::logreg: return detail::train_logreg(compacted, spec);
      case Algorithm::decision_forest: return detail::train_forest(compacted, spec);
      case Algorithm::boosted_trees: return detail::train_boosted(compacted, spec);
      case Algorithm::neural_net: return detail::train_network(compacted, spec);
      case Algorithm::linear_svm: return detail::train_svm(compacted, spec);
      case Algorithm::avg_perceptron: return detail::train_avg_perceptron(compacted, spec);
      case Algorithm::bayes_point: return detail::train_bayes_point(compacted, spec);
    }
    throw LearnerError("unknown algorithm");
  }();
  return TrainedModel(spec, data.dimension, compacted.features, std::move(params));
}

}  // namespace a11yrev
