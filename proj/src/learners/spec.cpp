#include <algorithm>
#include <cmath>

#include "a11yrev/learners.hpp"

namespace a11yrev {

namespace {

struct Range {
  double lo;
  double hi;
  bool integer;
  bool lo_open = false;
};

// Accepted ranges; lo_open excludes the lower bound.
const std::map<std::string, Range, std::less<>>& ranges(Algorithm a) {
  static const std::map<Algorithm, std::map<std::string, Range, std::less<>>> table = {
      {Algorithm::logreg,
       {{"optimiz_tol", {0.0, 1.0, false, true}},
        {"L1_weight", {0.0, 1e6, false}},
        {"L2_weight", {0.0, 1e6, false}},
        {"memory_L_BFGS", {1, 1000, true}},
        {"max_iter", {1, 1e6, true}}}},
      {Algorithm::decision_forest,
       {{"n_estimators", {1, 10000, true}},
        {"max_depth", {1, 1000, true}},
        {"n_random_splits", {1, 1e6, true}},
        {"min_samples_leaf", {1, 1e6, true}}}},
      {Algorithm::boosted_trees,
       {{"n_tree", {1, 100000, true}},
        {"max_n_leaf", {2, 1e6, true}},
        {"min_samples_leaf", {1, 1e6, true}},
        {"learning_rate", {0.0, 10.0, false, true}}}},
      {Algorithm::neural_net,
       {{"n_nodes", {1, 100000, true}},
        {"learning_rate", {0.0, 100.0, false, true}},
        {"n_learning_rate", {1, 100000, true}},
        {"learning_rate_weights", {0.0, 100.0, false}},
        {"momentum", {0.0, 0.999, false}}}},
      {Algorithm::linear_svm, {{"n_iter", {1, 100000, true}}, {"Lambda", {0.0, 1e6, false, true}}}},
      {Algorithm::avg_perceptron,
       {{"learning_rate", {0.0, 1e6, false, true}}, {"m_iter", {1, 1e6, true}}}},
      {Algorithm::bayes_point,
       {{"n_training_iter", {1, 100000, true}}, {"sample_epochs", {1, 1e6, true}}}},
  };
  return table.at(a);
}

}  // namespace

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::logreg: return "logreg";
    case Algorithm::decision_forest: return "decision_forest";
    case Algorithm::boosted_trees: return "boosted_trees";
    case Algorithm::neural_net: return "neural_net";
    case Algorithm::linear_svm: return "linear_svm";
    case Algorithm::avg_perceptron: return "avg_perceptron";
    case Algorithm::bayes_point: return "bayes_point";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  for (auto a : all_algorithms()) {
    if (to_string(a) == name) return a;
  }
  throw LearnerError("unknown algorithm '" + std::string(name) + "'");
}

const std::vector<Algorithm>& all_algorithms() {
  static const std::vector<Algorithm> all = {
      Algorithm::logreg,     Algorithm::decision_forest, Algorithm::boosted_trees,
      Algorithm::neural_net, Algorithm::linear_svm,      Algorithm::avg_perceptron,
      Algorithm::bayes_point};
  return all;
}

bool is_linear(Algorithm algorithm) {
  return algorithm == Algorithm::logreg || algorithm == Algorithm::linear_svm ||
         algorithm == Algorithm::avg_perceptron || algorithm == Algorithm::bayes_point;
}

Hyperparameters default_hyperparameters(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::logreg:
      return {{"optimiz_tol", 1e-7}, {"L1_weight", 1.0}, {"L2_weight", 1.0},
              {"memory_L_BFGS", 20}, {"max_iter", 1000}};
    case Algorithm::decision_forest:
      return {{"n_estimators", 8}, {"max_depth", 32}, {"n_random_splits", 128},
              {"min_samples_leaf", 1}};
    case Algorithm::boosted_trees:
      return {{"n_tree", 100}, {"max_n_leaf", 20}, {"min_samples_leaf", 10},
              {"learning_rate", 0.2}};
    case Algorithm::neural_net:
      return {{"n_nodes", 100}, {"learning_rate", 0.1}, {"n_learning_rate", 100},
              {"learning_rate_weights", 0.1}, {"momentum", 0.0}};
    case Algorithm::linear_svm:
      return {{"n_iter", 1}, {"Lambda", 0.001}};
    case Algorithm::avg_perceptron:
      return {{"learning_rate", 1.0}, {"m_iter", 10}};
    case Algorithm::bayes_point:
      return {{"n_training_iter", 30}, {"sample_epochs", 10}};
  }
  throw LearnerError("unknown algorithm");
}

LearnerSpec LearnerSpec::defaults(Algorithm algorithm, std::uint64_t seed) {
  return {algorithm, default_hyperparameters(algorithm), seed};
}

double LearnerSpec::get(std::string_view name) const {
  const auto it = hyperparameters.find(name);
  if (it == hyperparameters.end()) {
    throw LearnerError("hyperparameter '" + std::string(name) + "' missing for " +
                       std::string(to_string(algorithm)));
  }
  return it->second;
}

LearnerSpec LearnerSpec::with(const std::string& name, double value) const {
  if (!ranges(algorithm).contains(name)) {
    throw LearnerError("unknown hyperparameter '" + name + "' for " +
                       std::string(to_string(algorithm)));
  }
  LearnerSpec copy = *this;
  copy.hyperparameters[name] = value;
  return copy;
}

void LearnerSpec::validate() const {
  const auto& allowed = ranges(algorithm);
  for (const auto& [name, value] : hyperparameters) {
    if (!allowed.contains(name)) {
      throw LearnerError("unknown hyperparameter '" + name + "' for " +
                         std::string(to_string(algorithm)));
    }
  }
  for (const auto& [name, r] : allowed) {
    const double v = get(name);
    const bool below = r.lo_open ? v <= r.lo : v < r.lo;
    if (!std::isfinite(v) || below || v > r.hi || (r.integer && v != std::floor(v))) {
      throw LearnerError("hyperparameter " + name + "=" + std::to_string(v) + " out of range for " +
                         std::string(to_string(algorithm)));
    }
  }
}

}  // namespace a11yrev
