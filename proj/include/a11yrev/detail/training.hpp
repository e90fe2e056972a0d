#pragma once

// Training internals shared by the learners and exercised directly by tests
// (gradient checks, boosting loss traces).

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "a11yrev/learners.hpp"

namespace a11yrev::detail {

struct CompactEntry {
  std::uint32_t column = 0;
  double value = 0.0;
};

using CompactRow = std::vector<CompactEntry>;

/// Training rows re-indexed onto the dense range [0, columns) of features that
/// occur in the data. labels are 0/1.
struct CompactData {
  std::vector<std::uint32_t> features;  // column -> hashed index
  std::vector<CompactRow> rows;
  std::vector<int> labels;

  std::size_t columns() const { return features.size(); }
  std::size_t size() const { return rows.size(); }
};

/// Validates the matrix (non-empty, both classes, finite values) and compacts it.
CompactData compact(const DesignMatrix& data);

/// Maps a hashed vector onto model columns; unknown indices are dropped.
CompactRow to_columns(const SparseVector& vector, std::span<const std::uint32_t> features);

/// Value of `column` in a row sorted by column (0 when absent).
double row_value(const CompactRow& row, std::uint32_t column);

inline double sigmoid(double m) {
  if (m >= 0) return 1.0 / (1.0 + std::exp(-m));
  const double e = std::exp(m);
  return e / (1.0 + e);
}

/// log(1 + exp(x)) without overflow.
inline double softplus(double x) {
  return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

inline double dot(const CompactRow& row, std::span<const double> w) {
  double s = 0.0;
  for (const auto& e : row) s += e.value * w[e.column];
  return s;
}

/// Smooth part of the logistic-regression objective:
///   sum_i softplus(-y_i (w.x_i + b)) + l2/2 ||w||^2,   y_i in {-1, +1}.
/// `params` holds the weights followed by the bias. Writes the gradient when
/// `gradient` is non-null.
double logistic_objective(const CompactData& data, std::span<const double> params, double l2,
                          std::vector<double>* gradient);

/// Cross-entropy of the one-hidden-layer network on a single row; accumulates
/// the gradient into `gradient` (same shapes as `net`) when non-null.
double network_loss(const NetworkParams& net, const CompactRow& row, int label,
                    NetworkParams* gradient);

double network_output(const NetworkParams& net, const CompactRow& row);

/// Result of OWL-QN minimization.
struct LogregTrace {
  int iterations = 0;
  double objective = 0.0;
};

LinearParams train_logreg(const CompactData& data, const LearnerSpec& spec,
                          LogregTrace* trace = nullptr);
ForestParams train_forest(const CompactData& data, const LearnerSpec& spec);
/// `stage_loss` receives the mean training log-loss before the first tree and
/// after every stage.
BoostedParams train_boosted(const CompactData& data, const LearnerSpec& spec,
                            std::vector<double>* stage_loss = nullptr);
NetworkParams train_network(const CompactData& data, const LearnerSpec& spec);
LinearParams train_svm(const CompactData& data, const LearnerSpec& spec);

struct PerceptronTrace {
  int epochs = 0;
  std::size_t last_epoch_errors = 0;
};

LinearParams train_avg_perceptron(const CompactData& data, const LearnerSpec& spec,
                                  PerceptronTrace* trace = nullptr);
LinearParams train_bayes_point(const CompactData& data, const LearnerSpec& spec);

double tree_output(const Tree& tree, const CompactRow& row);

}  // namespace a11yrev::detail
