#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "a11yrev/corpus.hpp"
#include "a11yrev/featurize.hpp"
#include "a11yrev/learners.hpp"
#include "a11yrev/metrics.hpp"

namespace a11yrev {

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Called once per fold with the matrix the fold's selector and model are fit on.
using FoldObserver = std::function<void(std::size_t fold, const DesignMatrix& training)>;

struct CrossValidationOptions {
  std::size_t k = 10;
  /// Seeds the fold assignment; the learner seed lives in the spec.
  std::uint64_t seed = 0;
  /// Folds evaluated concurrently; 0 means one per hardware thread.
  std::size_t threads = 0;
  FoldObserver observer;
};

struct CrossValidationResult {
  MetricsReport mean;
  std::vector<MetricsReport> folds;
};

/// k-fold stratified CV. Per fold, the MI selector (select_k > 0) and the
/// model see only training rows. `hashed` is the unselected design matrix.
CrossValidationResult cross_validate(const DesignMatrix& hashed, const LearnerSpec& spec,
                                     std::size_t select_k, const CrossValidationOptions& options);
CrossValidationResult cross_validate(const LabeledCorpus& corpus, const LearnerSpec& spec,
                                     const Featurizer& featurizer,
                                     const CrossValidationOptions& options);

struct CurvePoint {
  std::size_t size = 0;
  MetricsReport metrics;
};

struct CurveOptions {
  std::size_t step = 100;
  CrossValidationOptions cv;
};

/// Nested class-balanced subsamples of sizes step, 2*step, ... and finally
/// |corpus|, each scored by k-fold CV. Needs |corpus| >= 2*step.
std::vector<CurvePoint> learning_curve(const LabeledCorpus& corpus, const LearnerSpec& spec,
                                       const Featurizer& featurizer, const CurveOptions& options);

/// Sizes visited by learning_curve for a corpus of n reviews.
std::vector<std::size_t> curve_sizes(std::size_t n, std::size_t step);

/// Candidate values per hyperparameter, expanded as an ordered cartesian
/// product (the last listed parameter varies fastest).
struct GridSpec {
  std::vector<std::pair<std::string, std::vector<double>>> parameters;
};

struct GridCell {
  LearnerSpec spec;
  std::optional<CrossValidationResult> result;
  std::string error;
};

struct GridResult {
  std::vector<GridCell> cells;
  std::size_t best = 0;
  const LearnerSpec& best_spec() const { return cells[best].spec; }
};

std::vector<LearnerSpec> expand_grid(const LearnerSpec& base, const GridSpec& grid);

/// Every cell is cross-validated; a cell that fails records its error. The
/// winner has the highest mean F1, the earliest cell winning ties. Throws
/// EvalError when the grid is empty or every cell fails.
GridResult grid_search(const LabeledCorpus& corpus, const LearnerSpec& base, const GridSpec& grid,
                       const Featurizer& featurizer, const CrossValidationOptions& options);

struct InfluentialFeature {
  std::uint32_t bucket = 0;
  double score = 0.0;
  /// Grams hashed into the bucket, most frequent first, with counts.
  std::vector<std::pair<std::string, std::size_t>> grams;
};

struct FeatureReport {
  /// "importance" (boosted-tree split gain) or "mutual_information".
  std::string source;
  /// True when the model had no importances and MI ranking was used instead.
  bool fallback = false;
  std::vector<InfluentialFeature> features;
};

/// Top-n buckets with the grams behind them. `selector` may be null, in which
/// case an MI fallback fits one on the corpus.
FeatureReport report_influential_features(const LabeledCorpus& corpus, const TrainedModel& model,
                                          const Featurizer& featurizer,
                                          const SelectorModel* selector, std::size_t top_n);

/// Fits selector and model on the whole corpus; the model carries its featurizer.
struct TrainedPipeline {
  TrainedModel model;
  std::optional<SelectorModel> selector;
};
TrainedPipeline train_pipeline(const LabeledCorpus& corpus, const LearnerSpec& spec,
                               const Featurizer& featurizer);

inline constexpr int kReportFormatVersion = 1;

nlohmann::ordered_json to_json(const MetricsReport& report);
nlohmann::ordered_json to_json(const CrossValidationResult& result);
nlohmann::ordered_json to_json(const ImprovementRatios& ratios);
nlohmann::ordered_json to_json(const LearnerSpec& spec);
nlohmann::ordered_json to_json(const FeatureReport& report);
MetricsReport metrics_from_json(const nlohmann::json& j);

/// Versioned JSON report. Sections keep insertion order; timings are kept
/// apart so deterministic output can omit them.
class ReportDocument {
 public:
  explicit ReportDocument(std::string kind);
  void set(const std::string& section, nlohmann::ordered_json value);
  const nlohmann::ordered_json& body() const { return body_; }
  void add_timing(const std::string& name, double seconds);
  std::string dump(bool include_timings = true) const;

 private:
  nlohmann::ordered_json body_;
  nlohmann::ordered_json timings_ = nlohmann::ordered_json::object();
};

/// Wall-clock seconds since construction.
class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace a11yrev
