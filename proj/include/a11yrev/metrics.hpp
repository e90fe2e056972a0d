#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>

#include "a11yrev/corpus.hpp"

namespace a11yrev {

class MetricsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Positive class is Label::accessibility.
struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t tn = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + tn + fp + fn; }
  ConfusionCounts& operator+=(const ConfusionCounts& o) {
    tp += o.tp;
    tn += o.tn;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  bool operator==(const ConfusionCounts&) const = default;
};

/// Precision, recall, accuracy and F1. A ratio with a zero denominator is
/// reported as 0 and flagged undefined.
struct MetricsReport {
  double precision = 0.0;
  double recall = 0.0;
  double accuracy = 0.0;
  double f1 = 0.0;
  ConfusionCounts counts;
  bool precision_undefined = false;
  bool recall_undefined = false;
  bool f1_undefined = false;
};

ConfusionCounts confusion_counts(std::span<const Label> predicted, std::span<const Label> actual);

MetricsReport compute_metrics(const ConfusionCounts& c);

/// F1 from precision and recall; 0 when both are 0.
double f1_score(double precision, double recall);

/// Arithmetic mean of each metric; counts are summed.
MetricsReport average_reports(std::span<const MetricsReport> reports);

/// Truncates toward zero at `decimals` places, tolerating binary
/// representation error (1.832 stays 1.832 even if stored as 1.83199..).
double truncate_decimals(double value, int decimals);
double round_decimals(double value, int decimals);

/// Our metric divided by the baseline's, truncated to 3 decimals. A ratio is
/// absent when the baseline metric is 0.
struct ImprovementRatios {
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> accuracy;
  std::optional<double> f1;
};

ImprovementRatios improvement_ratios(const MetricsReport& ours, const MetricsReport& baseline);

/// Cohen's kappa for two binary labelings of the same items. When chance
/// agreement is 1 (both raters constant and equal) kappa is defined as 1.
double cohens_kappa(std::span<const Label> a, std::span<const Label> b);

}  // namespace a11yrev
