#include "a11yrev/metrics.hpp"

#include <cmath>
#include <string>

namespace a11yrev {

ConfusionCounts confusion_counts(std::span<const Label> predicted, std::span<const Label> actual) {
  if (predicted.size() != actual.size()) {
    throw MetricsError("length mismatch: " + std::to_string(predicted.size()) + " predictions vs " +
                       std::to_string(actual.size()) + " labels");
  }
  if (predicted.empty()) throw MetricsError("no predictions to count");
  ConfusionCounts c;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const bool p = predicted[i] == Label::accessibility;
    const bool a = actual[i] == Label::accessibility;
    if (p && a) {
      ++c.tp;
    } else if (!p && !a) {
      ++c.tn;
    } else if (p) {
      ++c.fp;
    } else {
      ++c.fn;
    }
  }
  return c;
}

double f1_score(double precision, double recall) {
  const double denom = precision + recall;
  return denom > 0.0 ? 2.0 * precision * recall / denom : 0.0;
}

MetricsReport compute_metrics(const ConfusionCounts& c) {
  if (c.total() == 0) throw MetricsError("cannot compute metrics over zero instances");
  MetricsReport m;
  m.counts = c;
  const auto tp = static_cast<double>(c.tp);
  if (c.tp + c.fp > 0) {
    m.precision = tp / static_cast<double>(c.tp + c.fp);
  } else {
    m.precision_undefined = true;
  }
  if (c.tp + c.fn > 0) {
    m.recall = tp / static_cast<double>(c.tp + c.fn);
  } else {
    m.recall_undefined = true;
  }
  m.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
  if (m.precision + m.recall > 0.0) {
    m.f1 = f1_score(m.precision, m.recall);
  } else {
    m.f1_undefined = true;
  }
  return m;
}

MetricsReport average_reports(std::span<const MetricsReport> reports) {
  if (reports.empty()) throw MetricsError("no reports to average");
  MetricsReport avg;
  for (const auto& r : reports) {
    avg.precision += r.precision;
    avg.recall += r.recall;
    avg.accuracy += r.accuracy;
    avg.f1 += r.f1;
    avg.counts += r.counts;
    avg.precision_undefined = avg.precision_undefined || r.precision_undefined;
    avg.recall_undefined = avg.recall_undefined || r.recall_undefined;
    avg.f1_undefined = avg.f1_undefined || r.f1_undefined;
  }
  const auto n = static_cast<double>(reports.size());
  avg.precision /= n;
  avg.recall /= n;
  avg.accuracy /= n;
  avg.f1 /= n;
  return avg;
}

double truncate_decimals(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  const double scaled = value * scale;
  const double guard = 1e-9 * std::max(1.0, std::abs(scaled));
  return std::trunc(scaled + (scaled >= 0 ? guard : -guard)) / scale;
}

double round_decimals(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::round(value * scale) / scale;
}

ImprovementRatios improvement_ratios(const MetricsReport& ours, const MetricsReport& baseline) {
  const auto ratio = [](double a, double b) -> std::optional<double> {
    if (b == 0.0) return std::nullopt;
    return truncate_decimals(a / b, 3);
  };
  return {ratio(ours.precision, baseline.precision), ratio(ours.recall, baseline.recall),
          ratio(ours.accuracy, baseline.accuracy), ratio(ours.f1, baseline.f1)};
}

double cohens_kappa(std::span<const Label> a, std::span<const Label> b) {
  if (a.size() != b.size()) throw MetricsError("kappa: label sequences differ in length");
  if (a.empty()) throw MetricsError("kappa: no labels");
  double table[2][2] = {};
  for (std::size_t i = 0; i < a.size(); ++i) {
    table[static_cast<int>(a[i])][static_cast<int>(b[i])] += 1.0;
  }
  const auto n = static_cast<double>(a.size());
  const double observed = (table[0][0] + table[1][1]) / n;
  const double a1 = (table[1][0] + table[1][1]) / n;
  const double b1 = (table[0][1] + table[1][1]) / n;
  const double chance = a1 * b1 + (1.0 - a1) * (1.0 - b1);
  if (chance == 1.0) {
    // only reachable when both raters give the same constant label
    return 1.0;
  }
  return (observed - chance) / (1.0 - chance);
}

}  // namespace a11yrev
