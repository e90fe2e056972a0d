#include "a11yrev/eval.hpp"

namespace a11yrev {

using ojson = nlohmann::ordered_json;

ojson to_json(const MetricsReport& r) {
  ojson j;
  j["precision"] = r.precision;
  j["recall"] = r.recall;
  j["accuracy"] = r.accuracy;
  j["f1"] = r.f1;
  j["counts"] = ojson{{"tp", r.counts.tp}, {"tn", r.counts.tn}, {"fp", r.counts.fp}, {"fn", r.counts.fn}};
  ojson undefined = ojson::array();
  if (r.precision_undefined) undefined.push_back("precision");
  if (r.recall_undefined) undefined.push_back("recall");
  if (r.f1_undefined) undefined.push_back("f1");
  j["undefined"] = std::move(undefined);
  return j;
}

MetricsReport metrics_from_json(const nlohmann::json& j) {
  MetricsReport r;
  r.precision = j.at("precision").get<double>();
  r.recall = j.at("recall").get<double>();
  r.accuracy = j.at("accuracy").get<double>();
  r.f1 = j.at("f1").get<double>();
  if (j.contains("counts")) {
    const auto& c = j.at("counts");
    r.counts = {c.at("tp").get<std::size_t>(), c.at("tn").get<std::size_t>(),
                c.at("fp").get<std::size_t>(), c.at("fn").get<std::size_t>()};
  }
  if (j.contains("undefined")) {
    for (const auto& u : j.at("undefined")) {
      const auto name = u.get<std::string>();
      r.precision_undefined |= name == "precision";
      r.recall_undefined |= name == "recall";
      r.f1_undefined |= name == "f1";
    }
  }
  return r;
}

ojson to_json(const CrossValidationResult& result) {
  ojson folds = ojson::array();
  for (const auto& f : result.folds) folds.push_back(to_json(f));
  return ojson{{"mean", to_json(result.mean)}, {"folds", std::move(folds)}};
}

ojson to_json(const ImprovementRatios& ratios) {
  const auto value = [](const std::optional<double>& v) -> ojson {
    return v ? ojson(*v) : ojson(nullptr);
  };
  return ojson{{"precision", value(ratios.precision)},
               {"recall", value(ratios.recall)},
               {"accuracy", value(ratios.accuracy)},
               {"f1", value(ratios.f1)}};
}

ojson to_json(const LearnerSpec& spec) {
  ojson hp = ojson::object();
  for (const auto& [name, value] : spec.hyperparameters) hp[name] = value;
  return ojson{{"algorithm", std::string(to_string(spec.algorithm))},
               {"seed", spec.seed},
               {"hyperparameters", std::move(hp)}};
}

ojson to_json(const FeatureReport& report) {
  ojson features = ojson::array();
  for (const auto& f : report.features) {
    ojson grams = ojson::array();
    for (const auto& [gram, count] : f.grams) grams.push_back(ojson{{"gram", gram}, {"count", count}});
    features.push_back(ojson{{"bucket", f.bucket}, {"score", f.score}, {"grams", std::move(grams)}});
  }
  return ojson{{"source", report.source},
               {"fallback", report.fallback},
               {"features", std::move(features)}};
}

ReportDocument::ReportDocument(std::string kind) {
  body_["format_version"] = kReportFormatVersion;
  body_["kind"] = std::move(kind);
}

void ReportDocument::set(const std::string& section, ojson value) {
  body_[section] = std::move(value);
}

void ReportDocument::add_timing(const std::string& name, double seconds) {
  timings_[name] = seconds;
}

std::string ReportDocument::dump(bool include_timings) const {
  ojson doc = body_;
  if (include_timings) doc["timings"] = timings_;
  return doc.dump(2) + "\n";
}

}  // namespace a11yrev
