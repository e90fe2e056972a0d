#include <algorithm>

#include "a11yrev/eval.hpp"

namespace a11yrev {

FeatureReport report_influential_features(const LabeledCorpus& corpus, const TrainedModel& model,
                                          const Featurizer& featurizer,
                                          const SelectorModel* selector, std::size_t top_n) {
  if (corpus.empty()) throw EvalError("cannot report features of an empty corpus");
  if (model.dimension() != featurizer.config().dimension()) {
    throw EvalError("model dimension does not match the featurizer");
  }

  std::vector<RankedFeature> ranked;
  FeatureReport report;
  if (const auto* boosted = std::get_if<BoostedParams>(&model.parameters())) {
    report.source = "importance";
    for (std::size_t c = 0; c < boosted->importance.size(); ++c) {
      if (boosted->importance[c] > 0) ranked.push_back({model.features()[c], boosted->importance[c]});
    }
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      return a.score > b.score || (a.score == b.score && a.index < b.index);
    });
  } else {
    report.source = "mutual_information";
    report.fallback = true;
    std::optional<SelectorModel> fitted;
    if (!selector) {
      fitted = fit_mi_selector(build_design_matrix(corpus, featurizer), top_n == 0 ? 1 : top_n);
      selector = &*fitted;
    }
    ranked = selector->ranking();
  }

  const auto index = build_gram_index(corpus, featurizer);
  for (const auto& f : ranked) {
    if (report.features.size() >= top_n) break;
    report.features.push_back({f.index, f.score, index.grams(f.index)});
  }
  return report;
}

}  // namespace a11yrev
