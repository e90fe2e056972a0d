#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "a11yrev/corpus.hpp"
#include "a11yrev/metrics.hpp"
#include "a11yrev/textprep.hpp"

namespace a11yrev {

/// Ordered, duplicate-free keyword phrases, each stored as normalized tokens.
class KeywordList {
 public:
  KeywordList() = default;
  /// Phrases are normalized; blank phrases and repeats are dropped.
  KeywordList(const std::vector<std::string>& phrases, std::string source);

  /// The 74 trending keywords shipped with the tool.
  static const KeywordList& trending();
  /// One phrase per line; '#' starts a comment.
  static KeywordList from_file(const std::filesystem::path& path);

  const std::vector<TokenStream>& phrases() const { return phrases_; }
  /// Phrases joined back with single spaces.
  std::vector<std::string> texts() const;
  const std::string& source() const { return source_; }
  std::size_t size() const { return phrases_.size(); }
  bool empty() const { return phrases_.empty(); }

 private:
  std::vector<TokenStream> phrases_;
  std::string source_;
};

/// True when any phrase occurs as a contiguous run of the review's normalized
/// tokens. No stop-word removal or lemmatization is applied.
bool keyword_match(const Review& review, const KeywordList& keywords);
bool keyword_match(const TokenStream& tokens, const KeywordList& keywords);

/// Throws MetricsError for an empty keyword list.
MetricsReport evaluate_keyword_baseline(const LabeledCorpus& corpus, const KeywordList& keywords);

/// Analytic metrics of a classifier that flags each review with probability
/// one half: precision is the positive rate, recall 0.5. Precision is rounded
/// to `precision_decimals` places before F1 is formed from it; pass a negative
/// value to keep exact arithmetic. Accuracy is 0.5.
MetricsReport random_baseline_metrics(std::size_t n_pos, std::size_t n_total,
                                      int precision_decimals = 3);

}  // namespace a11yrev
