#include "a11yrev/baselines.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <set>
#include <string_view>

namespace a11yrev {

namespace {

constexpr std::array<std::string_view, 74> kTrending = {
    "dark mode",         "zoom",             "customization",      "font size",
    "volume",            "cannot see",       "accessibility",      "readable",
    "change font",       "hard to see",      "background color",   "light mode",
    "mute",              "contrast",         "subtitle",           "adjustable",
    "blind",             "header",           "overlap",            "pause button",
    "flicker",           "spacing",          "migraine",           "input method",
    "autoplay",          "metadata",         "too bright",         "haptic",
    "scaling",           "control key",      "voice command",      "text-to-speech",
    "eyestrain",         "strain",           "background image",   "screen reader",
    "change language",   "small widget",     "stop button",        "impaired",
    "text reflow",       "timeout",          "consistency",        "epilepsy",
    "assistance",        "colour coding",    "transcript",         "default language",
    "older device",      "visual cue",       "grouped",            "seizures",
    "select language",   "understandable",   "vibration feedback", "actionable",
    "audio cue",         "missing label",    "navigable",          "verbose",
    "captcha",           "audio description", "container",         "distinguishable",
    "input type",        "keyboard language", "page refresh",      "page title",
    "sign language",     "svg image",        "switch device",      "touch target",
    "adjust size",       "adjust colour",
};

std::string join(const TokenStream& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

bool contains_run(const TokenStream& tokens, const TokenStream& phrase) {
  if (phrase.empty() || phrase.size() > tokens.size()) return false;
  return std::search(tokens.begin(), tokens.end(), phrase.begin(), phrase.end()) != tokens.end();
}

}  // namespace

KeywordList::KeywordList(const std::vector<std::string>& phrases, std::string source)
    : source_(std::move(source)) {
  std::set<TokenStream> seen;
  for (const auto& phrase : phrases) {
    auto tokens = tokenize(normalize(phrase));
    if (tokens.empty() || !seen.insert(tokens).second) continue;
    phrases_.push_back(std::move(tokens));
  }
}

const KeywordList& KeywordList::trending() {
  static const KeywordList list = [] {
    std::vector<std::string> phrases(kTrending.begin(), kTrending.end());
    return KeywordList(phrases, "builtin:trending");
  }();
  return list;
}

KeywordList KeywordList::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CorpusError("cannot open keyword file '" + path.string() + "'");
  std::vector<std::string> phrases;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    phrases.push_back(line);
  }
  return KeywordList(phrases, path.string());
}

std::vector<std::string> KeywordList::texts() const {
  std::vector<std::string> out;
  out.reserve(phrases_.size());
  for (const auto& p : phrases_) out.push_back(join(p));
  return out;
}

bool keyword_match(const TokenStream& tokens, const KeywordList& keywords) {
  return std::any_of(keywords.phrases().begin(), keywords.phrases().end(),
                     [&](const TokenStream& phrase) { return contains_run(tokens, phrase); });
}

bool keyword_match(const Review& review, const KeywordList& keywords) {
  return keyword_match(tokenize(normalize(review.text)), keywords);
}

MetricsReport evaluate_keyword_baseline(const LabeledCorpus& corpus, const KeywordList& keywords) {
  if (keywords.empty()) throw MetricsError("keyword list is empty");
  std::vector<Label> predicted;
  std::vector<Label> actual;
  predicted.reserve(corpus.size());
  actual.reserve(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    predicted.push_back(keyword_match(corpus[i], keywords) ? Label::accessibility : Label::other);
    actual.push_back(corpus.label(i));
  }
  return compute_metrics(confusion_counts(predicted, actual));
}

MetricsReport random_baseline_metrics(std::size_t n_pos, std::size_t n_total,
                                      int precision_decimals) {
  if (n_total == 0 || n_pos == 0) throw MetricsError("random baseline needs positive counts");
  if (n_pos > n_total) throw MetricsError("positive count exceeds total");
  MetricsReport r;
  r.precision = static_cast<double>(n_pos) / static_cast<double>(n_total);
  if (precision_decimals >= 0) r.precision = round_decimals(r.precision, precision_decimals);
  r.recall = 0.5;
  r.accuracy = 0.5;
  r.f1 = f1_score(r.precision, r.recall);
  return r;
}

}  // namespace a11yrev
