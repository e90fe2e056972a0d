#include "a11yrev/synthetic.hpp"

#include <cctype>
#include <cstdio>
#include <span>

#include "a11yrev/random.hpp"

namespace a11yrev {

namespace {

const std::vector<std::string> kCategories = {"Tools", "Education", "Games", "Productivity",
                                              "Social", "Books", "Health"};

std::string pick(Rng& rng, const std::vector<std::string>& words) {
  return words[rng.below(words.size())];
}

}  // namespace

const std::vector<std::string>& synthetic_vocabulary(Label label) {
  static const std::vector<std::string> positive = {
      "blind",        "screen reader",    "talkback",        "font size",   "contrast",
      "magnifier",    "caption",          "subtitle",        "colorblind",  "visually impaired",
      "voice command", "large text",      "braille",         "deaf",        "legible",
      "readable",     "text to speech",   "hard to see",     "zoom",        "accessibility"};
  static const std::vector<std::string> negative = {
      "crash",        "login",            "payment",         "subscription", "advert",
      "battery",      "refund",           "password",        "download",     "sync",
      "notification", "price",            "premium",         "server",       "lag",
      "level",        "score",            "graphics",        "purchase",     "account"};
  return label == Label::accessibility ? positive : negative;
}

const std::vector<std::string>& synthetic_filler() {
  static const std::vector<std::string> filler = {
      "app",   "great", "love",    "use",   "time", "really", "good",    "bad",
      "phone", "work",  "need",    "like",  "nice", "please", "fix",     "day",
      "version", "want", "awesome", "easy", "cool", "update",  "feature", "try"};
  return filler;
}

LabeledCorpus generate_synthetic_corpus(const SyntheticOptions& options) {
  Rng rng(options.seed);
  const auto& filler = synthetic_filler();
  std::vector<Review> reviews;
  reviews.reserve(2 * options.per_class);
  for (std::size_t i = 0; i < 2 * options.per_class; ++i) {
    const Label label = i % 2 == 0 ? Label::accessibility : Label::other;
    const Label opposite = label == Label::accessibility ? Label::other : Label::accessibility;
    std::vector<std::string> words;
    for (std::size_t t = 0; t < options.theme_words; ++t) {
      const bool swap = rng.uniform() < options.noise;
      words.push_back(pick(rng, synthetic_vocabulary(swap ? opposite : label)));
    }
    for (std::size_t t = 0; t < options.filler_words; ++t) words.push_back(pick(rng, filler));
    rng.shuffle(std::span(words));

    std::string text;
    for (const auto& w : words) {
      if (!text.empty()) text += ' ';
      text += w;
    }
    text[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
    text += '.';

    char id[32];
    std::snprintf(id, sizeof id, "syn-%04zu", i + 1);
    Review r;
    r.id = id;
    r.app_name = "App " + std::to_string(rng.below(40) + 1);
    r.app_category = pick(rng, kCategories);
    r.text = std::move(text);
    r.label = label;
    reviews.push_back(std::move(r));
  }
  return LabeledCorpus(std::move(reviews));
}

}  // namespace a11yrev
