#include <doctest.h>

#include <algorithm>
#include <random>

#include "a11yrev/baselines.hpp"
#include "support.hpp"

using namespace a11yrev;
using a11yrev::test::review;

namespace {

constexpr Label P = Label::accessibility;
constexpr Label N = Label::other;

bool naive_contains(const TokenStream& tokens, const TokenStream& phrase) {
  if (phrase.size() > tokens.size()) return false;
  for (std::size_t i = 0; i + phrase.size() <= tokens.size(); ++i) {
    bool all = true;
    for (std::size_t j = 0; j < phrase.size(); ++j) all = all && tokens[i + j] == phrase[j];
    if (all) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("keyword_match on single reviews") {
  const KeywordList kw({"blind", "cannot see", "font size"}, "test");

  CHECK(keyword_match(review("a", "Cavern crawler: the bats are blind but the game is great", N), kw));
  CHECK(keyword_match(review("b", "I CANNOT see the buttons!", P), kw));
  CHECK_FALSE(keyword_match(review("c", "", N), kw));
  CHECK_FALSE(keyword_match(review("d", "It is impossible to see anything", P), kw));
  CHECK_FALSE(keyword_match(review("f", "the font is tiny and the size is odd", P), kw));
  CHECK(keyword_match(review("g", "please raise the font size", P), kw));

  const KeywordList cat({"cat"}, "test");
  CHECK_FALSE(keyword_match(review("h", "wrong category listing", N), cat));
  CHECK(keyword_match(review("i", "my cat loves it", N), cat));
}

TEST_CASE("KeywordList normalizes and deduplicates") {
  const KeywordList kw({"Dark Mode", "dark   mode", "", "   ", "Zoom"}, "x");
  CHECK(kw.size() == 2);
  CHECK(kw.texts() == std::vector<std::string>{"dark mode", "zoom"});
  CHECK(kw.source() == "x");
  CHECK(KeywordList().empty());
}

TEST_CASE("built-in trending list matches the shipped file") {
  const auto& t3 = KeywordList::trending();
  CHECK(t3.size() == 74);
  CHECK(t3.source() == "builtin:trending");
  const auto file = KeywordList::from_file(A11YREV_DATA_DIR "/keywords_trending.txt");
  CHECK(file.texts() == t3.texts());
  CHECK_THROWS_AS(KeywordList::from_file("/nonexistent/keywords.txt"), CorpusError);
}

TEST_CASE("from_file skips comments and blanks") {
  a11yrev::test::TempDir dir("kw");
  a11yrev::test::write_text(dir / "k.txt", "# header\n\nblind  # trailing\n talkback \n");
  const auto kw = KeywordList::from_file(dir / "k.txt");
  CHECK(kw.texts() == std::vector<std::string>{"blind", "talkback"});
}

TEST_CASE("keyword baseline on a hand-tallied corpus") {
  const KeywordList kw({"screen reader", "blind"}, "test");
  const LabeledCorpus corpus({
      review("1", "works with my screen reader", P),     // tp
      review("2", "I am blind and this helps", P),       // tp
      review("3", "text too small to read", P),          // fn
      review("4", "buttons have no labels", P),          // fn
      review("5", "great game, love the blind boxes", N),// fp
      review("6", "fun puzzles", N),                     // tn
      review("7", "crashes on startup", N),              // tn
      review("8", "the screen is bright, reader mode", N),// tn
      review("9", "too many ads", N),                    // tn
      review("10", "good value", N),                     // tn
  });
  const auto m = evaluate_keyword_baseline(corpus, kw);
  CHECK(m.counts == ConfusionCounts{2, 5, 1, 2});
  CHECK(m.precision == doctest::Approx(2.0 / 3.0));
  CHECK(m.recall == 0.5);
  CHECK(m.accuracy == 0.7);

  CHECK_THROWS_AS(evaluate_keyword_baseline(corpus, KeywordList()), MetricsError);

  // every review matches: recall 1, precision is the positive share
  const KeywordList everything({"a", "i", "the", "too", "fun", "crashes", "good", "buttons", "works"}, "t");
  bool all = true;
  for (const auto& r : corpus.reviews()) all = all && keyword_match(r, everything);
  REQUIRE(all);
  const auto e = evaluate_keyword_baseline(corpus, everything);
  CHECK(e.recall == 1.0);
  CHECK(e.precision == 0.4);
}

TEST_CASE("keyword matching agrees with a naive scan and is monotone") {
  const std::vector<std::string> vocab{"see", "cannot", "blind", "font", "size", "zoom", "dark", "mode",
                                       "game", "fun", "voice", "over", "read", "text"};
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Review> rows;
    for (int i = 0; i < 30; ++i) {
      std::string text;
      const int len = 1 + static_cast<int>(rng() % 12);
      for (int w = 0; w < len; ++w) text += vocab[rng() % vocab.size()] + " ";
      rows.push_back(review(std::to_string(i), text, rng() % 2 ? P : N));
    }
    const LabeledCorpus corpus(rows);

    std::vector<std::string> phrases;
    for (int k = 0; k < 3; ++k) {
      std::string ph = vocab[rng() % vocab.size()];
      if (rng() % 2) ph += " " + vocab[rng() % vocab.size()];
      phrases.push_back(ph);
    }
    const KeywordList small(phrases, "s");
    phrases.push_back(vocab[rng() % vocab.size()] + " " + vocab[rng() % vocab.size()]);
    phrases.push_back(vocab[rng() % vocab.size()]);
    const KeywordList large(phrases, "l");

    std::size_t tp = 0, fp = 0, fn = 0, tn = 0, matched_small = 0, matched_large = 0;
    for (const auto& r : corpus.reviews()) {
      const auto tokens = tokenize(normalize(r.text));
      bool hit = false;
      for (const auto& ph : small.phrases()) hit = hit || naive_contains(tokens, ph);
      CHECK(keyword_match(r, small) == hit);
      const bool hit_large = keyword_match(r, large);
      CHECK((!hit || hit_large));
      matched_small += hit;
      matched_large += hit_large;
      if (hit && *r.label == P) ++tp;
      if (hit && *r.label == N) ++fp;
      if (!hit && *r.label == P) ++fn;
      if (!hit && *r.label == N) ++tn;
    }
    CHECK(matched_small <= matched_large);
    const auto m = evaluate_keyword_baseline(corpus, small);
    CHECK(m.counts == ConfusionCounts{tp, tn, fp, fn});
    CHECK(evaluate_keyword_baseline(corpus, large).recall >= m.recall);
  }
}

TEST_CASE("random baseline") {
  const auto m = random_baseline_metrics(2663, 214053);
  CHECK(m.precision == 0.012);
  CHECK(m.recall == 0.5);
  CHECK(m.accuracy == 0.5);
  CHECK(round_decimals(m.f1, 3) == 0.023);

  for (std::size_t n : {1u, 7u, 500u}) {
    const auto half = random_baseline_metrics(n, 2 * n);
    CHECK(half.precision == 0.5);
    CHECK(half.f1 == 0.5);
  }
  const auto quarter = random_baseline_metrics(1, 4, -1);
  CHECK(quarter.precision == 0.25);
  CHECK(quarter.f1 == doctest::Approx(1.0 / 3.0));

  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    const std::size_t total = 1 + rng() % 100000;
    const std::size_t pos = 1 + rng() % total;
    const auto r = random_baseline_metrics(pos, total, -1);
    CHECK(r.recall == 0.5);
    CHECK(r.precision == static_cast<double>(pos) / static_cast<double>(total));
  }

  CHECK_THROWS_AS(random_baseline_metrics(0, 10), MetricsError);
  CHECK_THROWS_AS(random_baseline_metrics(1, 0), MetricsError);
  CHECK_THROWS_AS(random_baseline_metrics(11, 10), MetricsError);
}
