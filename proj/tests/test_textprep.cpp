#include <doctest.h>

#include <cctype>
#include <random>

#include "a11yrev/textprep.hpp"
#include "support.hpp"

using namespace a11yrev;

TEST_CASE("normalize") {
  CHECK(normalize("Accessibility ROCKS! See http://x.co") == "accessibility rocks see");
  CHECK(normalize("") == "");
  CHECK(normalize("Deaf") == normalize("deaf"));
  CHECK(normalize("deaf") == "deaf");
  CHECK(normalize("mail me@example.com or www.site.org now") == "mail or now");
  CHECK(normalize("can't   read 2 labels...") == "cant read labels");
  CHECK(normalize("it\xE2\x80\x99s fine") == "its fine");
  CHECK(normalize("text-to-speech") == "text to speech");
  CHECK(normalize("  caf\xC3\xA9  ") == "caf");
}

TEST_CASE("tokenize") {
  CHECK(tokenize("hard to see") == TokenStream{"hard", "to", "see"});
  CHECK(tokenize("").empty());
  CHECK(tokenize("font  size") == TokenStream{"font", "size"});
}

TEST_CASE("remove_stopwords") {
  const TokenStream in{"the", "font", "is", "small"};
  CHECK(remove_stopwords(in, StopList::english()) == TokenStream{"font", "small"});
  CHECK(remove_stopwords({}, StopList::english()).empty());
  CHECK(remove_stopwords(in, StopList()) == in);
}

TEST_CASE("default stop list keeps negations and the shipped file agrees") {
  const auto& stops = StopList::english();
  for (const char* w : {"is", "am", "are", "if", "for", "the"}) CHECK(stops.contains(w));
  for (const char* w : {"not", "cannot", "too", "see", "hard"}) CHECK_FALSE(stops.contains(w));
  const auto file = StopList::from_file(std::string(A11YREV_DATA_DIR) + "/stopwords.txt");
  CHECK(file.words() == stops.words());
}

TEST_CASE("stop list file format") {
  test::TempDir dir("stops");
  test::write_text(dir / "s.txt", "# comment\nThe\n\n  And  # trailing\n");
  const auto s = StopList::from_file(dir / "s.txt");
  CHECK(s.size() == 2);
  CHECK(s.contains("the"));
  CHECK(s.contains("and"));
}

TEST_CASE("lemmatize") {
  CHECK(lemmatize({"fonts"}) == TokenStream{"font"});
  CHECK(lemmatize({"font"}) == TokenStream{"font"});
  CHECK(lemmatize({"flickering"}) == TokenStream{"flicker"});
  CHECK(lemmatize_token("batteries") == "battery");
  CHECK(lemmatize_token("glasses") == "glass");
  CHECK(lemmatize_token("boxes") == "box");
  CHECK(lemmatize_token("reading") == "read");
  CHECK(lemmatize_token("loaded") == "load");
  CHECK(lemmatize_token("stopped") == "stop");
  CHECK(lemmatize_token("making") == "make");
  CHECK(lemmatize_token("updating") == "update");
  CHECK(lemmatize_token("easily") == "easy");
  CHECK(lemmatize_token("children") == "child");
  CHECK(lemmatize_token("news") == "news");
  CHECK(lemmatize_token("bus") == "bus");
  CHECK(lemmatize_token("need") == "need");
  CHECK(lemmatize_token("impaired") == "impair");
  CHECK(lemmatize_token("sing") == "sing");
}

TEST_CASE("preprocess") {
  CHECK(preprocess("The fonts are too SMALL!!", StopList::english()) == TokenStream{"font", "too", "small"});
  CHECK(preprocess("", StopList::english()).empty());
}

namespace {

std::string random_text(std::mt19937_64& rng) {
  static const std::vector<std::string> pieces = {
      "The",    "fonts",  "are",     "TOO",  "small", "can't",  "read",     "it!!",
      "Zoom",   "works",  "easily",  "http://a.b/c", "x@y.z", "42",     "blind",   "users",
      "flickering", "screens", "caf\xC3\xA9", "don\xE2\x80\x99t", "others", "ones", "--", "ing",
      "seizures", "boxes", "lying",  "updated", "readers", "isn't", "a", "\t\n"};
  std::string s;
  const auto n = rng() % 15;
  for (std::size_t i = 0; i < n; ++i) s += pieces[rng() % pieces.size()] + (rng() % 4 ? " " : "");
  return s;
}

std::string join(const TokenStream& t) {
  std::string s;
  for (const auto& x : t) s += (s.empty() ? "" : " ") + x;
  return s;
}

}  // namespace

TEST_CASE("preprocess properties on random text") {
  std::mt19937_64 rng(11);
  const auto& stops = StopList::english();
  for (int i = 0; i < 2000; ++i) {
    const auto text = random_text(rng);
    const auto tokens = preprocess(text, stops);
    CHECK(tokens == lemmatize(remove_stopwords(tokenize(normalize(text)), stops)));
    CHECK(preprocess(join(tokens), stops) == tokens);
    for (const auto& t : tokens) {
      CHECK_FALSE(t.empty());
      CHECK_FALSE(stops.contains(t));
      for (unsigned char c : t) CHECK((c >= 'a' && c <= 'z'));
    }
  }
}

TEST_CASE("lemmatize_token is idempotent") {
  std::mt19937_64 rng(5);
  const std::string letters = "abcdefghijklmnopqrstuvwxyz";
  const std::vector<std::string> suffixes = {"", "s", "es", "ies", "ing", "ed", "ly", "ily", "sses", "ches"};
  for (int i = 0; i < 5000; ++i) {
    std::string w;
    const auto len = 1 + rng() % 7;
    for (std::size_t j = 0; j < len; ++j) w += letters[rng() % letters.size()];
    w += suffixes[rng() % suffixes.size()];
    const auto once = lemmatize_token(w);
    CHECK_FALSE(once.empty());
    CHECK(lemmatize_token(once) == once);
  }
}
