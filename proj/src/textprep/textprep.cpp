#include "a11yrev/textprep.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <stdexcept>
#include <unordered_map>

namespace a11yrev {

namespace {

constexpr std::string_view kEnglishStops[] = {
    "a", "about", "above", "after", "again", "against", "all", "also", "am", "an", "and", "any",
    "are", "as", "at", "be", "because", "been", "before", "being", "below", "between", "both",
    "but", "by", "could", "d", "did", "do", "does", "doing", "down", "during", "each", "even",
    "few", "for", "from", "further", "get", "got", "had", "has", "have", "having", "he", "her",
    "here", "hers", "herself", "him", "himself", "his", "how", "i", "id", "if", "im", "in", "into",
    "is", "it", "its", "itself", "ive", "just", "ll", "m", "me", "more", "most", "my", "myself",
    "of", "off", "on", "once", "only", "or", "other", "our", "ours", "ourselves", "out", "over",
    "own", "re", "s", "same", "she", "should", "so", "some", "such", "t", "than", "that", "thats",
    "the", "their", "theirs", "them", "themselves", "then", "there", "theres", "these", "they",
    "this", "those", "through", "to", "under", "until", "up", "ve", "was", "we", "were", "what",
    "when", "where", "which", "while", "who", "whom", "why", "will", "with", "would", "you",
    "your", "youre", "yours", "yourself", "yourselves",
};

bool is_ascii_letter(unsigned char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

bool is_space(unsigned char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool looks_like_url(std::string_view chunk) {
  const auto lower = ascii_lower(chunk);
  return lower.find("://") != std::string::npos || lower.rfind("www.", 0) == 0 ||
         lower.find("(www.") != std::string::npos;
}

bool looks_like_email(std::string_view chunk) {
  const auto at = chunk.find('@');
  if (at == std::string_view::npos || at == 0) return false;
  const auto dot = chunk.find('.', at + 1);
  return dot != std::string_view::npos && dot > at + 1 && dot + 1 < chunk.size();
}

// Length in bytes of an apostrophe at position i (ASCII ' or U+2018/U+2019), 0 if none.
std::size_t apostrophe_at(std::string_view s, std::size_t i) {
  if (s[i] == '\'') return 1;
  if (i + 2 < s.size() && static_cast<unsigned char>(s[i]) == 0xE2 &&
      static_cast<unsigned char>(s[i + 1]) == 0x80 &&
      (static_cast<unsigned char>(s[i + 2]) == 0x98 || static_cast<unsigned char>(s[i + 2]) == 0x99)) {
    return 3;
  }
  return 0;
}

void append_chunk(std::string& out, std::string_view chunk) {
  for (std::size_t i = 0; i < chunk.size();) {
    const auto c = static_cast<unsigned char>(chunk[i]);
    if (is_ascii_letter(c)) {
      out.push_back(static_cast<char>(std::tolower(c)));
      ++i;
      continue;
    }
    if (const auto len = apostrophe_at(chunk, i); len > 0) {
      const bool inside = !out.empty() && is_ascii_letter(static_cast<unsigned char>(out.back())) &&
                          i + len < chunk.size() &&
                          is_ascii_letter(static_cast<unsigned char>(chunk[i + len]));
      if (!inside) out.push_back(' ');
      i += len;
      continue;
    }
    out.push_back(' ');
    ++i;
  }
}

// ---- lemmatizer -----------------------------------------------------------

const std::unordered_map<std::string_view, std::string_view>& exceptions() {
  static const std::unordered_map<std::string_view, std::string_view> table = {
      // irregular plurals
      {"children", "child"}, {"men", "man"}, {"women", "woman"}, {"feet", "foot"},
      {"teeth", "tooth"}, {"mice", "mouse"}, {"people", "people"},
      // words that only look inflected
      {"news", "news"}, {"series", "series"}, {"species", "species"}, {"always", "always"},
      {"perhaps", "perhaps"}, {"lens", "lens"}, {"canvas", "canvas"}, {"alias", "alias"},
      {"bias", "bias"}, {"chaos", "chaos"}, {"macos", "macos"}, {"thing", "thing"},
      {"something", "something"}, {"nothing", "nothing"}, {"anything", "anything"},
      {"everything", "everything"}, {"morning", "morning"}, {"evening", "evening"},
      {"during", "during"}, {"ceiling", "ceiling"}, {"string", "string"}, {"spring", "spring"},
      {"bring", "bring"}, {"sibling", "sibling"}, {"wedding", "wedding"}, {"pudding", "pudding"},
      {"embed", "embed"}, {"hundred", "hundred"}, {"naked", "naked"}, {"wicked", "wicked"},
      {"sacred", "sacred"}, {"speed", "speed"}, {"family", "family"}, {"supply", "supply"},
      {"assembly", "assembly"}, {"anomaly", "anomaly"}, {"butterfly", "butterfly"},
      {"multiply", "multiply"}, {"comply", "comply"}, {"only", "only"}, {"early", "early"},
      {"apply", "apply"}, {"reply", "reply"},
      // irregular repairs
      {"using", "use"}, {"used", "use"}, {"simply", "simple"}, {"menus", "menu"},
      {"syncing", "sync"}, {"synced", "sync"}, {"adding", "add"}, {"added", "add"},
  };
  return table;
}

bool ends_with(std::string_view w, std::string_view suffix) {
  return w.size() >= suffix.size() && w.substr(w.size() - suffix.size()) == suffix;
}

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y'; }

bool has_vowel(std::string_view w) { return std::any_of(w.begin(), w.end(), is_vowel); }

bool needs_final_e(std::string_view s) {
  const auto n = s.size();
  if (n == 3 && !is_vowel(s[0]) && is_vowel(s[1]) && !is_vowel(s[2]) && s[2] != 'w' &&
      s[2] != 'x') {
    return true;
  }
  if (ends_with(s, "v") || ends_with(s, "c") || ends_with(s, "iz") || ends_with(s, "yz") ||
      ends_with(s, "uir") || ends_with(s, "os") || ends_with(s, "ais") || ends_with(s, "aus") ||
      ends_with(s, "ns") || ends_with(s, "rg")) {
    return true;
  }
  if (n >= 2 && s[n - 1] == 'l' && !is_vowel(s[n - 2]) && s[n - 2] != 'l' && s[n - 2] != 'r' &&
      s[n - 2] != 'w') {
    return true;
  }
  return n >= 5 && (ends_with(s, "at") || ends_with(s, "ur") || ends_with(s, "ang"));
}

std::string repair_stem(std::string_view stem) {
  const auto n = stem.size();
  const char last = stem[n - 1];
  if (stem[n - 2] == last && !is_vowel(last) && last != 'l' && last != 's' && last != 'z' &&
      last != 'f') {
    return std::string(stem.substr(0, n - 1));
  }
  if (needs_final_e(stem)) return std::string(stem) + "e";
  return std::string(stem);
}

std::string lemma_step(std::string_view w) {
  if (const auto it = exceptions().find(w); it != exceptions().end()) {
    return std::string(it->second);
  }
  const auto n = w.size();
  if (n > 4 && ends_with(w, "ies")) return std::string(w.substr(0, n - 3)) + "y";
  if (ends_with(w, "sses") || ends_with(w, "zzes")) return std::string(w.substr(0, n - 2));
  if (n > 4 && (ends_with(w, "xes") || ends_with(w, "ches") || ends_with(w, "shes"))) {
    return std::string(w.substr(0, n - 2));
  }
  if (n > 3 && ends_with(w, "s") && !ends_with(w, "ss") && !ends_with(w, "us") &&
      !ends_with(w, "is")) {
    return std::string(w.substr(0, n - 1));
  }
  if (ends_with(w, "ing")) {
    const auto stem = w.substr(0, n - 3);
    if (stem.size() >= 3 && has_vowel(stem)) return repair_stem(stem);
  }
  if (ends_with(w, "ed") && !ends_with(w, "eed")) {
    const auto stem = w.substr(0, n - 2);
    if (stem.size() >= 3 && has_vowel(stem)) return repair_stem(stem);
  }
  if (ends_with(w, "ily") && n - 3 >= 3) return std::string(w.substr(0, n - 3)) + "y";
  if (ends_with(w, "ly") && n - 2 >= 4) return std::string(w.substr(0, n - 2));
  return std::string(w);
}

}  // namespace

StopList::StopList(const std::vector<std::string>& words) {
  for (const auto& w : words) {
    auto lower = ascii_lower(w);
    if (!lower.empty()) words_.insert(std::move(lower));
  }
}

const StopList& StopList::english() {
  static const StopList list = [] {
    std::vector<std::string> words(std::begin(kEnglishStops), std::end(kEnglishStops));
    return StopList(words);
  }();
  return list;
}

StopList StopList::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open stop-list file '" + path.string() + "'");
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    for (auto& tok : tokenize(line)) words.push_back(std::move(tok));
  }
  return StopList(words);
}

bool StopList::contains(std::string_view token) const {
  return words_.find(std::string(token)) != words_.end();
}

bool StopList::is_stop(std::string_view token) const {
  return contains(token) || contains(lemmatize_token(token));
}

std::vector<std::string> StopList::words() const {
  std::vector<std::string> out(words_.begin(), words_.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::string normalize(std::string_view text) {
  std::string raw;
  raw.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(static_cast<unsigned char>(text[i]))) ++i;
    const auto start = i;
    while (i < text.size() && !is_space(static_cast<unsigned char>(text[i]))) ++i;
    if (start == i) break;
    const auto chunk = text.substr(start, i - start);
    if (looks_like_url(chunk) || looks_like_email(chunk)) continue;
    append_chunk(raw, chunk);
    raw.push_back(' ');
  }
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    if (c == ' ' && (out.empty() || out.back() == ' ')) continue;
    out.push_back(c);
  }
  if (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

TokenStream tokenize(std::string_view text) {
  TokenStream tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(static_cast<unsigned char>(text[i]))) ++i;
    const auto start = i;
    while (i < text.size() && !is_space(static_cast<unsigned char>(text[i]))) ++i;
    if (i > start) tokens.emplace_back(text.substr(start, i - start));
  }
  return tokens;
}

TokenStream remove_stopwords(const TokenStream& tokens, const StopList& stops) {
  TokenStream out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (!stops.is_stop(t)) out.push_back(t);
  }
  return out;
}

std::string lemmatize_token(std::string_view token) {
  std::string current(token);
  // every rule shortens the word, so this terminates
  for (;;) {
    auto next = lemma_step(current);
    if (next == current) return current;
    current = std::move(next);
  }
}

TokenStream lemmatize(const TokenStream& tokens) {
  TokenStream out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(lemmatize_token(t));
  return out;
}

TokenStream preprocess(std::string_view text, const StopList& stops) {
  return lemmatize(remove_stopwords(tokenize(normalize(text)), stops));
}

}  // namespace a11yrev
