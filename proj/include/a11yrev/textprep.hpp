#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace a11yrev {

/// Ordered lowercase tokens; no token is empty or contains whitespace.
using TokenStream = std::vector<std::string>;

/// Set of lowercase stop words.
///
/// A token counts as a stop word when either the token itself or its lemma is
/// listed. Checking the lemma keeps "others" out of the output when "other"
/// is listed, so no lemmatized output token can ever match the list.
class StopList {
 public:
  StopList() = default;
  /// Entries are lowercased and blank entries dropped.
  explicit StopList(const std::vector<std::string>& words);

  /// The shipped English list (136 words). Negations and intensifiers such as
  /// "not" and "too" are not on it.
  static const StopList& english();
  /// One word per line; '#' starts a comment.
  static StopList from_file(const std::filesystem::path& path);

  bool contains(std::string_view token) const;
  bool is_stop(std::string_view token) const;
  std::size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }
  /// Sorted entries.
  std::vector<std::string> words() const;

 private:
  std::unordered_set<std::string> words_;
};

/// Lowercases, drops URLs and e-mail addresses, removes apostrophes inside
/// words and replaces every other non-letter (digits, punctuation, non-ASCII)
/// with a space. Output has single spaces and no leading/trailing space.
std::string normalize(std::string_view text);

/// Whitespace split.
TokenStream tokenize(std::string_view text);

TokenStream remove_stopwords(const TokenStream& tokens, const StopList& stops);

/// Canonical form of a single lowercase token.
///
/// Rules, applied until the token stops changing:
///   exception table           children -> child, using -> use, news -> news, ...
///   -ies  (len > 4)           batteries -> battery
///   -sses / -xes / -ches /
///   -shes / -zzes             glasses -> glass, boxes -> box
///   -s    (len > 3, not -ss/-us/-is)  fonts -> font
///   -ing  (stem >= 3 letters with a vowel)   reading -> read
///   -ed   (stem >= 3 letters with a vowel, not -eed)  loaded -> load
///   -ily -> -y, -ly  (stem >= 4)  easily -> easy, totally -> total
/// Stem repair after -ing/-ed: a doubled final consonant other than l/s/z/f is
/// undoubled (stopped -> stop); an "e" is restored after short CVC stems
/// (making -> make) and after the endings v, c, iz, yz, uir, os, ais, aus,
/// ns, consonant+l, "at"/"ur" on stems of 5+ letters (updating -> update).
std::string lemmatize_token(std::string_view token);

TokenStream lemmatize(const TokenStream& tokens);

/// normalize -> tokenize -> remove_stopwords -> lemmatize.
TokenStream preprocess(std::string_view text, const StopList& stops);

}  // namespace a11yrev
