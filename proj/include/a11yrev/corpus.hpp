#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace a11yrev {

enum class Label : std::uint8_t { other = 0, accessibility = 1 };

std::string_view to_string(Label label);
/// Parses exactly "accessibility" or "other".
std::optional<Label> parse_label(std::string_view token);

class CorpusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Review {
  std::string id;
  std::string app_name;
  std::string app_category;
  std::string text;
  std::optional<Label> label;

  bool operator==(const Review&) const = default;
};

enum class CorpusFormat { csv, jsonl };

CorpusFormat parse_format(std::string_view name);
/// Guess from the file extension (.jsonl / .json -> jsonl, anything else csv).
CorpusFormat format_from_path(const std::filesystem::path& path);

/// An ordered collection of fully labeled reviews with unique ids.
/// Immutable once constructed.
class LabeledCorpus {
 public:
  LabeledCorpus() = default;
  /// Validates ids (non-empty, unique), text (non-blank) and labels (present).
  explicit LabeledCorpus(std::vector<Review> reviews);

  const std::vector<Review>& reviews() const { return reviews_; }
  std::size_t size() const { return reviews_.size(); }
  bool empty() const { return reviews_.empty(); }
  const Review& operator[](std::size_t i) const { return reviews_[i]; }

  std::size_t count(Label label) const {
    return label == Label::accessibility ? positives_ : negatives_;
  }
  Label label(std::size_t i) const { return *reviews_[i].label; }

  /// Sub-corpus in the order given by `rows`.
  LabeledCorpus subset(std::span<const std::size_t> rows) const;

  bool operator==(const LabeledCorpus& other) const { return reviews_ == other.reviews_; }

 private:
  std::vector<Review> reviews_;
  std::size_t positives_ = 0;
  std::size_t negatives_ = 0;
};

/// Reads reviews whose label may be absent (prediction input).
/// Required columns: id, text. Unknown columns are reported through `warnings`.
std::vector<Review> load_reviews(const std::filesystem::path& path, CorpusFormat format,
                                 std::vector<std::string>* warnings = nullptr);
std::vector<Review> read_reviews(std::istream& in, CorpusFormat format,
                                 std::vector<std::string>* warnings = nullptr);

/// Loads a fully labeled corpus; all five schema columns are required.
LabeledCorpus load_corpus(const std::filesystem::path& path, CorpusFormat format,
                          std::vector<std::string>* warnings = nullptr);

void write_reviews(std::ostream& out, std::span<const Review> reviews, CorpusFormat format);
void save_corpus(const LabeledCorpus& corpus, const std::filesystem::path& path,
                 CorpusFormat format);

/// Equal-size class balancing: keeps every accessibility review of `positives`
/// and draws as many `other` reviews from `pool` uniformly without replacement.
LabeledCorpus balance_negatives(const LabeledCorpus& positives, const LabeledCorpus& pool,
                                std::uint64_t seed);

/// Stratified assignment of corpus rows to k folds.
class FoldPlan {
 public:
  FoldPlan(std::size_t k, std::vector<std::size_t> assignment, std::vector<std::string> ids);

  std::size_t k() const { return k_; }
  std::size_t fold_of(std::size_t row) const { return assignment_[row]; }
  /// Fold index for a review id; throws CorpusError for unknown ids.
  std::size_t fold_of(std::string_view id) const;
  const std::vector<std::size_t>& assignment() const { return assignment_; }

  std::vector<std::size_t> test_rows(std::size_t fold) const;
  std::vector<std::size_t> train_rows(std::size_t fold) const;

 private:
  std::size_t k_;
  std::vector<std::size_t> assignment_;
  std::vector<std::string> ids_;
};

FoldPlan stratified_folds(const LabeledCorpus& corpus, std::size_t k, std::uint64_t seed);

}  // namespace a11yrev
