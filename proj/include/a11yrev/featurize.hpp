#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "a11yrev/corpus.hpp"
#include "a11yrev/textprep.hpp"

namespace a11yrev {

class FeatureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A unigram or a space-joined bigram.
struct Gram {
  std::string text;
  int order = 1;

  bool operator==(const Gram&) const = default;
};

/// All unigrams followed by all adjacent pairs, in document order.
std::vector<Gram> extract_ngrams(const TokenStream& tokens, int max_n = 2);

/// MurmurHash3 x86_32.
std::uint32_t murmur3_32(std::string_view key, std::uint32_t seed);

/// Seed of the bucket hash; the sign hash uses kSignHashSeed.
inline constexpr std::uint32_t kIndexHashSeed = 0;
inline constexpr std::uint32_t kSignHashSeed = 0x5bd1e995u;

struct SparseEntry {
  std::uint32_t index = 0;
  double value = 0.0;

  bool operator==(const SparseEntry&) const = default;
};

/// Sparse vector with strictly increasing indices < dimension and no stored zeros.
class SparseVector {
 public:
  SparseVector() = default;
  explicit SparseVector(std::uint32_t dimension) : dimension_(dimension) {}
  /// Entries may be unsorted and repeated: duplicates are summed, zeros dropped.
  SparseVector(std::uint32_t dimension, std::vector<SparseEntry> entries);

  std::uint32_t dimension() const { return dimension_; }
  std::span<const SparseEntry> entries() const { return entries_; }
  std::size_t nnz() const { return entries_.size(); }
  /// 0 for absent indices.
  double at(std::uint32_t index) const;

  bool operator==(const SparseVector&) const = default;

 private:
  std::uint32_t dimension_ = 0;
  std::vector<SparseEntry> entries_;
};

/// bucket = murmur3(gram, kIndexHashSeed) mod 2^bits; each occurrence adds +1,
/// or, when `signed_hash`, +1/-1 from the top bit of murmur3(gram, kSignHashSeed).
SparseVector hash_features(std::span<const Gram> grams, int bits, bool signed_hash);

std::uint32_t gram_bucket(std::string_view gram, int bits);
double gram_sign(std::string_view gram, bool signed_hash);

struct FeaturizerConfig {
  int bits = 18;
  bool signed_hash = true;
  int max_n = 2;
  /// Features kept by mutual-information selection; 0 disables selection.
  std::size_t select_k = 5000;

  void validate() const;
  std::uint32_t dimension() const { return std::uint32_t{1} << bits; }
};

/// Rows of hashed vectors with their labels and review ids.
struct DesignMatrix {
  std::uint32_t dimension = 0;
  std::vector<SparseVector> rows;
  std::vector<Label> labels;
  std::vector<std::string> ids;

  std::size_t size() const { return rows.size(); }
  bool empty() const { return rows.empty(); }
  std::size_t count(Label label) const;
  /// Rows in the given order (ids and labels follow).
  DesignMatrix subset(std::span<const std::size_t> rows) const;
};

struct RankedFeature {
  std::uint32_t index = 0;
  double score = 0.0;

  bool operator==(const RankedFeature&) const = default;
};

/// Filter selector: the top-k hash buckets by mutual information with the label.
class SelectorModel {
 public:
  SelectorModel() = default;
  SelectorModel(std::uint32_t dimension, std::vector<RankedFeature> ranked, std::size_t k);

  std::uint32_t dimension() const { return dimension_; }
  std::size_t k() const { return k_; }
  /// Every scored feature, best first. Only the first k() are retained.
  const std::vector<RankedFeature>& ranking() const { return ranked_; }
  std::span<const RankedFeature> retained() const;
  bool selects(std::uint32_t index) const;

  /// {"format_version":1,"dimension":..,"k":..,"features":[[index,score],...]}
  std::string to_json() const;
  static SelectorModel from_json(std::string_view text);
  void save(const std::filesystem::path& path) const;
  static SelectorModel load(const std::filesystem::path& path);

  bool operator==(const SelectorModel& other) const {
    return dimension_ == other.dimension_ && k_ == other.k_ && ranked_ == other.ranked_;
  }

 private:
  std::uint32_t dimension_ = 0;
  std::size_t k_ = 0;
  std::vector<RankedFeature> ranked_;
  std::vector<std::uint32_t> retained_sorted_;
};

inline constexpr int kSelectorFormatVersion = 1;

/// I(F;Y) in bits for binary presence F and binary label Y, from the
/// contingency counts n[f][y].
double mutual_information_bits(double n00, double n01, double n10, double n11);

/// Scores every feature present in any row; ties broken by lower index.
SelectorModel fit_mi_selector(const DesignMatrix& matrix, std::size_t k);

SparseVector apply_selector(const SparseVector& vector, const SelectorModel& selector);

/// Text -> hashed vector with a fixed stop list and hashing configuration.
class Featurizer {
 public:
  Featurizer(FeaturizerConfig config, StopList stops);

  const FeaturizerConfig& config() const { return config_; }
  const StopList& stops() const { return stops_; }

  std::vector<Gram> grams(std::string_view text) const;
  SparseVector featurize(std::string_view text) const;

 private:
  FeaturizerConfig config_;
  StopList stops_;
};

DesignMatrix build_design_matrix(const LabeledCorpus& corpus, const Featurizer& featurizer,
                                 const SelectorModel* selector = nullptr);
DesignMatrix build_design_matrix(const LabeledCorpus& corpus, const StopList& stops, int bits,
                                 bool signed_hash, const SelectorModel* selector = nullptr);

/// Bucket -> grams that hashed into it, with occurrence counts.
class GramIndex {
 public:
  void add(std::uint32_t bucket, const std::string& gram);
  /// Grams of a bucket, most frequent first (ties alphabetical).
  std::vector<std::pair<std::string, std::size_t>> grams(std::uint32_t bucket) const;

 private:
  std::map<std::uint32_t, std::map<std::string, std::size_t>> buckets_;
};

GramIndex build_gram_index(const LabeledCorpus& corpus, const Featurizer& featurizer);

}  // namespace a11yrev
