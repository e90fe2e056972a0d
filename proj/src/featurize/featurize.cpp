#include "a11yrev/featurize.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace a11yrev {

std::vector<Gram> extract_ngrams(const TokenStream& tokens, int max_n) {
  if (max_n != 1 && max_n != 2) throw FeatureError("max_n must be 1 or 2");
  std::vector<Gram> grams;
  grams.reserve(tokens.empty() ? 0 : tokens.size() * max_n - (max_n - 1));
  for (const auto& t : tokens) grams.push_back({t, 1});
  if (max_n == 2) {
    for (std::size_t i = 1; i < tokens.size(); ++i) {
      grams.push_back({tokens[i - 1] + ' ' + tokens[i], 2});
    }
  }
  return grams;
}

std::uint32_t murmur3_32(std::string_view key, std::uint32_t seed) {
  constexpr std::uint32_t c1 = 0xcc9e2d51;
  constexpr std::uint32_t c2 = 0x1b873593;
  const auto rotl = [](std::uint32_t x, int r) { return (x << r) | (x >> (32 - r)); };
  const auto* data = reinterpret_cast<const unsigned char*>(key.data());
  const std::size_t len = key.size();
  const std::size_t nblocks = len / 4;
  std::uint32_t h = seed;
  for (std::size_t i = 0; i < nblocks; ++i) {
    // little-endian block read, independent of host byte order
    std::uint32_t k = std::uint32_t{data[4 * i]} | (std::uint32_t{data[4 * i + 1]} << 8) |
                      (std::uint32_t{data[4 * i + 2]} << 16) |
                      (std::uint32_t{data[4 * i + 3]} << 24);
    k *= c1;
    k = rotl(k, 15);
    k *= c2;
    h ^= k;
    h = rotl(h, 13);
    h = h * 5 + 0xe6546b64;
  }
  const unsigned char* tail = data + nblocks * 4;
  std::uint32_t k1 = 0;
  switch (len & 3) {
    case 3:
      k1 ^= std::uint32_t{tail[2]} << 16;
      [[fallthrough]];
    case 2:
      k1 ^= std::uint32_t{tail[1]} << 8;
      [[fallthrough]];
    case 1:
      k1 ^= tail[0];
      k1 *= c1;
      k1 = rotl(k1, 15);
      k1 *= c2;
      h ^= k1;
  }
  h ^= static_cast<std::uint32_t>(len);
  h ^= h >> 16;
  h *= 0x85ebca6b;
  h ^= h >> 13;
  h *= 0xc2b2ae35;
  h ^= h >> 16;
  return h;
}

SparseVector::SparseVector(std::uint32_t dimension, std::vector<SparseEntry> entries)
    : dimension_(dimension) {
  std::sort(entries.begin(), entries.end(),
            [](const SparseEntry& a, const SparseEntry& b) { return a.index < b.index; });
  for (const auto& e : entries) {
    if (e.index >= dimension) {
      throw FeatureError("sparse index " + std::to_string(e.index) + " out of range for dimension " +
                         std::to_string(dimension));
    }
    if (!entries_.empty() && entries_.back().index == e.index) {
      entries_.back().value += e.value;
    } else {
      entries_.push_back(e);
    }
  }
  std::erase_if(entries_, [](const SparseEntry& e) { return e.value == 0.0; });
}

double SparseVector::at(std::uint32_t index) const {
  const auto it = std::lower_bound(
      entries_.begin(), entries_.end(), index,
      [](const SparseEntry& e, std::uint32_t i) { return e.index < i; });
  return it != entries_.end() && it->index == index ? it->value : 0.0;
}

std::uint32_t gram_bucket(std::string_view gram, int bits) {
  const std::uint32_t mask = bits >= 32 ? 0xffffffffu : (std::uint32_t{1} << bits) - 1;
  return murmur3_32(gram, kIndexHashSeed) & mask;
}

double gram_sign(std::string_view gram, bool signed_hash) {
  if (!signed_hash) return 1.0;
  return (murmur3_32(gram, kSignHashSeed) >> 31) ? -1.0 : 1.0;
}

SparseVector hash_features(std::span<const Gram> grams, int bits, bool signed_hash) {
  if (bits < 8 || bits > 24) throw FeatureError("hash bits must be in [8, 24]");
  std::vector<SparseEntry> entries;
  entries.reserve(grams.size());
  for (const auto& g : grams) {
    entries.push_back({gram_bucket(g.text, bits), gram_sign(g.text, signed_hash)});
  }
  return SparseVector(std::uint32_t{1} << bits, std::move(entries));
}

void FeaturizerConfig::validate() const {
  if (bits < 8 || bits > 24) throw FeatureError("hash bits must be in [8, 24]");
  if (max_n != 1 && max_n != 2) throw FeatureError("max_n must be 1 or 2");
}

std::size_t DesignMatrix::count(Label label) const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), label));
}

DesignMatrix DesignMatrix::subset(std::span<const std::size_t> which) const {
  DesignMatrix out;
  out.dimension = dimension;
  out.rows.reserve(which.size());
  out.labels.reserve(which.size());
  out.ids.reserve(which.size());
  for (auto r : which) {
    out.rows.push_back(rows.at(r));
    out.labels.push_back(labels.at(r));
    if (!ids.empty()) out.ids.push_back(ids.at(r));
  }
  return out;
}

Featurizer::Featurizer(FeaturizerConfig config, StopList stops)
    : config_(config), stops_(std::move(stops)) {
  config_.validate();
}

std::vector<Gram> Featurizer::grams(std::string_view text) const {
  return extract_ngrams(preprocess(text, stops_), config_.max_n);
}

SparseVector Featurizer::featurize(std::string_view text) const {
  return hash_features(grams(text), config_.bits, config_.signed_hash);
}

DesignMatrix build_design_matrix(const LabeledCorpus& corpus, const Featurizer& featurizer,
                                 const SelectorModel* selector) {
  DesignMatrix m;
  m.dimension = featurizer.config().dimension();
  m.rows.reserve(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    auto v = featurizer.featurize(corpus[i].text);
    m.rows.push_back(selector ? apply_selector(v, *selector) : std::move(v));
    m.labels.push_back(corpus.label(i));
    m.ids.push_back(corpus[i].id);
  }
  return m;
}

DesignMatrix build_design_matrix(const LabeledCorpus& corpus, const StopList& stops, int bits,
                                 bool signed_hash, const SelectorModel* selector) {
  FeaturizerConfig config;
  config.bits = bits;
  config.signed_hash = signed_hash;
  return build_design_matrix(corpus, Featurizer(config, stops), selector);
}

void GramIndex::add(std::uint32_t bucket, const std::string& gram) { ++buckets_[bucket][gram]; }

std::vector<std::pair<std::string, std::size_t>> GramIndex::grams(std::uint32_t bucket) const {
  std::vector<std::pair<std::string, std::size_t>> out;
  if (const auto it = buckets_.find(bucket); it != buckets_.end()) {
    out.assign(it->second.begin(), it->second.end());
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return out;
}

GramIndex build_gram_index(const LabeledCorpus& corpus, const Featurizer& featurizer) {
  GramIndex index;
  for (const auto& r : corpus.reviews()) {
    for (const auto& g : featurizer.grams(r.text)) {
      index.add(gram_bucket(g.text, featurizer.config().bits), g.text);
    }
  }
  return index;
}

}  // namespace a11yrev
