#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "a11yrev/featurize.hpp"

namespace a11yrev {

namespace {

double xlog2(double joint, double pf, double py) {
  return joint > 0.0 ? joint * std::log2(joint / (pf * py)) : 0.0;
}

}  // namespace

double mutual_information_bits(double n00, double n01, double n10, double n11) {
  // n[f][y], put in a canonical orientation: tables related by relabelling F
  // or Y score bitwise equal.
  std::array<double, 4> t = {n00, n01, n10, n11};
  const std::array<std::array<double, 4>, 4> variants = {{
      {t[0], t[1], t[2], t[3]},
      {t[2], t[3], t[0], t[1]},  // flip F
      {t[1], t[0], t[3], t[2]},  // flip Y
      {t[3], t[2], t[1], t[0]},  // flip both
  }};
  t = *std::min_element(variants.begin(), variants.end());
  const double n = t[0] + t[1] + t[2] + t[3];
  if (n <= 0.0) return 0.0;
  // exact independence
  if (t[0] * t[3] == t[1] * t[2]) return 0.0;
  const double pf0 = (t[0] + t[1]) / n;
  const double pf1 = (t[2] + t[3]) / n;
  const double py0 = (t[0] + t[2]) / n;
  const double py1 = (t[1] + t[3]) / n;
  const double mi = xlog2(t[0] / n, pf0, py0) + xlog2(t[1] / n, pf0, py1) +
                    xlog2(t[2] / n, pf1, py0) + xlog2(t[3] / n, pf1, py1);
  return std::max(0.0, mi);
}

SelectorModel::SelectorModel(std::uint32_t dimension, std::vector<RankedFeature> ranked,
                             std::size_t k)
    : dimension_(dimension), k_(std::min(k, ranked.size())), ranked_(std::move(ranked)) {
  for (std::size_t i = 0; i < ranked_.size(); ++i) {
    const auto& f = ranked_[i];
    if (f.index >= dimension_) throw FeatureError("selector index out of range");
    if (!(f.score >= 0.0)) throw FeatureError("selector scores must be non-negative");
    if (i > 0 && ranked_[i - 1].score < f.score) {
      throw FeatureError("selector scores must be non-increasing");
    }
  }
  for (std::size_t i = 0; i < k_; ++i) retained_sorted_.push_back(ranked_[i].index);
  std::sort(retained_sorted_.begin(), retained_sorted_.end());
  if (std::adjacent_find(retained_sorted_.begin(), retained_sorted_.end()) !=
      retained_sorted_.end()) {
    throw FeatureError("selector indices must be unique");
  }
}

std::span<const RankedFeature> SelectorModel::retained() const {
  return std::span(ranked_).first(k_);
}

bool SelectorModel::selects(std::uint32_t index) const {
  return std::binary_search(retained_sorted_.begin(), retained_sorted_.end(), index);
}

std::string SelectorModel::to_json() const {
  nlohmann::ordered_json doc;
  doc["format_version"] = kSelectorFormatVersion;
  doc["dimension"] = dimension_;
  doc["k"] = k_;
  auto features = nlohmann::ordered_json::array();
  for (const auto& f : ranked_) features.push_back({f.index, f.score});
  doc["features"] = std::move(features);
  return doc.dump();
}

SelectorModel SelectorModel::from_json(std::string_view text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    const int version = doc.at("format_version").get<int>();
    if (version != kSelectorFormatVersion) {
      throw FeatureError("unsupported selector format_version " + std::to_string(version));
    }
    std::vector<RankedFeature> ranked;
    for (const auto& f : doc.at("features")) {
      ranked.push_back({f.at(0).get<std::uint32_t>(), f.at(1).get<double>()});
    }
    return SelectorModel(doc.at("dimension").get<std::uint32_t>(), std::move(ranked),
                         doc.at("k").get<std::size_t>());
  } catch (const nlohmann::json::exception& e) {
    throw FeatureError(std::string("corrupt selector document: ") + e.what());
  }
}

void SelectorModel::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FeatureError("cannot write selector file '" + path.string() + "'");
  out << to_json() << '\n';
}

SelectorModel SelectorModel::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FeatureError("cannot open selector file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

SelectorModel fit_mi_selector(const DesignMatrix& matrix, std::size_t k) {
  if (k == 0) throw FeatureError("selector k must be positive");
  if (matrix.empty()) throw FeatureError("cannot fit a selector on an empty matrix");
  const double n_pos = static_cast<double>(matrix.count(Label::accessibility));
  const double n_neg = static_cast<double>(matrix.size()) - n_pos;
  if (n_pos == 0.0 || n_neg == 0.0) {
    throw FeatureError("cannot fit a selector on single-class data");
  }
  // presence counts per feature: [negatives, positives]
  std::unordered_map<std::uint32_t, std::array<double, 2>> present;
  for (std::size_t r = 0; r < matrix.size(); ++r) {
    const int y = matrix.labels[r] == Label::accessibility ? 1 : 0;
    for (const auto& e : matrix.rows[r].entries()) present[e.index][y] += 1.0;
  }
  std::vector<RankedFeature> ranked;
  ranked.reserve(present.size());
  for (const auto& [index, c] : present) {
    const double n10 = c[0];
    const double n11 = c[1];
    ranked.push_back({index, mutual_information_bits(n_neg - n10, n_pos - n11, n10, n11)});
  }
  std::sort(ranked.begin(), ranked.end(), [](const RankedFeature& a, const RankedFeature& b) {
    return a.score != b.score ? a.score > b.score : a.index < b.index;
  });
  return SelectorModel(matrix.dimension, std::move(ranked), k);
}

SparseVector apply_selector(const SparseVector& vector, const SelectorModel& selector) {
  if (vector.dimension() != selector.dimension()) {
    throw FeatureError("vector dimension " + std::to_string(vector.dimension()) +
                       " does not match selector dimension " +
                       std::to_string(selector.dimension()));
  }
  std::vector<SparseEntry> kept;
  for (const auto& e : vector.entries()) {
    if (selector.selects(e.index)) kept.push_back(e);
  }
  return SparseVector(vector.dimension(), std::move(kept));
}

}  // namespace a11yrev
