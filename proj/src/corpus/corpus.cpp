#include "a11yrev/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "a11yrev/random.hpp"

namespace a11yrev {

namespace {

constexpr std::string_view kColumns[] = {"id", "app_name", "app_category", "text", "label"};

bool valid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    std::size_t extra;
    std::uint32_t cp;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      extra = 1;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      extra = 2;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      extra = 3;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + extra >= s.size()) return false;
    for (std::size_t j = 1; j <= extra; ++j) {
      const auto cc = static_cast<unsigned char>(s[i + j]);
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    // overlong forms, surrogates, out of range
    if ((extra == 1 && cp < 0x80) || (extra == 2 && cp < 0x800) || (extra == 3 && cp < 0x10000) ||
        (cp >= 0xD800 && cp <= 0xDFFF) || cp > 0x10FFFF) {
      return false;
    }
    i += extra + 1;
  }
  return true;
}

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

// RFC-4180 record reader. Returns false at end of input.
bool read_csv_record(std::istream& in, std::vector<std::string>& fields, std::size_t& line) {
  fields.clear();
  if (in.peek() == std::char_traits<char>::eof()) return false;
  std::string field;
  bool quoted = false;
  bool field_started_quoted = false;
  const std::size_t start_line = line;
  for (;;) {
    const int ch = in.get();
    if (ch == std::char_traits<char>::eof()) {
      if (quoted) {
        throw CorpusError("line " + std::to_string(start_line) + ": unterminated quoted field");
      }
      fields.push_back(std::move(field));
      return true;
    }
    const char c = static_cast<char>(ch);
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get();
          field.push_back('"');
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && field.empty() && !field_started_quoted) {
      quoted = true;
      field_started_quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
      field_started_quoted = false;
    } else if (c == '\r' && in.peek() == '\n') {
      // CRLF terminator; the '\n' ends the record below
    } else if (c == '\n') {
      ++line;
      fields.push_back(std::move(field));
      return true;
    } else {
      field.push_back(c);
    }
  }
}

std::string csv_quote(std::string_view s) {
  const bool needs = s.find_first_of(",\"\r\n") != std::string_view::npos ||
                     (!s.empty() && (s.front() == ' ' || s.back() == ' '));
  if (!needs) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

struct ColumnMap {
  std::optional<std::size_t> index[5];
};

Review make_review(const std::string* values[5], std::size_t line) {
  Review r;
  std::string* targets[4] = {&r.id, &r.app_name, &r.app_category, &r.text};
  for (int c = 0; c < 5; ++c) {
    if (values[c] && !valid_utf8(*values[c])) {
      throw CorpusError("line " + std::to_string(line) + ": undecodable UTF-8 in column '" +
                        std::string(kColumns[c]) + "'");
    }
  }
  for (int c = 0; c < 4; ++c) {
    if (values[c]) *targets[c] = *values[c];
  }
  if (values[4] && !values[4]->empty()) {
    r.label = parse_label(*values[4]);
    if (!r.label) {
      throw CorpusError("line " + std::to_string(line) + ": unknown label '" + *values[4] +
                        "' (expected 'accessibility' or 'other')");
    }
  }
  return r;
}

void check_required(const ColumnMap& map, bool require_all) {
  for (int c = 0; c < 5; ++c) {
    const bool required = require_all || c == 0 || c == 3;
    if (required && !map.index[c]) {
      throw CorpusError("missing required column '" + std::string(kColumns[c]) + "'");
    }
  }
}

std::vector<Review> read_csv(std::istream& in, bool require_all,
                             std::vector<std::string>* warnings) {
  std::vector<Review> out;
  std::vector<std::string> fields;
  std::size_t line = 1;
  if (!read_csv_record(in, fields, line)) return out;
  if (!fields.empty() && fields[0].rfind("\xEF\xBB\xBF", 0) == 0) fields[0].erase(0, 3);
  ColumnMap map;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    const auto it = std::find(std::begin(kColumns), std::end(kColumns), fields[i]);
    if (it == std::end(kColumns)) {
      if (warnings) warnings->push_back("ignoring extra column '" + fields[i] + "'");
      continue;
    }
    map.index[it - std::begin(kColumns)] = i;
  }
  check_required(map, require_all);
  while (true) {
    const std::size_t record_line = line;
    if (!read_csv_record(in, fields, line)) break;
    if (fields.size() == 1 && fields[0].empty()) continue;  // blank line
    const std::string* values[5] = {};
    for (int c = 0; c < 5; ++c) {
      if (!map.index[c]) continue;
      if (*map.index[c] >= fields.size()) {
        throw CorpusError("line " + std::to_string(record_line) + ": missing value for column '" +
                          std::string(kColumns[c]) + "'");
      }
      values[c] = &fields[*map.index[c]];
    }
    out.push_back(make_review(values, record_line));
  }
  return out;
}

std::vector<Review> read_jsonl(std::istream& in, bool require_all,
                               std::vector<std::string>* warnings) {
  std::vector<Review> out;
  std::string text;
  std::size_t line = 0;
  std::unordered_set<std::string> warned;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (is_blank(text)) continue;
    if (!valid_utf8(text)) {
      throw CorpusError("line " + std::to_string(line) + ": undecodable UTF-8");
    }
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw CorpusError("line " + std::to_string(line) + ": malformed JSON: " + e.what());
    }
    if (!obj.is_object()) {
      throw CorpusError("line " + std::to_string(line) + ": expected a JSON object");
    }
    std::string storage[5];
    const std::string* values[5] = {};
    for (int c = 0; c < 5; ++c) {
      const auto it = obj.find(std::string(kColumns[c]));
      if (it == obj.end() || it->is_null()) {
        const bool required = require_all || c == 0 || c == 3;
        if (required) {
          throw CorpusError("line " + std::to_string(line) + ": missing required column '" +
                            std::string(kColumns[c]) + "'");
        }
        continue;
      }
      if (!it->is_string()) {
        throw CorpusError("line " + std::to_string(line) + ": column '" +
                          std::string(kColumns[c]) + "' must be a string");
      }
      storage[c] = it->get<std::string>();
      values[c] = &storage[c];
    }
    if (warnings) {
      for (const auto& [key, _] : obj.items()) {
        if (std::find(std::begin(kColumns), std::end(kColumns), key) == std::end(kColumns) &&
            warned.insert(key).second) {
          warnings->push_back("ignoring extra field '" + key + "'");
        }
      }
    }
    out.push_back(make_review(values, line));
  }
  return out;
}

std::vector<Review> read_any(std::istream& in, CorpusFormat format, bool require_all,
                             std::vector<std::string>* warnings) {
  return format == CorpusFormat::csv ? read_csv(in, require_all, warnings)
                                     : read_jsonl(in, require_all, warnings);
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CorpusError("cannot open corpus file '" + path.string() + "'");
  return in;
}

}  // namespace

std::string_view to_string(Label label) {
  return label == Label::accessibility ? "accessibility" : "other";
}

std::optional<Label> parse_label(std::string_view token) {
  if (token == "accessibility") return Label::accessibility;
  if (token == "other") return Label::other;
  return std::nullopt;
}

CorpusFormat parse_format(std::string_view name) {
  if (name == "csv") return CorpusFormat::csv;
  if (name == "jsonl") return CorpusFormat::jsonl;
  throw CorpusError("unknown corpus format '" + std::string(name) + "'");
}

CorpusFormat format_from_path(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  return ext == ".jsonl" || ext == ".json" ? CorpusFormat::jsonl : CorpusFormat::csv;
}

LabeledCorpus::LabeledCorpus(std::vector<Review> reviews) : reviews_(std::move(reviews)) {
  std::unordered_set<std::string_view> seen;
  seen.reserve(reviews_.size());
  for (const auto& r : reviews_) {
    if (r.id.empty()) throw CorpusError("review with empty id");
    if (!seen.insert(r.id).second) throw CorpusError("duplicate review id '" + r.id + "'");
    if (is_blank(r.text)) throw CorpusError("review '" + r.id + "' has empty text");
    if (!r.label) throw CorpusError("review '" + r.id + "' is unlabeled");
    (*r.label == Label::accessibility ? positives_ : negatives_)++;
  }
}

LabeledCorpus LabeledCorpus::subset(std::span<const std::size_t> rows) const {
  std::vector<Review> out;
  out.reserve(rows.size());
  for (auto row : rows) out.push_back(reviews_.at(row));
  return LabeledCorpus(std::move(out));
}

std::vector<Review> read_reviews(std::istream& in, CorpusFormat format,
                                 std::vector<std::string>* warnings) {
  auto reviews = read_any(in, format, false, warnings);
  std::unordered_set<std::string_view> seen;
  for (const auto& r : reviews) {
    if (r.id.empty()) throw CorpusError("review with empty id");
    if (!seen.insert(r.id).second) throw CorpusError("duplicate review id '" + r.id + "'");
  }
  return reviews;
}

std::vector<Review> load_reviews(const std::filesystem::path& path, CorpusFormat format,
                                 std::vector<std::string>* warnings) {
  auto in = open_input(path);
  return read_reviews(in, format, warnings);
}

LabeledCorpus load_corpus(const std::filesystem::path& path, CorpusFormat format,
                          std::vector<std::string>* warnings) {
  auto in = open_input(path);
  return LabeledCorpus(read_any(in, format, true, warnings));
}

void write_reviews(std::ostream& out, std::span<const Review> reviews, CorpusFormat format) {
  if (format == CorpusFormat::csv) {
    out << "id,app_name,app_category,text,label\n";
    for (const auto& r : reviews) {
      out << csv_quote(r.id) << ',' << csv_quote(r.app_name) << ',' << csv_quote(r.app_category)
          << ',' << csv_quote(r.text) << ',' << (r.label ? to_string(*r.label) : "") << '\n';
    }
    return;
  }
  for (const auto& r : reviews) {
    nlohmann::ordered_json obj;
    obj["id"] = r.id;
    obj["app_name"] = r.app_name;
    obj["app_category"] = r.app_category;
    obj["text"] = r.text;
    obj["label"] = r.label ? nlohmann::ordered_json(std::string(to_string(*r.label))) : nullptr;
    out << obj.dump() << '\n';
  }
}

void save_corpus(const LabeledCorpus& corpus, const std::filesystem::path& path,
                 CorpusFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CorpusError("cannot write corpus file '" + path.string() + "'");
  write_reviews(out, corpus.reviews(), format);
}

LabeledCorpus balance_negatives(const LabeledCorpus& positives, const LabeledCorpus& pool,
                                std::uint64_t seed) {
  std::vector<Review> out;
  for (const auto& r : positives.reviews()) {
    if (*r.label == Label::accessibility) out.push_back(r);
  }
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (pool.label(i) == Label::other) candidates.push_back(i);
  }
  const std::size_t required = out.size();
  if (candidates.size() < required) {
    throw CorpusError("insufficient negative pool: required " + std::to_string(required) +
                      ", available " + std::to_string(candidates.size()));
  }
  // partial Fisher-Yates: the first `required` slots are a uniform sample
  Rng rng(seed);
  for (std::size_t i = 0; i < required; ++i) {
    std::swap(candidates[i], candidates[i + rng.below(candidates.size() - i)]);
  }
  candidates.resize(required);
  std::sort(candidates.begin(), candidates.end());
  for (auto i : candidates) out.push_back(pool[i]);
  return LabeledCorpus(std::move(out));
}

FoldPlan::FoldPlan(std::size_t k, std::vector<std::size_t> assignment,
                   std::vector<std::string> ids)
    : k_(k), assignment_(std::move(assignment)), ids_(std::move(ids)) {}

std::size_t FoldPlan::fold_of(std::string_view id) const {
  const auto it = std::find(ids_.begin(), ids_.end(), id);
  if (it == ids_.end()) throw CorpusError("id '" + std::string(id) + "' is not in the fold plan");
  return assignment_[static_cast<std::size_t>(it - ids_.begin())];
}

std::vector<std::size_t> FoldPlan::test_rows(std::size_t fold) const {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < assignment_.size(); ++i) {
    if (assignment_[i] == fold) rows.push_back(i);
  }
  return rows;
}

std::vector<std::size_t> FoldPlan::train_rows(std::size_t fold) const {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < assignment_.size(); ++i) {
    if (assignment_[i] != fold) rows.push_back(i);
  }
  return rows;
}

FoldPlan stratified_folds(const LabeledCorpus& corpus, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw CorpusError("fold count must be at least 2");
  const auto pos = corpus.count(Label::accessibility);
  const auto neg = corpus.count(Label::other);
  if (pos < k || neg < k) {
    throw CorpusError("k=" + std::to_string(k) + " exceeds class size (accessibility=" +
                      std::to_string(pos) + ", other=" + std::to_string(neg) + ")");
  }
  std::vector<std::size_t> by_class[2];
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    by_class[static_cast<int>(corpus.label(i))].push_back(i);
  }
  Rng rng(seed);
  std::vector<std::size_t> assignment(corpus.size());
  // Deal positives then negatives round-robin; continuing the offset across
  // classes keeps total fold sizes within one of each other.
  std::size_t slot = 0;
  for (int cls : {1, 0}) {
    auto& rows = by_class[cls];
    rng.shuffle(std::span(rows));
    for (auto row : rows) assignment[row] = slot++ % k;
  }
  std::vector<std::string> ids;
  ids.reserve(corpus.size());
  for (const auto& r : corpus.reviews()) ids.push_back(r.id);
  return FoldPlan(k, std::move(assignment), std::move(ids));
}

}  // namespace a11yrev
