#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "a11yrev/cli.hpp"

namespace a11yrev::cli {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("invalid value '" + value + "' for " + key);
  }
  return out;
}

double parse_real(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used == value.size()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("invalid value '" + value + "' for " + key);
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw ConfigError("invalid boolean '" + value + "' for " + key);
}

}  // namespace

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "corpus",  "format",  "stopwords", "bits",    "signed",   "max_n",    "select_k",
      "algorithm", "all",   "folds",     "seed",    "threads",  "output",   "csv",
      "step",    "timings", "baseline",  "keywords", "compare", "n_pos",    "n_total",
      "model",   "input",   "host",      "port",    "max_body_bytes", "top_n", "per_class",
      "noise"};
  return keys;
}

Settings parse_settings(std::string_view text, const std::string& origin) {
  Settings out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(number) + ": expected key = value");
    }
    auto key = trim(std::string_view(stripped).substr(0, eq));
    if (key.empty()) throw ConfigError(origin + ":" + std::to_string(number) + ": empty key");
    out[std::move(key)] = trim(std::string_view(stripped).substr(eq + 1));
  }
  return out;
}

Settings read_settings_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_settings(buf.str(), path.string());
}

ExperimentConfig resolve_config(const Settings& file, const Settings& flags) {
  Settings merged = file;
  for (const auto& [k, v] : flags) merged[k] = v;

  ExperimentConfig c;
  const auto& keys = known_keys();
  for (const auto& [key, value] : merged) {
    const bool hp = key.rfind("hp.", 0) == 0 && key.size() > 3;
    if (!hp && std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ConfigError("unknown config key '" + key + "'");
    }
    c.explicit_keys.insert(key);
    if (hp) {
      c.overrides[key.substr(3)] = parse_real(key, value);
    } else if (key == "corpus") {
      c.corpus = value;
    } else if (key == "format") {
      if (value != "auto" && value != "csv" && value != "jsonl") {
        throw ConfigError("format must be auto, csv or jsonl");
      }
      c.format = value;
    } else if (key == "stopwords") {
      c.stopwords = value;
    } else if (key == "bits") {
      c.featurizer.bits = parse_number<int>(key, value);
    } else if (key == "signed") {
      c.featurizer.signed_hash = parse_bool(key, value);
    } else if (key == "max_n") {
      c.featurizer.max_n = parse_number<int>(key, value);
    } else if (key == "select_k") {
      c.featurizer.select_k = parse_number<std::size_t>(key, value);
    } else if (key == "algorithm") {
      try {
        c.algorithm = parse_algorithm(value);
      } catch (const std::exception& e) {
        throw ConfigError(e.what());
      }
    } else if (key == "all") {
      c.all = parse_bool(key, value);
    } else if (key == "folds") {
      c.folds = parse_number<std::size_t>(key, value);
    } else if (key == "seed") {
      c.seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "threads") {
      c.threads = parse_number<std::size_t>(key, value);
    } else if (key == "output") {
      c.output = value;
    } else if (key == "csv") {
      c.csv = value;
    } else if (key == "step") {
      c.step = parse_number<std::size_t>(key, value);
    } else if (key == "timings") {
      c.timings = parse_bool(key, value);
    } else if (key == "baseline") {
      if (value != "keyword" && value != "random") throw ConfigError("baseline must be keyword or random");
      c.baseline = value;
    } else if (key == "keywords") {
      c.keywords = value;
    } else if (key == "compare") {
      c.compare = value;
    } else if (key == "n_pos") {
      c.n_pos = parse_number<std::size_t>(key, value);
    } else if (key == "n_total") {
      c.n_total = parse_number<std::size_t>(key, value);
    } else if (key == "model") {
      c.model = value;
    } else if (key == "input") {
      c.input = value;
    } else if (key == "host") {
      c.host = value;
    } else if (key == "port") {
      c.port = parse_number<int>(key, value);
      if (c.port < 0 || c.port > 65535) throw ConfigError("port must be in [0, 65535]");
    } else if (key == "max_body_bytes") {
      c.max_body_bytes = parse_number<std::size_t>(key, value);
    } else if (key == "top_n") {
      c.top_n = parse_number<std::size_t>(key, value);
    } else if (key == "per_class") {
      c.per_class = parse_number<std::size_t>(key, value);
    } else if (key == "noise") {
      c.noise = parse_real(key, value);
      if (c.noise < 0 || c.noise > 1) throw ConfigError("noise must be in [0, 1]");
    }
  }
  try {
    c.featurizer.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  if (c.folds < 2) throw ConfigError("folds must be at least 2");
  if (c.step == 0) throw ConfigError("step must be positive");
  // surface bad overrides now rather than mid-experiment
  if (!c.overrides.empty()) {
    if (c.all) {
      for (const auto& [name, value] : c.overrides) {
        const bool known = std::any_of(all_algorithms().begin(), all_algorithms().end(), [&](Algorithm a) {
          return default_hyperparameters(a).count(name) > 0;
        });
        if (!known) throw ConfigError("hyperparameter '" + name + "' belongs to no algorithm");
      }
    } else {
      c.spec_for(c.algorithm);
    }
  }
  return c;
}

LearnerSpec ExperimentConfig::spec_for(Algorithm alg, bool lenient) const {
  auto spec = LearnerSpec::defaults(alg, seed);
  for (const auto& [name, value] : overrides) {
    if (default_hyperparameters(alg).count(name) == 0) {
      if (lenient) continue;
      throw ConfigError("hyperparameter '" + name + "' does not apply to " +
                        std::string(to_string(alg)));
    }
    spec = spec.with(name, value);
  }
  return spec;
}

StopList ExperimentConfig::stop_list() const {
  if (stopwords == "builtin") return StopList::english();
  if (stopwords == "none") return StopList();
  if (!std::filesystem::exists(stopwords)) {
    throw ConfigError("stop-word file not found: " + stopwords);
  }
  return StopList::from_file(stopwords);
}

Featurizer ExperimentConfig::make_featurizer() const { return Featurizer(featurizer, stop_list()); }

nlohmann::ordered_json ExperimentConfig::to_json() const {
  nlohmann::ordered_json hp = nlohmann::ordered_json::object();
  for (const auto& [name, value] : overrides) hp[name] = value;
  return {{"corpus", corpus.string()},
          {"format", format},
          {"stopwords", stopwords},
          {"bits", featurizer.bits},
          {"signed", featurizer.signed_hash},
          {"max_n", featurizer.max_n},
          {"select_k", featurizer.select_k},
          {"algorithm", all ? std::string("all") : std::string(to_string(algorithm))},
          {"hyperparameter_overrides", std::move(hp)},
          {"folds", folds},
          {"seed", seed},
          {"step", step}};
}

}  // namespace a11yrev::cli
