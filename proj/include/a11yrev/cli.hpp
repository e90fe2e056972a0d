#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "a11yrev/featurize.hpp"
#include "a11yrev/learners.hpp"

namespace a11yrev::cli {

/// Bad flags, bad config values, unreadable inputs. Maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Environment variable naming a config file when --config is not given.
inline constexpr const char* kConfigEnv = "A11YREV_CONFIG";

/// Raw key -> value settings, as read from a config file or from flags.
using Settings = std::map<std::string, std::string>;

/// Flat config file: `key = value` per line, '#' comments, blank lines ignored.
Settings parse_settings(std::string_view text, const std::string& origin = "config");
Settings read_settings_file(const std::filesystem::path& path);

struct ExperimentConfig {
  std::filesystem::path corpus;
  std::string format = "auto";
  std::string stopwords = "builtin";
  FeaturizerConfig featurizer;

  Algorithm algorithm = Algorithm::boosted_trees;
  bool all = false;
  /// hp.<name> overrides applied on top of the algorithm defaults.
  Hyperparameters overrides;
  std::size_t folds = 10;
  std::uint64_t seed = 1;
  std::size_t threads = 0;

  std::filesystem::path output;
  std::filesystem::path csv;
  std::size_t step = 100;
  bool timings = true;

  std::string baseline = "keyword";
  std::filesystem::path keywords;
  std::filesystem::path compare;
  std::size_t n_pos = 0;
  std::size_t n_total = 0;

  std::filesystem::path model;
  std::filesystem::path input;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::size_t max_body_bytes = 1 << 20;

  std::size_t top_n = 20;
  std::size_t per_class = 500;
  double noise = 0.02;

  /// Keys given explicitly by a file or a flag.
  std::set<std::string> explicit_keys;

  bool is_explicit(const std::string& key) const { return explicit_keys.count(key) > 0; }
  /// Defaults plus overrides for one algorithm. Overrides the algorithm does
  /// not know are skipped when `lenient`, rejected otherwise.
  LearnerSpec spec_for(Algorithm algorithm, bool lenient = false) const;
  StopList stop_list() const;
  Featurizer make_featurizer() const;
  nlohmann::ordered_json to_json() const;
};

/// Defaults, then `file`, then `flags`. Throws ConfigError on unknown keys or
/// malformed values.
ExperimentConfig resolve_config(const Settings& file, const Settings& flags);

/// Every key resolve_config accepts (hp.<name> aside).
const std::vector<std::string>& known_keys();

int cmd_crossval(const ExperimentConfig& config, std::ostream& out);
int cmd_curve(const ExperimentConfig& config, std::ostream& out);
int cmd_baseline(const ExperimentConfig& config, std::ostream& out);
int cmd_train(const ExperimentConfig& config, std::ostream& out);
/// JSONL to config.output, or to `out` when no output path is set.
int cmd_predict(const ExperimentConfig& config, std::ostream& out);
int cmd_features(const ExperimentConfig& config, std::ostream& out);
int cmd_synth(const ExperimentConfig& config, std::ostream& out);
/// Blocks until the server stops.
int cmd_serve(const ExperimentConfig& config, std::ostream& out);

/// Runs a command, translating exceptions into exit codes with a message on `err`.
int run_command(const std::string& name, const ExperimentConfig& config, std::ostream& out,
                std::ostream& err);

}  // namespace a11yrev::cli
