#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "a11yrev/cli.hpp"

using a11yrev::cli::Settings;

namespace {

struct Flags {
  Settings values;
  std::vector<std::string> hyperparameters;
};

void option(CLI::App* sub, Flags& flags, const std::string& name, const std::string& key,
            const std::string& help) {
  sub->add_option_function<std::string>(
      "--" + name, [&flags, key](const std::string& v) { flags.values[key] = v; }, help);
}

void flag(CLI::App* sub, Flags& flags, const std::string& name, const std::string& key,
          const std::string& value, const std::string& help) {
  sub->add_flag_callback(
      "--" + name, [&flags, key, value] { flags.values[key] = value; }, help);
}

void common(CLI::App* sub, Flags& flags) {
  option(sub, flags, "corpus", "corpus", "Labeled corpus (CSV or JSONL)");
  option(sub, flags, "format", "format", "Corpus format: auto, csv or jsonl");
  option(sub, flags, "stopwords", "stopwords", "Stop-word file, 'builtin' or 'none'");
  option(sub, flags, "bits", "bits", "Hash dimension exponent in [8, 24]");
  option(sub, flags, "signed", "signed", "Signed hashing (true/false)");
  option(sub, flags, "max-n", "max_n", "Longest n-gram (1 or 2)");
  option(sub, flags, "select-k", "select_k", "Features kept by MI selection (0 disables)");
  option(sub, flags, "algorithm", "algorithm", "Learner name");
  sub->add_option("--hp", flags.hyperparameters, "Hyperparameter override name=value (repeatable)");
  option(sub, flags, "folds", "folds", "Cross-validation folds");
  option(sub, flags, "seed", "seed", "Seed for every random choice");
  option(sub, flags, "threads", "threads", "Worker threads (0 = all cores)");
  option(sub, flags, "output", "output", "Output path");
  flag(sub, flags, "no-timings", "timings", "false", "Omit wall-clock timings from reports");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Accessibility app-review classification toolkit"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "Flat key = value config file")->envname(a11yrev::cli::kConfigEnv);
  app.fallthrough();

  Flags flags;
  auto* crossval = app.add_subcommand("crossval", "Cross-validate one or all learners");
  common(crossval, flags);
  flag(crossval, flags, "all", "all", "true", "Evaluate all seven learners");

  auto* curve = app.add_subcommand("curve", "Learning curve over growing training sizes");
  common(curve, flags);
  option(curve, flags, "step", "step", "Training-size increment");
  option(curve, flags, "csv", "csv", "CSV output path");

  auto* baseline = app.add_subcommand("baseline", "Keyword or random baseline");
  common(baseline, flags);
  baseline->add_option_function<std::string>(
      "which", [&flags](const std::string& v) { flags.values["baseline"] = v; }, "keyword or random");
  option(baseline, flags, "keywords", "keywords", "Keyword file (default: shipped 74-keyword list)");
  option(baseline, flags, "compare", "compare", "Cross-validation report to compare against");
  option(baseline, flags, "n-pos", "n_pos", "Positive count for the random baseline");
  option(baseline, flags, "n-total", "n_total", "Total count for the random baseline");

  auto* train = app.add_subcommand("train", "Fit a model on the whole corpus");
  common(train, flags);

  auto* predict = app.add_subcommand("predict", "Score reviews with a saved model (JSONL out)");
  common(predict, flags);
  option(predict, flags, "model", "model", "Model file");
  option(predict, flags, "input", "input", "Reviews to score (CSV or JSONL)");

  auto* features = app.add_subcommand("features", "Report the most influential features");
  common(features, flags);
  option(features, flags, "model", "model", "Model file (default: train on the corpus)");
  option(features, flags, "top", "top_n", "Number of features to report");

  auto* serve = app.add_subcommand("serve", "HTTP scoring service");
  common(serve, flags);
  option(serve, flags, "model", "model", "Model file");
  option(serve, flags, "host", "host", "Bind address");
  option(serve, flags, "port", "port", "Port (0 picks a free one)");
  option(serve, flags, "max-body", "max_body_bytes", "Largest accepted request body in bytes");

  auto* synth = app.add_subcommand("synth", "Write the synthetic corpus");
  common(synth, flags);
  option(synth, flags, "per-class", "per_class", "Reviews per class");
  option(synth, flags, "noise", "noise", "Theme-word swap probability");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : a11yrev::cli::kExitUsage;
  }

  for (const auto& hp : flags.hyperparameters) {
    const auto eq = hp.find('=');
    if (eq == std::string::npos || eq == 0) {
      std::cerr << "error: --hp expects name=value, got '" << hp << "'\n";
      return a11yrev::cli::kExitUsage;
    }
    flags.values["hp." + hp.substr(0, eq)] = hp.substr(eq + 1);
  }

  a11yrev::cli::ExperimentConfig config;
  try {
    const Settings file = config_path.empty() ? Settings{} : a11yrev::cli::read_settings_file(config_path);
    config = a11yrev::cli::resolve_config(file, flags.values);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return a11yrev::cli::kExitUsage;
  }
  const auto* chosen = app.get_subcommands().front();
  return a11yrev::cli::run_command(chosen->get_name(), config, std::cout, std::cerr);
}
