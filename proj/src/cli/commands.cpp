#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "a11yrev/baselines.hpp"
#include "a11yrev/cli.hpp"
#include "a11yrev/eval.hpp"
#include "a11yrev/service.hpp"
#include "a11yrev/synthetic.hpp"

namespace a11yrev::cli {

namespace {

using ojson = nlohmann::ordered_json;

std::string fixed(double v, int decimals = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

void require_file(const std::filesystem::path& path, const std::string& what) {
  if (path.empty()) throw ConfigError(what + " path is not set");
  if (!std::filesystem::is_regular_file(path)) {
    throw ConfigError(what + " not found: " + path.string());
  }
}

CorpusFormat format_of(const ExperimentConfig& config, const std::filesystem::path& path) {
  return config.format == "auto" ? format_from_path(path) : parse_format(config.format);
}

LabeledCorpus load_labeled(const ExperimentConfig& config) {
  require_file(config.corpus, "corpus file");
  std::vector<std::string> warnings;
  auto corpus = load_corpus(config.corpus, format_of(config, config.corpus), &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
  return corpus;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << text;
}

ojson corpus_summary(const LabeledCorpus& corpus) {
  return {{"reviews", corpus.size()},
          {"accessibility", corpus.count(Label::accessibility)},
          {"other", corpus.count(Label::other)}};
}

CrossValidationOptions cv_options(const ExperimentConfig& config) {
  return {config.folds, config.seed, config.threads, {}};
}

std::string metrics_header() {
  return pad("", 18) + pad("precision", 11) + pad("recall", 11) + pad("accuracy", 11) + "f1\n";
}

std::string metrics_row(const std::string& name, const MetricsReport& m) {
  return pad(name, 18) + pad(fixed(m.precision), 11) + pad(fixed(m.recall), 11) +
         pad(fixed(m.accuracy), 11) + fixed(m.f1) + "\n";
}

void finish(const ReportDocument& doc, const ExperimentConfig& config, std::ostream& out) {
  if (config.output.empty()) return;
  write_file(config.output, doc.dump(config.timings));
  out << "report written to " << config.output.string() << '\n';
}

}  // namespace

int cmd_crossval(const ExperimentConfig& config, std::ostream& out) {
  const auto corpus = load_labeled(config);
  const auto featurizer = config.make_featurizer();
  Stopwatch total;
  const auto hashed = build_design_matrix(corpus, featurizer);

  std::vector<Algorithm> algorithms = config.all ? all_algorithms() : std::vector{config.algorithm};
  ReportDocument doc("crossval");
  doc.set("config", config.to_json());
  doc.set("corpus", corpus_summary(corpus));

  struct Row {
    Algorithm algorithm;
    MetricsReport mean;
  };
  std::vector<Row> rows;
  ojson results = ojson::array();
  for (const auto alg : algorithms) {
    const auto spec = config.spec_for(alg, config.all);
    Stopwatch sw;
    const auto result =
        cross_validate(hashed, spec, config.featurizer.select_k, cv_options(config));
    doc.add_timing(std::string(to_string(alg)), sw.seconds());
    ojson entry{{"algorithm", std::string(to_string(alg))}, {"spec", to_json(spec)}};
    entry["cv"] = to_json(result);
    results.push_back(std::move(entry));
    rows.push_back({alg, result.mean});
  }
  doc.set("results", std::move(results));

  std::stable_sort(rows.begin(), rows.end(),
                   [](const Row& a, const Row& b) { return a.mean.f1 > b.mean.f1; });
  ojson ranking = ojson::array();
  for (const auto& r : rows) ranking.push_back(std::string(to_string(r.algorithm)));
  doc.set("ranking", std::move(ranking));
  doc.add_timing("total", total.seconds());

  out << config.folds << "-fold cross-validation on " << corpus.size() << " reviews\n"
      << metrics_header();
  for (const auto& r : rows) out << metrics_row(std::string(to_string(r.algorithm)), r.mean);
  finish(doc, config, out);
  return kExitOk;
}

int cmd_curve(const ExperimentConfig& config, std::ostream& out) {
  const auto corpus = load_labeled(config);
  const auto featurizer = config.make_featurizer();
  const auto spec = config.spec_for(config.algorithm);
  Stopwatch sw;
  const auto points = learning_curve(corpus, spec, featurizer, {config.step, cv_options(config)});

  std::string csv = "size,f1\n";
  ojson curve = ojson::array();
  for (const auto& p : points) {
    csv += std::to_string(p.size) + "," + fixed(p.metrics.f1, 6) + "\n";
    ojson point{{"size", p.size}};
    point["metrics"] = to_json(p.metrics);
    curve.push_back(std::move(point));
  }
  ReportDocument doc("curve");
  doc.set("config", config.to_json());
  doc.set("corpus", corpus_summary(corpus));
  doc.set("spec", to_json(spec));
  doc.set("curve", std::move(curve));
  doc.add_timing("total", sw.seconds());

  auto csv_path = config.csv;
  if (csv_path.empty() && !config.output.empty()) csv_path = std::filesystem::path(config.output).replace_extension(".csv");
  if (csv_path.empty()) {
    out << csv;
  } else {
    write_file(csv_path, csv);
    out << "learning curve (" << points.size() << " points) written to " << csv_path.string() << '\n';
  }
  finish(doc, config, out);
  return kExitOk;
}

int cmd_baseline(const ExperimentConfig& config, std::ostream& out) {
  ReportDocument doc("baseline");
  doc.set("config", config.to_json());
  MetricsReport baseline;
  ojson info;
  std::string name;
  if (config.baseline == "random") {
    std::size_t n_pos = config.n_pos;
    std::size_t n_total = config.n_total;
    if (n_pos == 0 || n_total == 0) {
      const auto corpus = load_labeled(config);
      if (n_pos == 0) n_pos = corpus.count(Label::accessibility);
      if (n_total == 0) n_total = corpus.size();
    }
    baseline = random_baseline_metrics(n_pos, n_total);
    info = {{"which", "random"}, {"n_pos", n_pos}, {"n_total", n_total}};
    name = "random";
  } else {
    const auto corpus = load_labeled(config);
    KeywordList keywords = KeywordList::trending();
    if (!config.keywords.empty()) {
      require_file(config.keywords, "keyword file");
      keywords = KeywordList::from_file(config.keywords);
    }
    baseline = evaluate_keyword_baseline(corpus, keywords);
    info = {{"which", "keyword"}, {"keywords", keywords.source()}, {"phrases", keywords.size()}};
    info["corpus"] = corpus_summary(corpus);
    name = "keyword";
  }
  info["metrics"] = to_json(baseline);
  doc.set("baseline", std::move(info));

  out << metrics_header() << metrics_row(name, baseline);
  if (!config.compare.empty()) {
    require_file(config.compare, "model report");
    std::ifstream in(config.compare);
    nlohmann::json report;
    try {
      report = nlohmann::json::parse(in);
    } catch (const std::exception& e) {
      throw ConfigError("cannot parse model report '" + config.compare.string() + "': " + e.what());
    }
    if (!report.contains("results") || report["results"].empty()) {
      throw ConfigError("model report has no results: " + config.compare.string());
    }
    // the explicitly requested algorithm, else the report's top-ranked one
    std::string wanted;
    if (config.is_explicit("algorithm")) {
      wanted = std::string(to_string(config.algorithm));
    } else if (report.contains("ranking") && !report["ranking"].empty()) {
      wanted = report["ranking"][0].get<std::string>();
    } else {
      wanted = report["results"][0]["algorithm"].get<std::string>();
    }
    const nlohmann::json* chosen = nullptr;
    for (const auto& r : report["results"]) {
      if (r["algorithm"] == wanted) chosen = &r;
    }
    if (!chosen) throw ConfigError("model report has no result for " + wanted);
    const auto ours = metrics_from_json((*chosen)["cv"]["mean"]);
    // ratios of the values as displayed
    const auto shown = [](MetricsReport m) {
      m.precision = round_decimals(m.precision, 3);
      m.recall = round_decimals(m.recall, 3);
      m.accuracy = round_decimals(m.accuracy, 3);
      m.f1 = round_decimals(m.f1, 3);
      return m;
    };
    const auto ratios = improvement_ratios(shown(ours), shown(baseline));
    const auto ratio = [](const std::optional<double>& v) { return v ? fixed(*v) + "x" : std::string("n/a"); };
    out << metrics_row(wanted, ours) << pad("improvement", 18) << pad(ratio(ratios.precision), 11)
        << pad(ratio(ratios.recall), 11) << pad(ratio(ratios.accuracy), 11) << ratio(ratios.f1) << '\n';
    ojson comparison{{"algorithm", wanted}};
    comparison["metrics"] = to_json(ours);
    comparison["ratios"] = to_json(ratios);
    doc.set("comparison", std::move(comparison));
  }
  finish(doc, config, out);
  return kExitOk;
}

int cmd_train(const ExperimentConfig& config, std::ostream& out) {
  if (config.output.empty()) throw ConfigError("train needs an output model path");
  const auto corpus = load_labeled(config);
  const auto pipeline = train_pipeline(corpus, config.spec_for(config.algorithm), config.make_featurizer());
  write_file(config.output, serialize_model(pipeline.model) + "\n");
  out << "trained " << to_string(config.algorithm) << " on " << corpus.size() << " reviews ("
      << pipeline.model.features().size() << " features); model written to "
      << config.output.string() << '\n';
  return kExitOk;
}

int cmd_predict(const ExperimentConfig& config, std::ostream& out) {
  require_file(config.model, "model file");
  require_file(config.input, "input file");
  const auto model = load_model(config.model);
  Featurizer featurizer = model.featurizer() ? model.featurizer()->make() : config.make_featurizer();
  if (config.is_explicit("bits") && config.featurizer.dimension() != model.dimension()) {
    throw LearnerError("dimension mismatch: config bits give " +
                       std::to_string(config.featurizer.dimension()) + ", model expects " +
                       std::to_string(model.dimension()));
  }
  if (featurizer.config().dimension() != model.dimension()) {
    throw LearnerError("dimension mismatch: featurizer gives " +
                       std::to_string(featurizer.config().dimension()) + ", model expects " +
                       std::to_string(model.dimension()));
  }
  std::vector<Review> reviews;
  if (std::filesystem::file_size(config.input) > 0) {
    std::vector<std::string> warnings;
    reviews = load_reviews(config.input, format_of(config, config.input), &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
  }
  std::ostringstream lines;
  for (const auto& r : reviews) {
    const double score = predict_score(model, featurizer.featurize(r.text));
    const Label label = score >= model.threshold() ? Label::accessibility : Label::other;
    lines << ojson{{"id", r.id}, {"label", std::string(to_string(label))}, {"score", score}}.dump()
          << '\n';
  }
  if (config.output.empty()) {
    out << lines.str();
  } else {
    write_file(config.output, lines.str());
  }
  return kExitOk;
}

int cmd_features(const ExperimentConfig& config, std::ostream& out) {
  const auto corpus = load_labeled(config);
  const auto featurizer = config.make_featurizer();
  std::optional<TrainedPipeline> pipeline;
  if (!config.model.empty()) {
    require_file(config.model, "model file");
    pipeline = TrainedPipeline{load_model(config.model), std::nullopt};
  } else {
    pipeline = train_pipeline(corpus, config.spec_for(config.algorithm), featurizer);
  }
  const Featurizer used = pipeline->model.featurizer() ? pipeline->model.featurizer()->make() : featurizer;
  const auto report = report_influential_features(
      corpus, pipeline->model, used, pipeline->selector ? &*pipeline->selector : nullptr, config.top_n);

  out << "influential features (" << report.source << (report.fallback ? ", fallback" : "") << ")\n";
  for (std::size_t i = 0; i < report.features.size(); ++i) {
    const auto& f = report.features[i];
    std::string grams;
    for (std::size_t g = 0; g < f.grams.size() && g < 3; ++g) {
      if (g) grams += ", ";
      grams += f.grams[g].first;
    }
    out << pad(std::to_string(i + 1), 5) << pad(fixed(f.score, 4), 12) << grams << '\n';
  }
  ReportDocument doc("features");
  doc.set("config", config.to_json());
  doc.set("features", to_json(report));
  finish(doc, config, out);
  return kExitOk;
}

int cmd_synth(const ExperimentConfig& config, std::ostream& out) {
  if (config.output.empty()) throw ConfigError("synth needs an output path");
  SyntheticOptions options;
  options.per_class = config.per_class;
  options.noise = config.noise;
  options.seed = config.is_explicit("seed") ? config.seed : options.seed;
  const auto corpus = generate_synthetic_corpus(options);
  if (config.output.has_parent_path()) std::filesystem::create_directories(config.output.parent_path());
  save_corpus(corpus, config.output, format_of(config, config.output));
  out << "wrote " << corpus.size() << " synthetic reviews to " << config.output.string() << '\n';
  return kExitOk;
}

int cmd_serve(const ExperimentConfig& config, std::ostream& out) {
  require_file(config.model, "model file");
  auto service = std::make_shared<const ScoringService>(load_model(config.model), config.max_body_bytes);
  ScoringServer server(service);
  const int port = server.bind(config.host, config.port);
  if (port < 0) throw ConfigError("cannot bind " + config.host + ":" + std::to_string(config.port));
  out << "serving on http://" << config.host << ":" << port << std::endl;
  return server.listen() ? kExitOk : kExitFailure;
}

int run_command(const std::string& name, const ExperimentConfig& config, std::ostream& out,
                std::ostream& err) {
  try {
    if (name == "crossval") return cmd_crossval(config, out);
    if (name == "curve") return cmd_curve(config, out);
    if (name == "baseline") return cmd_baseline(config, out);
    if (name == "train") return cmd_train(config, out);
    if (name == "predict") return cmd_predict(config, out);
    if (name == "features") return cmd_features(config, out);
    if (name == "synth") return cmd_synth(config, out);
    if (name == "serve") return cmd_serve(config, out);
    err << "error: unknown command '" << name << "'\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace a11yrev::cli
