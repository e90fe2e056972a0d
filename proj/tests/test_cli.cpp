#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "a11yrev/cli.hpp"
#include "a11yrev/eval.hpp"
#include "a11yrev/synthetic.hpp"
#include "support.hpp"

using namespace a11yrev;
using namespace a11yrev::cli;
using a11yrev::test::read_text;
using a11yrev::test::TempDir;
using a11yrev::test::write_text;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(const std::string& command, const Settings& flags, const Settings& file = {}) {
  const auto config = resolve_config(file, flags);
  std::ostringstream out, err;
  const int code = run_command(command, config, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path write_corpus(const TempDir& dir, std::size_t per_class = 40, double noise = 0.05) {
  SyntheticOptions o;
  o.per_class = per_class;
  o.noise = noise;
  const auto path = dir / "corpus.csv";
  save_corpus(generate_synthetic_corpus(o), path, CorpusFormat::csv);
  return path;
}

std::size_t count_lines(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

}  // namespace

TEST_CASE("settings parsing") {
  const auto s = parse_settings("# comment\n corpus = data/x.csv \n\nfolds=5 # trailing\nhp.n_tree = 50\n");
  CHECK(s.at("corpus") == "data/x.csv");
  CHECK(s.at("folds") == "5");
  CHECK(s.at("hp.n_tree") == "50");
  CHECK(s.size() == 3);
  CHECK_THROWS_AS(parse_settings("no equals sign\n"), ConfigError);
  CHECK_THROWS_AS(read_settings_file("/nonexistent/a11yrev.conf"), ConfigError);
}

TEST_CASE("config precedence and validation") {
  const auto defaults = resolve_config({}, {});
  CHECK(defaults.folds == 10);
  CHECK(defaults.algorithm == Algorithm::boosted_trees);
  CHECK(defaults.featurizer.bits == 18);
  CHECK(defaults.explicit_keys.empty());

  const auto c = resolve_config({{"folds", "5"}, {"seed", "7"}, {"algorithm", "logreg"}},
                                {{"folds", "3"}, {"hp.L1_weight", "0.5"}});
  CHECK(c.folds == 3);
  CHECK(c.seed == 7);
  CHECK(c.algorithm == Algorithm::logreg);
  CHECK(c.spec_for(Algorithm::logreg).get("L1_weight") == 0.5);
  CHECK(c.is_explicit("folds"));
  CHECK_FALSE(c.is_explicit("bits"));

  CHECK_THROWS_AS(resolve_config({{"flods", "3"}}, {}), ConfigError);
  CHECK_THROWS_AS(resolve_config({}, {{"folds", "three"}}), ConfigError);
  CHECK_THROWS_AS(resolve_config({}, {{"timings", "maybe"}}), ConfigError);
  CHECK_THROWS(resolve_config({}, {{"algorithm", "knn"}}));

  // unknown hyperparameters are an error for a single algorithm, skipped with all
  const auto hp = resolve_config({}, {{"hp.n_tree", "5"}});
  CHECK_THROWS(hp.spec_for(Algorithm::logreg));
  CHECK(hp.spec_for(Algorithm::logreg, true) == LearnerSpec::defaults(Algorithm::logreg, hp.seed));
  CHECK(hp.spec_for(Algorithm::boosted_trees).get("n_tree") == 5);
}

TEST_CASE("exit codes") {
  TempDir dir("cli-exit");
  const auto missing = (dir / "absent.csv").string();
  const auto r = run("crossval", {{"corpus", missing}});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find(missing) != std::string::npos);

  CHECK(run("nonsense", {}).code == kExitUsage);
  CHECK(run("train", {{"corpus", write_corpus(dir).string()}}).code == kExitUsage);

  write_text(dir / "bad.csv", "id,app_name,app_category,text,label\n1,a,b,hello,maybe\n");
  CHECK(run("crossval", {{"corpus", (dir / "bad.csv").string()}}).code == kExitFailure);
}

TEST_CASE("crossval reports are byte-identical without timings") {
  TempDir dir("cli-cv");
  const auto corpus = write_corpus(dir);
  Settings flags{{"corpus", corpus.string()}, {"folds", "4"}, {"bits", "14"},
                 {"select_k", "300"}, {"timings", "false"}, {"algorithm", "logreg"}};
  flags["output"] = (dir / "a.json").string();
  flags["threads"] = "1";
  REQUIRE(run("crossval", flags).code == kExitOk);
  flags["output"] = (dir / "b.json").string();
  flags["threads"] = "3";
  REQUIRE(run("crossval", flags).code == kExitOk);
  const auto a = read_text(dir / "a.json");
  CHECK(a == read_text(dir / "b.json"));
  const auto doc = nlohmann::json::parse(a);
  CHECK(doc.at("kind") == "crossval");
  CHECK_FALSE(doc.contains("timings"));
  CHECK(doc.at("ranking").size() == 1);
  CHECK(doc.at("results")[0].at("cv").at("folds").size() == 4);

  flags["timings"] = "true";
  flags["output"] = (dir / "c.json").string();
  REQUIRE(run("crossval", flags).code == kExitOk);
  CHECK(nlohmann::json::parse(read_text(dir / "c.json")).contains("timings"));
}

TEST_CASE("curve writes one CSV row per size") {
  TempDir dir("cli-curve");
  const auto corpus = write_corpus(dir, 50);
  const auto r = run("curve", {{"corpus", corpus.string()}, {"algorithm", "avg_perceptron"}, {"step", "30"},
                               {"folds", "3"}, {"bits", "14"}, {"select_k", "0"},
                               {"csv", (dir / "curve.csv").string()}});
  REQUIRE(r.code == kExitOk);
  const auto csv = read_text(dir / "curve.csv");
  CHECK(csv.rfind("size,f1\n", 0) == 0);
  CHECK(count_lines(csv) == 1 + curve_sizes(100, 30).size());
  CHECK(run("curve", {{"corpus", corpus.string()}, {"step", "80"}}).code == kExitFailure);
}

TEST_CASE("baseline command") {
  TempDir dir("cli-baseline");
  const auto r = run("baseline", {{"baseline", "random"}, {"n_pos", "2663"}, {"n_total", "214053"},
                                  {"output", (dir / "random.json").string()}, {"timings", "false"}});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.find("0.012      0.500      0.500      0.023") != std::string::npos);

  // a hand-made model report to compare against
  nlohmann::ordered_json report{{"kind", "crossval"}, {"ranking", {"boosted_trees"}}};
  nlohmann::ordered_json entry{{"algorithm", "boosted_trees"}};
  auto mean = to_json(compute_metrics({9, 9, 1, 1}));
  mean["precision"] = 0.898;
  mean["recall"] = 0.916;
  mean["f1"] = 0.907;
  entry["cv"] = {{"mean", mean}};
  report["results"] = {entry};
  write_text(dir / "model.json", report.dump());

  const auto c = run("baseline", {{"baseline", "random"}, {"n_pos", "2663"}, {"n_total", "214053"},
                                  {"compare", (dir / "model.json").string()},
                                  {"output", (dir / "cmp.json").string()}});
  REQUIRE(c.code == kExitOk);
  CHECK(c.out.find("74.833x") != std::string::npos);
  CHECK(c.out.find("1.832x") != std::string::npos);
  CHECK(c.out.find("39.434x") != std::string::npos);
  const auto doc = nlohmann::json::parse(read_text(dir / "cmp.json"));
  CHECK(doc.at("comparison").at("ratios").at("f1") == 39.434);

  CHECK(run("baseline", {{"baseline", "random"}, {"n_pos", "1"}, {"n_total", "2"},
                         {"compare", (dir / "none.json").string()}})
            .code == kExitUsage);

  const auto corpus = write_corpus(dir);
  write_text(dir / "kw.txt", "# none of these occur\nzzzqqq\n");
  const auto k = run("baseline", {{"corpus", corpus.string()}, {"keywords", (dir / "kw.txt").string()}});
  CHECK(k.code == kExitOk);
  CHECK(k.out.find("keyword") != std::string::npos);
}

TEST_CASE("train then predict") {
  TempDir dir("cli-predict");
  const auto corpus = write_corpus(dir, 250, 0.0);
  const auto model = (dir / "model.json").string();
  REQUIRE(run("train", {{"corpus", corpus.string()}, {"bits", "14"}, {"select_k", "400"}, {"output", model}})
              .code == kExitOk);

  const auto p = run("predict", {{"model", model}, {"input", corpus.string()}});
  REQUIRE(p.code == kExitOk);
  const auto reviews = load_corpus(corpus, CorpusFormat::csv);
  std::istringstream lines(p.out);
  std::string line;
  std::size_t n = 0, agree = 0;
  while (std::getline(lines, line)) {
    const auto j = nlohmann::json::parse(line);
    CHECK(j.at("id") == reviews[n].id);
    const double score = j.at("score");
    CHECK(score >= 0.0);
    CHECK(score <= 1.0);
    agree += j.at("label") == std::string(to_string(reviews.label(n)));
    ++n;
  }
  CHECK(n == reviews.size());
  CHECK(static_cast<double>(agree) >= 0.99 * static_cast<double>(n));

  write_text(dir / "empty.csv", "");
  const auto e = run("predict", {{"model", model}, {"input", (dir / "empty.csv").string()}});
  CHECK(e.code == kExitOk);
  CHECK(e.out.empty());

  const auto mismatch = run("predict", {{"model", model}, {"input", corpus.string()}, {"bits", "16"}});
  CHECK(mismatch.code == kExitFailure);
  CHECK(mismatch.err.find("dimension") != std::string::npos);

  write_text(dir / "broken.json", "{\"format_version\": 1");
  CHECK(run("predict", {{"model", (dir / "broken.json").string()}, {"input", corpus.string()}}).code ==
        kExitFailure);

  const auto f = run("features", {{"corpus", corpus.string()}, {"model", model}, {"top_n", "5"}});
  CHECK(f.code == kExitOk);
  CHECK(f.out.find("influential features (importance)") != std::string::npos);
}

TEST_CASE("executable parses flags and the config environment variable") {
  TempDir dir("cli-exe");
  const std::string exe = A11YREV_CLI_PATH;
  const auto shell = [&](const std::string& cmd) {
    const int status = std::system((cmd + " >" + (dir / "out.txt").string() + " 2>&1").c_str());
    return WEXITSTATUS(status);
  };
  CHECK(shell(exe + " --help") == 0);
  CHECK(shell(exe + " crossval --no-such-flag") == 2);
  CHECK(shell(exe + " crossval --corpus " + (dir / "missing.csv").string()) == 2);

  const auto corpus = (dir / "synth.csv").string();
  REQUIRE(shell(exe + " synth --per-class 20 --output " + corpus) == 0);
  write_text(dir / "run.conf", "baseline = random\nn_pos = 1\nn_total = 4\n");
  CHECK(shell("A11YREV_CONFIG=" + (dir / "run.conf").string() + " " + exe + " baseline") == 0);
  CHECK(read_text(dir / "out.txt").find("0.250") != std::string::npos);
  write_text(dir / "bad.conf", "colour = blue\n");
  CHECK(shell("A11YREV_CONFIG=" + (dir / "bad.conf").string() + " " + exe + " baseline") == 2);
  CHECK(shell(exe + " baseline --config " + (dir / "run.conf").string() + " --n-total 2") == 0);
  CHECK(read_text(dir / "out.txt").find("0.500      0.500      0.500      0.500") != std::string::npos);
}
