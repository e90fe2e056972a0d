#include <doctest.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <set>

#include "a11yrev/eval.hpp"
#include "a11yrev/synthetic.hpp"
#include "support.hpp"

using namespace a11yrev;
using a11yrev::test::review;

namespace {

constexpr Label P = Label::accessibility;
constexpr Label N = Label::other;

Featurizer small_featurizer(std::size_t select_k = 0) {
  FeaturizerConfig c;
  c.bits = 14;
  c.select_k = select_k;
  return Featurizer(c, StopList::english());
}

LabeledCorpus synthetic(std::size_t per_class, double noise, std::uint64_t seed = 5) {
  SyntheticOptions o;
  o.per_class = per_class;
  o.noise = noise;
  o.seed = seed;
  return generate_synthetic_corpus(o);
}

std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    for (std::size_t t = i; t <= j; ++t) r[order[t]] = (static_cast<double>(i + j)) / 2.0;
    i = j + 1;
  }
  return r;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  const auto rx = ranks(x), ry = ranks(y);
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / rx.size();
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / ry.size();
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

TEST_CASE("two-fold CV on a four-review corpus") {
  const LabeledCorpus corpus({review("a", "cannot see the screen", P), review("b", "fun puzzle game", N),
                              review("c", "cannot see the text", P), review("d", "fun racing game", N)});
  CrossValidationOptions o;
  o.k = 2;
  o.threads = 1;
  const auto r = cross_validate(corpus, LearnerSpec::defaults(Algorithm::avg_perceptron), small_featurizer(), o);
  REQUIRE(r.folds.size() == 2);
  for (const auto& f : r.folds) CHECK(f.counts.total() == 2);
  CHECK(r.mean.accuracy == 1.0);

  o.k = 5;
  CHECK_THROWS(cross_validate(corpus, LearnerSpec::defaults(Algorithm::logreg), small_featurizer(), o));
}

TEST_CASE("training rows never include the fold's test rows") {
  const auto corpus = synthetic(40, 0.1);
  std::map<std::size_t, std::set<std::string>> training;
  std::mutex mu;
  CrossValidationOptions o;
  o.k = 5;
  o.seed = 9;
  o.threads = 3;
  o.observer = [&](std::size_t fold, const DesignMatrix& m) {
    std::lock_guard lock(mu);
    training[fold] = std::set<std::string>(m.ids.begin(), m.ids.end());
    CHECK(training[fold].size() == m.size());
  };
  const auto r = cross_validate(corpus, LearnerSpec::defaults(Algorithm::logreg), small_featurizer(200), o);
  REQUIRE(training.size() == 5);

  // each review is held out by exactly one fold, and that fold's test size matches
  std::map<std::string, int> held_out;
  for (const auto& rv : corpus.reviews()) {
    for (std::size_t f = 0; f < 5; ++f) {
      if (!training[f].count(rv.id)) ++held_out[rv.id];
    }
  }
  for (const auto& [id, count] : held_out) CHECK(count == 1);
  CHECK(held_out.size() == corpus.size());
  for (std::size_t f = 0; f < 5; ++f) {
    CHECK(r.folds[f].counts.total() + training[f].size() == corpus.size());
  }
}

TEST_CASE("cross validation is deterministic across thread counts") {
  const auto corpus = synthetic(60, 0.15);
  const auto spec = LearnerSpec::defaults(Algorithm::boosted_trees, 3).with("n_tree", 20);
  CrossValidationOptions o;
  o.k = 4;
  o.seed = 2;
  o.threads = 1;
  const auto a = cross_validate(corpus, spec, small_featurizer(300), o);
  o.threads = 4;
  const auto b = cross_validate(corpus, spec, small_featurizer(300), o);
  CHECK(to_json(a).dump() == to_json(b).dump());
  o.seed = 3;
  const auto c = cross_validate(corpus, spec, small_featurizer(300), o);
  CHECK(c.folds.size() == 4);
}

TEST_CASE("curve sizes") {
  CHECK(curve_sizes(1000, 100) == std::vector<std::size_t>{100, 200, 300, 400, 500, 600, 700, 800, 900, 1000});
  CHECK(curve_sizes(250, 100) == std::vector<std::size_t>{100, 200, 250});
  for (std::size_t n = 200; n < 1500; n += 37) {
    const auto s = curve_sizes(n, 100);
    CHECK(s.size() == (n + 99) / 100);
    CHECK(s.back() == n);
    CHECK(std::is_sorted(s.begin(), s.end()));
  }
  CHECK_THROWS_AS(curve_sizes(150, 100), EvalError);
  CHECK_THROWS_AS(curve_sizes(100, 0), EvalError);
}

TEST_CASE("learning curve rises with more data") {
  const auto corpus = synthetic(150, 0.2, 11);
  CurveOptions o;
  o.step = 25;
  o.cv.k = 5;
  o.cv.seed = 1;
  o.cv.threads = 1;
  const auto curve = learning_curve(corpus, LearnerSpec::defaults(Algorithm::logreg), small_featurizer(), o);
  REQUIRE(curve.size() == 12);
  std::vector<double> sizes, f1;
  for (const auto& p : curve) {
    sizes.push_back(static_cast<double>(p.size));
    f1.push_back(p.metrics.f1);
  }
  CHECK(curve.back().size == corpus.size());
  CHECK(spearman(sizes, f1) > 0.8);

  o.step = 400;
  CHECK_THROWS_AS(learning_curve(corpus, LearnerSpec::defaults(Algorithm::logreg), small_featurizer(), o),
                  EvalError);
}

TEST_CASE("grid expansion and search") {
  const auto base = LearnerSpec::defaults(Algorithm::boosted_trees, 1);
  GridSpec grid{{{"n_tree", {10, 30}}, {"learning_rate", {0.1, 0.3}}}};
  const auto specs = expand_grid(base, grid);
  REQUIRE(specs.size() == 4);
  CHECK(specs[0].get("n_tree") == 10);
  CHECK(specs[0].get("learning_rate") == 0.1);
  CHECK(specs[1].get("learning_rate") == 0.3);
  CHECK(specs[2].get("n_tree") == 30);

  const auto corpus = synthetic(50, 0.25, 4);
  CrossValidationOptions o;
  o.k = 3;
  o.threads = 1;
  const auto result = grid_search(corpus, base, grid, small_featurizer(), o);
  REQUIRE(result.cells.size() == 4);
  std::size_t best = 0;
  for (std::size_t i = 1; i < 4; ++i) {
    if (result.cells[i].result->mean.f1 > result.cells[best].result->mean.f1) best = i;
  }
  CHECK(result.best == best);
  CHECK(result.best_spec() == specs[best]);

  const auto single = grid_search(corpus, base, GridSpec{{{"n_tree", {15}}}}, small_featurizer(), o);
  CHECK(single.best_spec() == base.with("n_tree", 15));

  const auto mixed = grid_search(corpus, base, GridSpec{{{"n_tree", {0, 15}}}}, small_featurizer(), o);
  CHECK_FALSE(mixed.cells[0].result.has_value());
  CHECK_FALSE(mixed.cells[0].error.empty());
  CHECK(mixed.best == 1);

  CHECK_THROWS_AS(grid_search(corpus, base, GridSpec{{{"n_tree", {0, -1}}}}, small_featurizer(), o), EvalError);
  CHECK_THROWS_AS(expand_grid(base, GridSpec{{{"no_such_parameter", {1}}}}), LearnerError);
}

TEST_CASE("influential features surface a planted term") {
  std::vector<Review> rows;
  const auto neg = synthetic(100, 0.0, 8);
  std::size_t i = 0;
  for (const auto& r : neg.reviews()) {
    auto copy = r;
    copy.label = (i % 2 == 0) ? P : N;
    if (copy.label == P) copy.text += " blind";
    rows.push_back(copy);
    ++i;
  }
  const LabeledCorpus corpus(rows);
  const auto featurizer = small_featurizer(500);
  const auto pipeline = train_pipeline(corpus, LearnerSpec::defaults(Algorithm::boosted_trees, 1), featurizer);
  REQUIRE(pipeline.selector.has_value());
  CHECK(pipeline.model.featurizer().has_value());

  const auto report = report_influential_features(corpus, pipeline.model, featurizer, &*pipeline.selector, 5);
  CHECK(report.source == "importance");
  CHECK_FALSE(report.fallback);
  bool found = false;
  for (const auto& f : report.features) {
    for (const auto& [gram, count] : f.grams) found = found || gram == "blind";
  }
  CHECK(found);

  const auto linear = train_pipeline(corpus, LearnerSpec::defaults(Algorithm::logreg), featurizer);
  const auto mi = report_influential_features(corpus, linear.model, featurizer, nullptr, 5);
  CHECK(mi.source == "mutual_information");
  CHECK(mi.fallback);
  REQUIRE(!mi.features.empty());
  CHECK(std::is_sorted(mi.features.begin(), mi.features.end(),
                       [](const auto& a, const auto& b) { return a.score > b.score; }));

  CHECK_THROWS(report_influential_features(LabeledCorpus(), linear.model, featurizer, nullptr, 5));
}

TEST_CASE("report documents") {
  ReportDocument doc("crossval");
  doc.set("metrics", to_json(compute_metrics({3, 4, 1, 2})));
  doc.add_timing("total", 1.25);
  const auto with = nlohmann::json::parse(doc.dump(true));
  const auto without = nlohmann::json::parse(doc.dump(false));
  CHECK(with.contains("timings"));
  CHECK_FALSE(without.contains("timings"));
  CHECK(without.at("kind") == "crossval");
  CHECK(without.at("format_version") == kReportFormatVersion);
  CHECK(doc.dump(false).back() == '\n');

  const auto m = metrics_from_json(without.at("metrics"));
  CHECK(m.precision == 0.75);
  CHECK(m.counts == ConfusionCounts{3, 4, 1, 2});
}
