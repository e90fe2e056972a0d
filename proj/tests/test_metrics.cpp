#include <doctest.h>

#include <random>

#include "a11yrev/metrics.hpp"

using namespace a11yrev;

namespace {

constexpr Label P = Label::accessibility;
constexpr Label N = Label::other;

MetricsReport report(double p, double r, double f1) {
  MetricsReport m;
  m.precision = p;
  m.recall = r;
  m.f1 = f1;
  return m;
}

}  // namespace

TEST_CASE("confusion_counts") {
  const std::vector<Label> all_pos(6, P);
  CHECK(confusion_counts(all_pos, all_pos) == ConfusionCounts{6, 0, 0, 0});

  // hand tally: positions 0-9
  const std::vector<Label> predicted{P, P, N, N, P, N, P, N, N, P};
  const std::vector<Label> actual{P, N, N, P, P, N, N, P, N, P};
  // tp: 0,4,9  fp: 1,6  fn: 3,7  tn: 2,5,8
  CHECK(confusion_counts(predicted, actual) == ConfusionCounts{3, 3, 2, 2});

  std::vector<Label> complement;
  for (auto l : actual) complement.push_back(l == P ? N : P);
  const auto c = confusion_counts(complement, actual);
  CHECK(c.tp == 0);
  CHECK(c.tn == 0);
  CHECK(c.total() == actual.size());

  CHECK_THROWS_AS(confusion_counts(predicted, all_pos), MetricsError);
  CHECK_THROWS_AS(confusion_counts({}, {}), MetricsError);
}

TEST_CASE("compute_metrics") {
  const auto m = compute_metrics({3, 4, 1, 2});
  CHECK(m.precision == 0.75);
  CHECK(m.recall == 0.6);
  CHECK(m.accuracy == 0.7);
  CHECK(m.f1 == doctest::Approx(2.0 / 3.0));
  CHECK(round_decimals(m.f1, 3) == 0.667);

  const auto perfect = compute_metrics({5, 5, 0, 0});
  CHECK(perfect.precision == 1.0);
  CHECK(perfect.recall == 1.0);
  CHECK(perfect.accuracy == 1.0);
  CHECK(perfect.f1 == 1.0);

  const auto none = compute_metrics({0, 10, 0, 0});
  CHECK(none.precision == 0.0);
  CHECK(none.precision_undefined);
  CHECK(none.recall_undefined);
  CHECK(none.f1_undefined);
  CHECK(none.accuracy == 1.0);

  CHECK_THROWS_AS(compute_metrics({}), MetricsError);
}

TEST_CASE("compute_metrics matches a brute-force oracle") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng() % 60;
    std::vector<Label> predicted, actual;
    for (std::size_t i = 0; i < n; ++i) {
      predicted.push_back(rng() % 2 ? P : N);
      actual.push_back(rng() % 3 ? P : N);
    }
    std::size_t tp = 0, tn = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (predicted[i] == P && actual[i] == P) ++tp;
      if (predicted[i] == N && actual[i] == N) ++tn;
      if (predicted[i] == P && actual[i] == N) ++fp;
      if (predicted[i] == N && actual[i] == P) ++fn;
    }
    const auto counts = confusion_counts(predicted, actual);
    CHECK(counts == ConfusionCounts{tp, tn, fp, fn});
    const auto m = compute_metrics(counts);
    const double p = tp + fp ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    const double r = tp + fn ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    const double acc = static_cast<double>(tp + tn) / static_cast<double>(n);
    const double f1 = p + r > 0 ? 2 * p * r / (p + r) : 0.0;
    CHECK(m.precision == p);
    CHECK(m.recall == r);
    CHECK(m.accuracy == acc);
    CHECK(m.f1 == f1);
    CHECK(m.accuracy >= 0.0);
    CHECK(m.accuracy <= 1.0);
    if (!m.precision_undefined && !m.recall_undefined) {
      CHECK(m.f1 >= std::min(m.precision, m.recall) - 1e-15);
      CHECK(m.f1 <= std::max(m.precision, m.recall) + 1e-15);
    }
  }
}

TEST_CASE("average_reports is the arithmetic mean") {
  const std::vector<MetricsReport> folds{compute_metrics({3, 4, 1, 2}), compute_metrics({5, 5, 0, 0})};
  const auto mean = average_reports(folds);
  CHECK(mean.precision == doctest::Approx((0.75 + 1.0) / 2));
  CHECK(mean.recall == doctest::Approx((0.6 + 1.0) / 2));
  CHECK(mean.accuracy == doctest::Approx((0.7 + 1.0) / 2));
  CHECK(mean.counts == ConfusionCounts{8, 9, 1, 2});
  CHECK_THROWS_AS(average_reports({}), MetricsError);
}

TEST_CASE("cohens_kappa") {
  const std::vector<Label> x{P, N, P, P, N, N, P};
  CHECK(cohens_kappa(x, x) == 1.0);
  const std::vector<Label> constant(5, P);
  CHECK(cohens_kappa(constant, constant) == 1.0);

  // a = both positive, b = first only, c = second only, d = both negative
  std::vector<Label> a, b;
  const auto add = [&](std::size_t count, Label la, Label lb) {
    for (std::size_t i = 0; i < count; ++i) {
      a.push_back(la);
      b.push_back(lb);
    }
  };
  add(20, P, P);
  add(5, P, N);
  add(10, N, P);
  add(15, N, N);
  CHECK(cohens_kappa(a, b) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(round_decimals(cohens_kappa(a, b), 3) == 0.4);

  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<Label> u, v;
    const auto n = 2 + rng() % 30;
    for (std::size_t i = 0; i < n; ++i) {
      u.push_back(rng() % 2 ? P : N);
      v.push_back(rng() % 2 ? P : N);
    }
    const double k = cohens_kappa(u, v);
    CHECK(k >= -1.0);
    CHECK(k <= 1.0);
    CHECK(cohens_kappa(u, u) == 1.0);
  }
  CHECK_THROWS_AS(cohens_kappa(x, constant), MetricsError);
  CHECK_THROWS_AS(cohens_kappa({}, {}), MetricsError);
}

TEST_CASE("improvement ratios truncate to three decimals") {
  const auto ours = report(0.898, 0.916, 0.907);
  const auto keyword = improvement_ratios(ours, report(0.996, 0.405, 0.576));
  CHECK(*keyword.precision == 0.901);
  CHECK(*keyword.recall == 2.261);
  CHECK(*keyword.f1 == 1.574);
  const auto random = improvement_ratios(ours, report(0.012, 0.500, 0.023));
  CHECK(*random.precision == 74.833);
  CHECK(*random.recall == 1.832);
  CHECK(*random.f1 == 39.434);

  const auto same = improvement_ratios(ours, ours);
  CHECK(*same.precision == 1.0);
  CHECK(*same.recall == 1.0);
  CHECK(*same.f1 == 1.0);

  const auto zero = improvement_ratios(ours, report(0.0, 0.5, 0.0));
  CHECK_FALSE(zero.precision.has_value());
  CHECK_FALSE(zero.f1.has_value());
  CHECK(zero.recall.has_value());
}

TEST_CASE("decimal helpers") {
  CHECK(truncate_decimals(1.8319, 3) == 1.831);
  CHECK(truncate_decimals(-1.8319, 3) == -1.831);
  CHECK(truncate_decimals(0.916 / 0.5, 3) == 1.832);
  CHECK(truncate_decimals(2.2619, 3) == 2.261);
  CHECK(round_decimals(0.0124, 3) == 0.012);
  CHECK(round_decimals(0.0125, 3) == 0.013);
  CHECK(f1_score(0.0, 0.0) == 0.0);
}
