#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "a11yrev/eval.hpp"
#include "a11yrev/random.hpp"

namespace a11yrev {

namespace {

LabeledCorpus labels_only(const DesignMatrix& m) {
  std::vector<Review> reviews;
  reviews.reserve(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    Review r;
    r.id = m.ids[i];
    r.text = "-";
    r.label = m.labels[i];
    reviews.push_back(std::move(r));
  }
  return LabeledCorpus(std::move(reviews));
}

DesignMatrix select_rows(const DesignMatrix& m, const SelectorModel& selector) {
  DesignMatrix out = m;
  for (auto& row : out.rows) row = apply_selector(row, selector);
  return out;
}

MetricsReport evaluate_fold(const DesignMatrix& hashed, const FoldPlan& plan, std::size_t fold,
                            const LearnerSpec& spec, std::size_t select_k,
                            const FoldObserver& observer) {
  const auto train_rows = plan.train_rows(fold);
  const auto test_rows = plan.test_rows(fold);
  DesignMatrix train = hashed.subset(train_rows);
  DesignMatrix test = hashed.subset(test_rows);
  if (observer) observer(fold, train);
  if (select_k > 0) {
    const auto selector = fit_mi_selector(train, select_k);
    train = select_rows(train, selector);
    test = select_rows(test, selector);
  }
  const auto model = fit(spec, train);
  std::vector<Label> predicted;
  predicted.reserve(test.size());
  for (const auto& row : test.rows) predicted.push_back(predict_label(model, row));
  return compute_metrics(confusion_counts(predicted, test.labels));
}

}  // namespace

CrossValidationResult cross_validate(const DesignMatrix& hashed, const LearnerSpec& spec,
                                     std::size_t select_k, const CrossValidationOptions& options) {
  spec.validate();
  if (hashed.empty()) throw EvalError("cannot cross-validate an empty corpus");
  const auto plan = stratified_folds(labels_only(hashed), options.k, options.seed);

  CrossValidationResult result;
  result.folds.resize(plan.k());
  std::vector<std::exception_ptr> errors(plan.k());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t f = next++; f < plan.k(); f = next++) {
      try {
        result.folds[f] = evaluate_fold(hashed, plan, f, spec, select_k, options.observer);
      } catch (...) {
        errors[f] = std::current_exception();
      }
    }
  };
  std::size_t threads = options.threads;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, plan.k());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  result.mean = average_reports(result.folds);
  return result;
}

CrossValidationResult cross_validate(const LabeledCorpus& corpus, const LearnerSpec& spec,
                                     const Featurizer& featurizer,
                                     const CrossValidationOptions& options) {
  if (corpus.empty()) throw EvalError("cannot cross-validate an empty corpus");
  return cross_validate(build_design_matrix(corpus, featurizer), spec,
                        featurizer.config().select_k, options);
}

std::vector<std::size_t> curve_sizes(std::size_t n, std::size_t step) {
  if (step == 0) throw EvalError("learning-curve step must be positive");
  if (n < 2 * step) {
    throw EvalError("learning curve needs at least " + std::to_string(2 * step) +
                    " reviews for step " + std::to_string(step) + ", corpus has " +
                    std::to_string(n));
  }
  std::vector<std::size_t> sizes;
  for (std::size_t s = step; s < n; s += step) sizes.push_back(s);
  sizes.push_back(n);
  return sizes;
}

std::vector<CurvePoint> learning_curve(const LabeledCorpus& corpus, const LearnerSpec& spec,
                                       const Featurizer& featurizer, const CurveOptions& options) {
  const auto sizes = curve_sizes(corpus.size(), options.step);
  const auto hashed = build_design_matrix(corpus, featurizer);

  std::vector<std::size_t> pos;
  std::vector<std::size_t> neg;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    (corpus.label(i) == Label::accessibility ? pos : neg).push_back(i);
  }
  Rng rng(derive_seed(options.cv.seed, 0x6375727665ULL));
  rng.shuffle(std::span(pos));
  rng.shuffle(std::span(neg));

  std::vector<CurvePoint> points;
  for (const auto size : sizes) {
    // Half from each class where possible; a short class is topped up from the other.
    std::size_t take_pos = std::min(pos.size(), (size + 1) / 2);
    std::size_t take_neg = std::min(neg.size(), size - take_pos);
    take_pos = size - take_neg;
    std::vector<std::size_t> rows(pos.begin(), pos.begin() + static_cast<std::ptrdiff_t>(take_pos));
    rows.insert(rows.end(), neg.begin(), neg.begin() + static_cast<std::ptrdiff_t>(take_neg));
    std::sort(rows.begin(), rows.end());
    const auto result =
        cross_validate(hashed.subset(rows), spec, featurizer.config().select_k, options.cv);
    points.push_back({size, result.mean});
  }
  return points;
}

std::vector<LearnerSpec> expand_grid(const LearnerSpec& base, const GridSpec& grid) {
  if (grid.parameters.empty()) throw EvalError("grid has no parameters");
  for (const auto& [name, values] : grid.parameters) {
    if (values.empty()) throw EvalError("grid parameter '" + name + "' has no candidate values");
  }
  std::vector<LearnerSpec> cells{base};
  for (const auto& [name, values] : grid.parameters) {
    std::vector<LearnerSpec> next;
    next.reserve(cells.size() * values.size());
    for (const auto& cell : cells) {
      for (const auto v : values) next.push_back(cell.with(name, v));
    }
    cells = std::move(next);
  }
  return cells;
}

GridResult grid_search(const LabeledCorpus& corpus, const LearnerSpec& base, const GridSpec& grid,
                       const Featurizer& featurizer, const CrossValidationOptions& options) {
  const auto specs = expand_grid(base, grid);
  if (corpus.empty()) throw EvalError("cannot grid-search an empty corpus");
  const auto hashed = build_design_matrix(corpus, featurizer);
  GridResult out;
  std::optional<double> best_f1;
  for (const auto& spec : specs) {
    GridCell cell{spec, std::nullopt, {}};
    try {
      cell.result = cross_validate(hashed, spec, featurizer.config().select_k, options);
      if (!best_f1 || cell.result->mean.f1 > *best_f1) {
        best_f1 = cell.result->mean.f1;
        out.best = out.cells.size();
      }
    } catch (const std::exception& e) {
      cell.error = e.what();
    }
    out.cells.push_back(std::move(cell));
  }
  if (!best_f1) throw EvalError("every grid cell failed; first error: " + out.cells.front().error);
  return out;
}

TrainedPipeline train_pipeline(const LabeledCorpus& corpus, const LearnerSpec& spec,
                               const Featurizer& featurizer) {
  if (corpus.empty()) throw EvalError("cannot train on an empty corpus");
  auto matrix = build_design_matrix(corpus, featurizer);
  std::optional<SelectorModel> selector;
  if (featurizer.config().select_k > 0) {
    selector = fit_mi_selector(matrix, featurizer.config().select_k);
    matrix = select_rows(matrix, *selector);
  }
  auto model = fit(spec, matrix).with_featurizer(
      ModelFeaturizer{featurizer.config(), featurizer.stops().words()});
  return TrainedPipeline{std::move(model), std::move(selector)};
}

}  // namespace a11yrev
