// Tree ensembles: a bagged random-split decision forest and gradient-boosted
// regression trees on the logistic loss.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "a11yrev/detail/training.hpp"
#include "a11yrev/random.hpp"

namespace a11yrev::detail {

namespace {

std::int32_t add_leaf(Tree& tree, double value) {
  tree.feature.push_back(-1);
  tree.threshold.push_back(0.0);
  tree.left.push_back(-1);
  tree.right.push_back(-1);
  tree.value.push_back(value);
  return static_cast<std::int32_t>(tree.feature.size() - 1);
}

void make_split(Tree& tree, std::int32_t node, std::uint32_t column, double threshold) {
  tree.feature[node] = static_cast<std::int32_t>(column);
  tree.threshold[node] = threshold;
  tree.left[node] = add_leaf(tree, 0.0);
  tree.right[node] = add_leaf(tree, 0.0);
}

double gini(double pos, double total) {
  if (total <= 0) return 0.0;
  const double p = pos / total;
  return 2.0 * p * (1.0 - p);
}

// ---- decision forest --------------------------------------------------------

struct ForestBuilder {
  const CompactData& data;
  int max_depth;
  std::size_t candidates;
  std::size_t min_leaf;
  Rng& rng;
  Tree tree;

  struct Pending {
    std::int32_t node;
    std::vector<std::size_t> rows;
    int depth;
  };

  Tree build(std::vector<std::size_t> sample) {
    tree = Tree{};
    add_leaf(tree, 0.0);
    std::vector<Pending> stack;
    stack.push_back({0, std::move(sample), 0});
    while (!stack.empty()) {
      Pending p = std::move(stack.back());
      stack.pop_back();
      expand(p, stack);
    }
    return std::move(tree);
  }

  void expand(Pending& p, std::vector<Pending>& stack) {
    const auto& rows = p.rows;
    double pos = 0;
    for (auto r : rows) pos += data.labels[r];
    const auto total = static_cast<double>(rows.size());
    tree.value[p.node] = total > 0 ? pos / total : 0.5;
    if (pos == 0 || pos == total || p.depth >= max_depth || rows.size() < 2 * min_leaf) return;

    std::vector<std::size_t> nonempty;
    for (auto r : rows) {
      if (!data.rows[r].empty()) nonempty.push_back(r);
    }
    if (nonempty.empty()) return;

    const double parent = gini(pos, total);
    double best_gain = 0.0;
    std::uint32_t best_column = 0;
    double best_threshold = 0.0;
    bool found = false;
    for (std::size_t c = 0; c < candidates; ++c) {
      // candidate: a random present feature of a random row, thresholded
      // halfway between 0 and that row's value
      const auto& row = data.rows[nonempty[rng.below(nonempty.size())]];
      const auto& entry = row[rng.below(row.size())];
      const double threshold = entry.value / 2.0;
      double left_n = 0, left_pos = 0;
      for (auto r : rows) {
        if (row_value(data.rows[r], entry.column) <= threshold) {
          left_n += 1;
          left_pos += data.labels[r];
        }
      }
      const double right_n = total - left_n;
      if (left_n < static_cast<double>(min_leaf) || right_n < static_cast<double>(min_leaf)) continue;
      const double gain = parent - (left_n / total) * gini(left_pos, left_n) -
                          (right_n / total) * gini(pos - left_pos, right_n);
      if (gain > best_gain + 1e-12) {
        best_gain = gain;
        best_column = entry.column;
        best_threshold = threshold;
        found = true;
      }
    }
    if (!found) return;
    make_split(tree, p.node, best_column, best_threshold);
    std::vector<std::size_t> left_rows;
    std::vector<std::size_t> right_rows;
    for (auto r : rows) {
      (row_value(data.rows[r], best_column) <= best_threshold ? left_rows : right_rows).push_back(r);
    }
    stack.push_back({tree.right[p.node], std::move(right_rows), p.depth + 1});
    stack.push_back({tree.left[p.node], std::move(left_rows), p.depth + 1});
  }
};

// ---- boosted trees ----------------------------------------------------------

constexpr double kHessianFloor = 1e-12;
constexpr double kLeafRegularizer = 1e-6;

struct Split {
  double gain = 0.0;
  std::uint32_t column = 0;
  double threshold = 0.0;
  bool valid = false;
};

struct Candidate {
  std::int32_t node;
  std::vector<std::size_t> rows;
  double grad_sum;
  double hess_sum;
  Split split;
};

class HistogramSplitter {
 public:
  HistogramSplitter(const CompactData& data, std::size_t min_leaf)
      : data_(data), min_leaf_(min_leaf), counts_(data.columns(), 0), offsets_(data.columns() + 1, 0) {}

  Split best_split(const std::vector<std::size_t>& rows, std::span<const double> g,
                   std::span<const double> h, double g_total, double h_total) {
    Split best;
    const auto n_total = static_cast<double>(rows.size());
    if (rows.size() < 2 * min_leaf_) return best;
    // bucket the node's non-zero entries by column (counting sort)
    touched_.clear();
    std::size_t nnz = 0;
    for (auto r : rows) {
      for (const auto& e : data_.rows[r]) {
        if (counts_[e.column]++ == 0) touched_.push_back(e.column);
        ++nnz;
      }
    }
    std::sort(touched_.begin(), touched_.end());
    std::size_t offset = 0;
    for (auto c : touched_) {
      offsets_[c] = offset;
      offset += counts_[c];
    }
    entries_.resize(nnz);
    for (auto r : rows) {
      for (const auto& e : data_.rows[r]) entries_[offsets_[e.column]++] = {e.value, g[r], h[r]};
    }
    const double parent_score = g_total * g_total / (h_total + kLeafRegularizer);
    std::size_t begin = 0;
    for (auto c : touched_) {
      const std::size_t end = begin + counts_[c];
      counts_[c] = 0;
      consider_column(c, begin, end, g_total, h_total, n_total, parent_score, best);
      begin = end;
    }
    return best;
  }

 private:
  struct Entry {
    double value;
    double g;
    double h;
  };

  void consider_column(std::uint32_t column, std::size_t begin, std::size_t end, double g_total,
                       double h_total, double n_total, double parent_score, Split& best) {
    auto first = entries_.begin() + static_cast<std::ptrdiff_t>(begin);
    auto last = entries_.begin() + static_cast<std::ptrdiff_t>(end);
    std::sort(first, last, [](const Entry& a, const Entry& b) { return a.value < b.value; });
    // bins by distinct value; rows absent from the column sit in the 0 bin
    double g_nz = 0, h_nz = 0;
    for (auto it = first; it != last; ++it) {
      g_nz += it->g;
      h_nz += it->h;
    }
    const double zero_n = n_total - static_cast<double>(end - begin);
    bins_.clear();
    bool zero_added = zero_n == 0;
    for (auto it = first; it != last;) {
      const double v = it->value;
      if (!zero_added && v > 0) {
        bins_.push_back({0.0, g_total - g_nz, h_total - h_nz, zero_n});
        zero_added = true;
      }
      Bin bin{v, 0, 0, 0};
      for (; it != last && it->value == v; ++it) {
        bin.g += it->g;
        bin.h += it->h;
        bin.n += 1;
      }
      bins_.push_back(bin);
    }
    if (!zero_added) bins_.push_back({0.0, g_total - g_nz, h_total - h_nz, zero_n});

    double gl = 0, hl = 0, nl = 0;
    for (std::size_t i = 0; i + 1 < bins_.size(); ++i) {
      gl += bins_[i].g;
      hl += bins_[i].h;
      nl += bins_[i].n;
      const double nr = n_total - nl;
      if (nl < static_cast<double>(min_leaf_) || nr < static_cast<double>(min_leaf_)) continue;
      const double gr = g_total - gl;
      const double hr = h_total - hl;
      const double gain = gl * gl / (hl + kLeafRegularizer) + gr * gr / (hr + kLeafRegularizer) - parent_score;
      if (gain > best.gain + 1e-12) {
        best = {gain, column, 0.5 * (bins_[i].value + bins_[i + 1].value), true};
      }
    }
  }

  struct Bin {
    double value;
    double g;
    double h;
    double n;
  };

  const CompactData& data_;
  std::size_t min_leaf_;
  std::vector<std::size_t> counts_;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> touched_;
  std::vector<Entry> entries_;
  std::vector<Bin> bins_;
};

double leaf_loss(const std::vector<std::size_t>& rows, std::span<const double> scores,
                 const std::vector<int>& labels, double shift) {
  double loss = 0.0;
  for (auto r : rows) {
    const double y = labels[r] == 1 ? 1.0 : -1.0;
    loss += softplus(-y * (scores[r] + shift));
  }
  return loss;
}

double mean_loss(std::span<const double> scores, const std::vector<int>& labels) {
  double loss = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const double y = labels[i] == 1 ? 1.0 : -1.0;
    loss += softplus(-y * scores[i]);
  }
  return loss / static_cast<double>(scores.size());
}

}  // namespace

ForestParams train_forest(const CompactData& data, const LearnerSpec& spec) {
  const auto n_trees = static_cast<std::size_t>(spec.get("n_estimators"));
  ForestParams out;
  for (std::size_t t = 0; t < n_trees; ++t) {
    Rng rng(derive_seed(spec.seed, t));
    // bootstrap sample
    std::vector<std::size_t> sample(data.size());
    for (auto& s : sample) s = rng.below(data.size());
    ForestBuilder builder{data,
                          static_cast<int>(spec.get("max_depth")),
                          static_cast<std::size_t>(spec.get("n_random_splits")),
                          static_cast<std::size_t>(spec.get("min_samples_leaf")),
                          rng,
                          {}};
    out.trees.push_back(builder.build(std::move(sample)));
  }
  return out;
}

BoostedParams train_boosted(const CompactData& data, const LearnerSpec& spec,
                            std::vector<double>* stage_loss) {
  const auto n_trees = static_cast<std::size_t>(spec.get("n_tree"));
  const auto max_leaves = static_cast<std::size_t>(spec.get("max_n_leaf"));
  const auto min_leaf = static_cast<std::size_t>(spec.get("min_samples_leaf"));
  const double shrinkage = spec.get("learning_rate");
  const std::size_t n = data.size();

  BoostedParams out;
  out.importance.assign(data.columns(), 0.0);
  const double pos = std::accumulate(data.labels.begin(), data.labels.end(), 0.0);
  out.base_score = std::log(pos / (static_cast<double>(n) - pos));
  std::vector<double> scores(n, out.base_score);
  std::vector<double> g(n), h(n);
  if (stage_loss) {
    stage_loss->clear();
    stage_loss->push_back(mean_loss(scores, data.labels));
  }
  HistogramSplitter splitter(data, min_leaf);
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});

  for (std::size_t t = 0; t < n_trees; ++t) {
    double g_total = 0, h_total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double p = sigmoid(scores[i]);
      g[i] = p - data.labels[i];
      h[i] = std::max(p * (1.0 - p), kHessianFloor);
      g_total += g[i];
      h_total += h[i];
    }
    Tree tree;
    add_leaf(tree, 0.0);
    std::vector<Candidate> leaves;
    leaves.push_back({0, all, g_total, h_total, splitter.best_split(all, g, h, g_total, h_total)});
    // best-first growth up to max_leaves
    while (leaves.size() < max_leaves) {
      std::size_t pick = leaves.size();
      for (std::size_t i = 0; i < leaves.size(); ++i) {
        if (leaves[i].split.valid && (pick == leaves.size() || leaves[i].split.gain > leaves[pick].split.gain)) {
          pick = i;
        }
      }
      if (pick == leaves.size()) break;
      Candidate parent = std::move(leaves[pick]);
      leaves.erase(leaves.begin() + static_cast<std::ptrdiff_t>(pick));
      make_split(tree, parent.node, parent.split.column, parent.split.threshold);
      out.importance[parent.split.column] += parent.split.gain;
      Candidate left{tree.left[parent.node], {}, 0, 0, {}};
      Candidate right{tree.right[parent.node], {}, 0, 0, {}};
      for (auto r : parent.rows) {
        auto& side = row_value(data.rows[r], parent.split.column) <= parent.split.threshold ? left : right;
        side.rows.push_back(r);
        side.grad_sum += g[r];
        side.hess_sum += h[r];
      }
      left.split = splitter.best_split(left.rows, g, h, left.grad_sum, left.hess_sum);
      right.split = splitter.best_split(right.rows, g, h, right.grad_sum, right.hess_sum);
      leaves.push_back(std::move(left));
      leaves.push_back(std::move(right));
    }
    // Newton leaf values with shrinkage; halve any step that would raise the
    // leaf's loss, so the training loss never increases.
    for (const auto& leaf : leaves) {
      double step = -shrinkage * leaf.grad_sum / (leaf.hess_sum + kLeafRegularizer);
      const double before = leaf_loss(leaf.rows, scores, data.labels, 0.0);
      int halvings = 0;
      while (leaf_loss(leaf.rows, scores, data.labels, step) > before && halvings < 60) {
        step *= 0.5;
        ++halvings;
      }
      if (halvings == 60) step = 0.0;
      tree.value[leaf.node] = step;
      for (auto r : leaf.rows) scores[r] += step;
    }
    out.trees.push_back(std::move(tree));
    if (stage_loss) stage_loss->push_back(mean_loss(scores, data.labels));
  }
  return out;
}

}  // namespace a11yrev::detail
