// Linear learners: L1/L2 logistic regression (OWL-QN), Pegasos SVM,
// averaged perceptron and the perceptron-sampling Bayes point machine.

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

#include "a11yrev/detail/training.hpp"
#include "a11yrev/random.hpp"

namespace a11yrev::detail {

namespace {

double sign_of(int label) { return label == 1 ? 1.0 : -1.0; }

std::vector<std::size_t> iota_order(std::size_t n) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  return order;
}

double l1_norm(std::span<const double> x, std::size_t weights) {
  double s = 0.0;
  for (std::size_t i = 0; i < weights; ++i) s += std::abs(x[i]);
  return s;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

double logistic_objective(const CompactData& data, std::span<const double> params, double l2,
                          std::vector<double>* gradient) {
  const std::size_t d = data.columns();
  const std::span<const double> w = params.first(d);
  const double b = params[d];
  if (gradient) gradient->assign(d + 1, 0.0);
  double loss = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double y = sign_of(data.labels[i]);
    const double margin = dot(data.rows[i], w) + b;
    loss += softplus(-y * margin);
    if (gradient) {
      // d/dm softplus(-y m) = -y sigmoid(-y m)
      const double g = -y * sigmoid(-y * margin);
      for (const auto& e : data.rows[i]) (*gradient)[e.column] += g * e.value;
      (*gradient)[d] += g;
    }
  }
  double sq = 0.0;
  for (std::size_t j = 0; j < d; ++j) sq += w[j] * w[j];
  loss += 0.5 * l2 * sq;
  if (gradient) {
    for (std::size_t j = 0; j < d; ++j) (*gradient)[j] += l2 * w[j];
  }
  return loss;
}

LinearParams train_logreg(const CompactData& data, const LearnerSpec& spec, LogregTrace* trace) {
  const double tol = spec.get("optimiz_tol");
  const double l1 = spec.get("L1_weight");
  const double l2 = spec.get("L2_weight");
  const auto memory = static_cast<std::size_t>(spec.get("memory_L_BFGS"));
  const int max_iter = static_cast<int>(spec.get("max_iter"));
  const std::size_t d = data.columns();
  const std::size_t n = d + 1;  // bias last, never penalized

  std::vector<double> x(n, 0.0);
  std::vector<double> grad;
  double smooth = logistic_objective(data, x, l2, &grad);
  double objective = smooth + l1 * l1_norm(x, d);

  // Pseudo-gradient of f + l1 |w| (orthant-wise).
  const auto pseudo_gradient = [&](const std::vector<double>& at, const std::vector<double>& g) {
    std::vector<double> pg(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == d || l1 == 0.0) {
        pg[i] = g[i];
      } else if (at[i] > 0) {
        pg[i] = g[i] + l1;
      } else if (at[i] < 0) {
        pg[i] = g[i] - l1;
      } else if (g[i] + l1 < 0) {
        pg[i] = g[i] + l1;
      } else if (g[i] - l1 > 0) {
        pg[i] = g[i] - l1;
      } else {
        pg[i] = 0.0;
      }
    }
    return pg;
  };

  std::deque<std::vector<double>> s_hist;
  std::deque<std::vector<double>> y_hist;
  std::deque<double> rho_hist;
  int iter = 0;
  for (; iter < max_iter; ++iter) {
    const auto pg = pseudo_gradient(x, grad);
    const double pg_norm = std::sqrt(dot(std::span<const double>(pg), std::span<const double>(pg)));
    if (pg_norm == 0.0) break;

    // two-loop recursion: dir = -H pg
    std::vector<double> q = pg;
    std::vector<double> alpha(s_hist.size());
    for (std::size_t k = s_hist.size(); k-- > 0;) {
      alpha[k] = rho_hist[k] * dot(std::span<const double>(s_hist[k]), std::span<const double>(q));
      for (std::size_t i = 0; i < n; ++i) q[i] -= alpha[k] * y_hist[k][i];
    }
    if (!s_hist.empty()) {
      const auto& s = s_hist.back();
      const auto& y = y_hist.back();
      const double gamma = dot(std::span<const double>(s), std::span<const double>(y)) /
                           dot(std::span<const double>(y), std::span<const double>(y));
      for (auto& v : q) v *= gamma;
    }
    for (std::size_t k = 0; k < s_hist.size(); ++k) {
      const double beta = rho_hist[k] * dot(std::span<const double>(y_hist[k]), std::span<const double>(q));
      for (std::size_t i = 0; i < n; ++i) q[i] += s_hist[k][i] * (alpha[k] - beta);
    }
    std::vector<double> dir(n);
    for (std::size_t i = 0; i < n; ++i) {
      dir[i] = -q[i];
      // keep only components that descend along the pseudo-gradient
      if (l1 != 0.0 && i != d && dir[i] * pg[i] >= 0) dir[i] = 0.0;
    }
    double dir_dot_pg = dot(std::span<const double>(dir), std::span<const double>(pg));
    if (dir_dot_pg >= 0) {
      // history produced a non-descent direction; fall back to steepest descent
      for (std::size_t i = 0; i < n; ++i) dir[i] = -pg[i];
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      dir_dot_pg = -pg_norm * pg_norm;
    }

    // orthant chosen for this step
    std::vector<double> orthant(n);
    for (std::size_t i = 0; i < n; ++i) {
      orthant[i] = x[i] != 0 ? (x[i] > 0 ? 1.0 : -1.0) : (pg[i] > 0 ? -1.0 : (pg[i] < 0 ? 1.0 : 0.0));
    }

    double step = s_hist.empty() ? 1.0 / pg_norm : 1.0;
    std::vector<double> x_new(n);
    std::vector<double> grad_new;
    double smooth_new = 0.0;
    double objective_new = 0.0;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      for (std::size_t i = 0; i < n; ++i) {
        double v = x[i] + step * dir[i];
        if (l1 != 0.0 && i != d && v * orthant[i] <= 0) v = 0.0;
        x_new[i] = v;
      }
      smooth_new = logistic_objective(data, x_new, l2, &grad_new);
      objective_new = smooth_new + l1 * l1_norm(x_new, d);
      double decrease = 0.0;
      for (std::size_t i = 0; i < n; ++i) decrease += pg[i] * (x_new[i] - x[i]);
      if (objective_new <= objective + 1e-4 * decrease) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;

    std::vector<double> s(n);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = x_new[i] - x[i];
      y[i] = grad_new[i] - grad[i];
    }
    const double sy = dot(std::span<const double>(s), std::span<const double>(y));
    if (sy > 0) {
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
      if (s_hist.size() > memory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    const double improvement = (objective - objective_new) / std::max(std::abs(objective_new), 1.0);
    x = std::move(x_new);
    grad = std::move(grad_new);
    smooth = smooth_new;
    objective = objective_new;
    if (improvement < tol) {
      ++iter;
      break;
    }
  }
  if (trace) {
    trace->iterations = iter;
    trace->objective = objective;
  }
  LinearParams out;
  out.weights.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(d));
  out.bias = x[d];
  return out;
}

LinearParams train_svm(const CompactData& data, const LearnerSpec& spec) {
  const double lambda = spec.get("Lambda");
  const auto passes = static_cast<std::size_t>(spec.get("n_iter"));
  const std::size_t d = data.columns();
  // w = scale * v; the bias is an extra always-on feature (column d).
  std::vector<double> v(d + 1, 0.0);
  double scale = 1.0;
  double v_sq = 0.0;
  const double radius = 1.0 / std::sqrt(lambda);
  Rng rng(spec.seed);
  auto order = iota_order(data.size());
  // The returned hyperplane is the mean of the iterates of the final pass.
  std::vector<double> sum(d + 1, 0.0);
  std::size_t t = 0;
  for (std::size_t pass = 0; pass < passes; ++pass) {
    rng.shuffle(std::span(order));
    const bool last = pass + 1 == passes;
    for (auto i : order) {
      ++t;
      const double eta = 1.0 / (lambda * static_cast<double>(t));
      const double y = sign_of(data.labels[i]);
      const auto& row = data.rows[i];
      double vx = v[d];
      for (const auto& e : row) vx += v[e.column] * e.value;
      const double margin = y * scale * vx;
      const double shrink = 1.0 - eta * lambda;
      if (shrink <= 0.0) {
        std::fill(v.begin(), v.end(), 0.0);
        scale = 1.0;
        v_sq = 0.0;
        vx = 0.0;
      } else {
        scale *= shrink;
      }
      if (margin < 1.0) {
        const double c = eta * y / scale;
        double x_sq = 1.0;
        for (const auto& e : row) x_sq += e.value * e.value;
        v_sq += 2.0 * c * vx + c * c * x_sq;
        for (const auto& e : row) v[e.column] += c * e.value;
        v[d] += c;
      }
      const double norm = scale * std::sqrt(std::max(v_sq, 0.0));
      if (norm > radius) scale *= radius / norm;
      if (scale < 1e-9) {
        for (auto& x : v) x *= scale;
        v_sq *= scale * scale;
        scale = 1.0;
      }
      if (last) {
        for (std::size_t j = 0; j <= d; ++j) sum[j] += scale * v[j];
      }
    }
  }
  const double n = static_cast<double>(data.size());
  LinearParams out;
  out.weights.resize(d);
  for (std::size_t j = 0; j < d; ++j) out.weights[j] = sum[j] / n;
  out.bias = sum[d] / n;
  return out;
}

LinearParams train_avg_perceptron(const CompactData& data, const LearnerSpec& spec,
                                  PerceptronTrace* trace) {
  const double rate = spec.get("learning_rate");
  const int max_epochs = static_cast<int>(spec.get("m_iter"));
  const std::size_t d = data.columns();
  std::vector<double> w(d + 1, 0.0);
  // running sum of c * update, so that average = w - u / c
  std::vector<double> u(d + 1, 0.0);
  double c = 1.0;
  Rng rng(spec.seed);
  auto order = iota_order(data.size());
  int epoch = 0;
  std::size_t errors = 0;
  while (epoch < max_epochs) {
    ++epoch;
    errors = 0;
    rng.shuffle(std::span(order));
    for (auto i : order) {
      const double y = sign_of(data.labels[i]);
      const auto& row = data.rows[i];
      double m = w[d];
      for (const auto& e : row) m += w[e.column] * e.value;
      if (y * m <= 0.0) {
        ++errors;
        for (const auto& e : row) {
          w[e.column] += rate * y * e.value;
          u[e.column] += c * rate * y * e.value;
        }
        w[d] += rate * y;
        u[d] += c * rate * y;
      }
      c += 1.0;
    }
    if (errors == 0) break;
  }
  if (trace) {
    trace->epochs = epoch;
    trace->last_epoch_errors = errors;
  }
  LinearParams out;
  out.weights.resize(d);
  for (std::size_t j = 0; j < d; ++j) out.weights[j] = w[j] - u[j] / c;
  out.bias = w[d] - u[d] / c;
  return out;
}

LinearParams train_bayes_point(const CompactData& data, const LearnerSpec& spec) {
  const auto samples = static_cast<std::size_t>(spec.get("n_training_iter"));
  const int epochs = static_cast<int>(spec.get("sample_epochs"));
  const std::size_t d = data.columns();
  std::vector<double> sum(d + 1, 0.0);
  auto order = iota_order(data.size());
  for (std::size_t s = 0; s < samples; ++s) {
    // each sample is a plain perceptron on its own data ordering
    Rng rng(derive_seed(spec.seed, s));
    std::vector<double> w(d + 1, 0.0);
    for (int epoch = 0; epoch < epochs; ++epoch) {
      rng.shuffle(std::span(order));
      std::size_t errors = 0;
      for (auto i : order) {
        const double y = sign_of(data.labels[i]);
        const auto& row = data.rows[i];
        double m = w[d];
        for (const auto& e : row) m += w[e.column] * e.value;
        if (y * m <= 0.0) {
          ++errors;
          for (const auto& e : row) w[e.column] += y * e.value;
          w[d] += y;
        }
      }
      if (errors == 0) break;
    }
    const double norm = std::sqrt(dot(std::span<const double>(w), std::span<const double>(w)));
    if (norm == 0.0) continue;
    for (std::size_t j = 0; j <= d; ++j) sum[j] += w[j] / norm;
  }
  LinearParams out;
  out.weights.resize(d);
  const auto n = static_cast<double>(samples);
  for (std::size_t j = 0; j < d; ++j) out.weights[j] = sum[j] / n;
  out.bias = sum[d] / n;
  return out;
}

}  // namespace a11yrev::detail
