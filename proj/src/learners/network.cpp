#include <numeric>

#include "a11yrev/detail/training.hpp"
#include "a11yrev/random.hpp"

namespace a11yrev::detail {

namespace {

void hidden_activations(const NetworkParams& net, const CompactRow& row, std::vector<double>& act) {
  act.assign(net.hidden_bias.begin(), net.hidden_bias.end());
  for (const auto& e : row) {
    const double* w = net.hidden_weights.data() + static_cast<std::size_t>(e.column) * net.hidden;
    for (std::size_t k = 0; k < net.hidden; ++k) act[k] += e.value * w[k];
  }
  for (auto& a : act) a = sigmoid(a);
}

double output_logit(const NetworkParams& net, const std::vector<double>& act) {
  double z = net.output_bias;
  for (std::size_t k = 0; k < net.hidden; ++k) z += net.output_weights[k] * act[k];
  return z;
}

}  // namespace

double network_output(const NetworkParams& net, const CompactRow& row) {
  std::vector<double> act;
  hidden_activations(net, row, act);
  return output_logit(net, act);
}

double network_loss(const NetworkParams& net, const CompactRow& row, int label,
                    NetworkParams* gradient) {
  std::vector<double> act;
  hidden_activations(net, row, act);
  const double z = output_logit(net, act);
  const double y = label == 1 ? 1.0 : -1.0;
  const double loss = softplus(-y * z);
  if (gradient) {
    const double dz = sigmoid(z) - label;
    gradient->output_bias += dz;
    for (std::size_t k = 0; k < net.hidden; ++k) {
      gradient->output_weights[k] += dz * act[k];
      const double dh = dz * net.output_weights[k] * act[k] * (1.0 - act[k]);
      gradient->hidden_bias[k] += dh;
      for (const auto& e : row) {
        gradient->hidden_weights[static_cast<std::size_t>(e.column) * net.hidden + k] += dh * e.value;
      }
    }
  }
  return loss;
}

NetworkParams train_network(const CompactData& data, const LearnerSpec& spec) {
  const auto hidden = static_cast<std::size_t>(spec.get("n_nodes"));
  const double rate = spec.get("learning_rate");
  const int epochs = static_cast<int>(spec.get("n_learning_rate"));
  const double diameter = spec.get("learning_rate_weights");
  const double momentum = spec.get("momentum");
  const std::size_t d = data.columns();

  Rng rng(spec.seed);
  NetworkParams net;
  net.hidden = hidden;
  net.hidden_weights.resize(d * hidden);
  for (auto& w : net.hidden_weights) w = rng.uniform(-diameter / 2, diameter / 2);
  net.hidden_bias.assign(hidden, 0.0);
  net.output_weights.resize(hidden);
  for (auto& w : net.output_weights) w = rng.uniform(-diameter / 2, diameter / 2);

  // Momentum velocities are kept only for parameters touched by a row (lazy
  // sparse momentum); with momentum 0 this is plain SGD.
  NetworkParams velocity;
  if (momentum > 0) {
    velocity.hidden = hidden;
    velocity.hidden_weights.assign(d * hidden, 0.0);
    velocity.hidden_bias.assign(hidden, 0.0);
    velocity.output_weights.assign(hidden, 0.0);
  }

  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> act;
  for (int epoch = 0; epoch < epochs; ++epoch) {
    rng.shuffle(std::span(order));
    for (auto i : order) {
      const auto& row = data.rows[i];
      hidden_activations(net, row, act);
      const double dz = sigmoid(output_logit(net, act)) - data.labels[i];
      for (std::size_t k = 0; k < hidden; ++k) {
        const double dh = dz * net.output_weights[k] * act[k] * (1.0 - act[k]);
        double step_out = rate * dz * act[k];
        double step_bias = rate * dh;
        if (momentum > 0) {
          velocity.output_weights[k] = momentum * velocity.output_weights[k] + step_out;
          velocity.hidden_bias[k] = momentum * velocity.hidden_bias[k] + step_bias;
          step_out = velocity.output_weights[k];
          step_bias = velocity.hidden_bias[k];
        }
        net.output_weights[k] -= step_out;
        net.hidden_bias[k] -= step_bias;
        for (const auto& e : row) {
          const std::size_t at = static_cast<std::size_t>(e.column) * hidden + k;
          double step = rate * dh * e.value;
          if (momentum > 0) {
            velocity.hidden_weights[at] = momentum * velocity.hidden_weights[at] + step;
            step = velocity.hidden_weights[at];
          }
          net.hidden_weights[at] -= step;
        }
      }
      double step_b = rate * dz;
      if (momentum > 0) {
        velocity.output_bias = momentum * velocity.output_bias + step_b;
        step_b = velocity.output_bias;
      }
      net.output_bias -= step_b;
    }
  }
  return net;
}

}  // namespace a11yrev::detail
