#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "seriate/errors.hpp"
#include "seriate/matrix.hpp"
#include "seriate/rng.hpp"

namespace seriate {

enum class Activation { Tanh, Sigmoid, Relu, Linear };

inline std::string_view activation_label(Activation a) {
  switch (a) {
    case Activation::Tanh: return "tanh";
    case Activation::Sigmoid: return "sigmoid";
    case Activation::Relu: return "relu";
    case Activation::Linear: return "linear";
  }
  return "linear";
}

inline Activation activation_from_label(std::string_view label) {
  if (label == "tanh") return Activation::Tanh;
  if (label == "sigmoid") return Activation::Sigmoid;
  if (label == "relu") return Activation::Relu;
  if (label == "linear") return Activation::Linear;
  throw BadRangeError("unknown activation label: " + std::string(label));
}

inline double apply_activation(Activation a, double z) {
  switch (a) {
    case Activation::Tanh: return std::tanh(z);
    case Activation::Sigmoid: return 1.0 / (1.0 + std::exp(-z));
    case Activation::Relu: return z > 0.0 ? z : 0.0;
    case Activation::Linear: return z;
  }
  return z;
}

/// Derivative expressed through pre-activation z and activation value a.
inline double activation_derivative(Activation act, double z, double a) {
  switch (act) {
    case Activation::Tanh: return 1.0 - a * a;
    case Activation::Sigmoid: return a * (1.0 - a);
    case Activation::Relu: return z > 0.0 ? 1.0 : 0.0;
    case Activation::Linear: return 1.0;
  }
  return 1.0;
}

/// Feed-forward network. weights[l] has shape (layer_sizes[l+1] x layer_sizes[l]);
/// hidden layers share one activation, the output layer has its own.
struct Mlp {
  std::vector<std::size_t> layer_sizes;
  std::vector<DenseMatrix> weights;
  std::vector<std::vector<double>> biases;
  Activation hidden_activation = Activation::Tanh;
  Activation output_activation = Activation::Linear;

  std::size_t input_size() const { return layer_sizes.front(); }
  std::size_t output_size() const { return layer_sizes.back(); }
  std::size_t layer_count() const { return weights.size(); }

  Activation activation_at(std::size_t layer) const {
    return layer + 1 == weights.size() ? output_activation : hidden_activation;
  }

  std::size_t parameter_count() const {
    std::size_t n = 0;
    for (std::size_t l = 0; l < weights.size(); ++l) n += weights[l].size() + biases[l].size();
    return n;
  }
};

/// Weights drawn uniformly from [-1/sqrt(fan_in), 1/sqrt(fan_in)], in layer
/// order and row-major within a layer; biases start at zero.
inline Mlp glorot_init(const std::vector<std::size_t>& sizes, Rng& rng,
                       Activation hidden = Activation::Tanh,
                       Activation output = Activation::Linear) {
  if (sizes.size() < 2) throw SizeMismatchError("glorot_init: need at least two layers");
  for (std::size_t s : sizes) {
    if (s == 0) throw SizeMismatchError("glorot_init: zero-width layer");
  }
  Mlp net;
  net.layer_sizes = sizes;
  net.hidden_activation = hidden;
  net.output_activation = output;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(sizes[l]));
    DenseMatrix w(sizes[l + 1], sizes[l]);
    for (double& v : w.entries()) v = rng.uniform(-bound, bound);
    net.weights.push_back(std::move(w));
    net.biases.emplace_back(sizes[l + 1], 0.0);
  }
  return net;
}

/// Per-layer pre-activations and activations kept for backpropagation.
/// Reusable across forward calls to avoid reallocation.
struct ForwardCache {
  std::vector<std::vector<double>> activations;      // a^0 .. a^L
  std::vector<std::vector<double>> pre_activations;  // z^1 .. z^L
};

inline void forward(const Mlp& net, std::span<const double> x, ForwardCache& cache) {
  if (x.size() != net.input_size()) throw SizeMismatchError("forward: input width mismatch");
  const std::size_t layers = net.layer_count();
  cache.activations.resize(layers + 1);
  cache.pre_activations.resize(layers);
  cache.activations[0].assign(x.begin(), x.end());
  for (std::size_t l = 0; l < layers; ++l) {
    const DenseMatrix& w = net.weights[l];
    const auto& a_in = cache.activations[l];
    auto& z = cache.pre_activations[l];
    auto& a_out = cache.activations[l + 1];
    z.resize(w.rows());
    a_out.resize(w.rows());
    const Activation act = net.activation_at(l);
    for (std::size_t r = 0; r < w.rows(); ++r) {
      const auto row = w.row(r);
      double s = net.biases[l][r];
      for (std::size_t c = 0; c < row.size(); ++c) s += row[c] * a_in[c];
      z[r] = s;
      a_out[r] = apply_activation(act, s);
    }
  }
}

inline std::vector<double> forward(const Mlp& net, std::span<const double> x) {
  ForwardCache cache;
  forward(net, x, cache);
  return cache.activations.back();
}

/// Gradient of a loss with respect to every parameter of one Mlp; layout
/// mirrors the network.
struct MlpGrads {
  std::vector<DenseMatrix> weights;
  std::vector<std::vector<double>> biases;

  static MlpGrads zeros_like(const Mlp& net) {
    MlpGrads g;
    for (std::size_t l = 0; l < net.layer_count(); ++l) {
      g.weights.emplace_back(net.weights[l].rows(), net.weights[l].cols());
      g.biases.emplace_back(net.biases[l].size(), 0.0);
    }
    return g;
  }

  void set_zero() {
    for (auto& w : weights) std::fill(w.entries().begin(), w.entries().end(), 0.0);
    for (auto& b : biases) std::fill(b.begin(), b.end(), 0.0);
  }
};

/// Backpropagates `output_grad` (dL/d output) through the cached forward pass,
/// accumulating parameter gradients into `grads`. Returns dL/d input.
inline std::vector<double> backward(const Mlp& net, const ForwardCache& cache,
                                    std::span<const double> output_grad, MlpGrads& grads) {
  const std::size_t layers = net.layer_count();
  if (output_grad.size() != net.output_size()) {
    throw SizeMismatchError("backward: output gradient width mismatch");
  }
  std::vector<double> delta(output_grad.size());
  {
    const Activation act = net.activation_at(layers - 1);
    const auto& z = cache.pre_activations[layers - 1];
    const auto& a = cache.activations[layers];
    for (std::size_t r = 0; r < delta.size(); ++r) {
      delta[r] = output_grad[r] * activation_derivative(act, z[r], a[r]);
    }
  }
  for (std::size_t l = layers; l-- > 0;) {
    const DenseMatrix& w = net.weights[l];
    const auto& a_in = cache.activations[l];
    auto& wg = grads.weights[l];
    auto& bg = grads.biases[l];
    std::vector<double> prev(w.cols(), 0.0);
    for (std::size_t r = 0; r < w.rows(); ++r) {
      const double d = delta[r];
      bg[r] += d;
      auto wrow = wg.row(r);
      const auto row = w.row(r);
      for (std::size_t c = 0; c < w.cols(); ++c) {
        wrow[c] += d * a_in[c];
        prev[c] += d * row[c];
      }
    }
    if (l == 0) return prev;
    const Activation act = net.activation_at(l - 1);
    const auto& z = cache.pre_activations[l - 1];
    const auto& a = cache.activations[l];
    for (std::size_t c = 0; c < prev.size(); ++c) {
      prev[c] *= activation_derivative(act, z[c], a[c]);
    }
    delta = std::move(prev);
  }
  return {};
}

/// Mean squared error over a batch plus L2 penalty on all weights and biases.
struct LossReport {
  double data_term = 0.0;
  double reg_term = 0.0;
  double total = 0.0;
};

/// One (input, target) pair for a standalone network. Spans must outlive use.
struct Sample {
  std::span<const double> input;
  std::span<const double> target;
};

/// One entry-reconstruction sample: a row vector, a column vector, and the
/// entry value at their crossing.
struct PairSample {
  std::span<const double> row_input;
  std::span<const double> col_input;
  double target = 0.0;
};

namespace detail {

inline double squared_param_norm(const Mlp& net) {
  double s = 0.0;
  for (const auto& w : net.weights) {
    for (double v : w.entries()) s += v * v;
  }
  for (const auto& b : net.biases) {
    for (double v : b) s += v * v;
  }
  return s;
}

inline void add_l2_gradient(const Mlp& net, double lambda, MlpGrads& grads) {
  if (lambda == 0.0) return;
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    auto& wg = grads.weights[l].entries();
    const auto& w = net.weights[l].entries();
    for (std::size_t k = 0; k < w.size(); ++k) wg[k] += 2.0 * lambda * w[k];
    auto& bg = grads.biases[l];
    const auto& b = net.biases[l];
    for (std::size_t k = 0; k < b.size(); ++k) bg[k] += 2.0 * lambda * b[k];
  }
}

}  // namespace detail

inline std::pair<LossReport, MlpGrads> loss_and_gradients(const Mlp& net,
                                                          std::span<const Sample> batch,
                                                          double lambda) {
  if (batch.empty()) throw BadRangeError("loss_and_gradients: empty batch");
  if (lambda < 0.0) throw BadRangeError("loss_and_gradients: lambda must be >= 0");
  MlpGrads grads = MlpGrads::zeros_like(net);
  ForwardCache cache;
  double data = 0.0;
  const double inv_batch = 1.0 / static_cast<double>(batch.size());
  std::vector<double> out_grad(net.output_size());
  for (const Sample& s : batch) {
    if (s.target.size() != net.output_size()) {
      throw SizeMismatchError("loss_and_gradients: target width mismatch");
    }
    forward(net, s.input, cache);
    const auto& pred = cache.activations.back();
    for (std::size_t k = 0; k < pred.size(); ++k) {
      const double err = pred[k] - s.target[k];
      data += err * err * inv_batch;
      out_grad[k] = 2.0 * err * inv_batch;
    }
    backward(net, cache, out_grad, grads);
  }
  detail::add_l2_gradient(net, lambda, grads);
  const double reg = lambda * detail::squared_param_norm(net);
  return {LossReport{data, reg, data + reg}, std::move(grads)};
}

/// Gradients for the joint row-encoder / column-encoder / decoder composition:
/// prediction = dec(row_enc(row_input), col_enc(col_input)).
struct TriGrads {
  MlpGrads row_encoder;
  MlpGrads column_encoder;
  MlpGrads decoder;
};

inline std::pair<LossReport, TriGrads> loss_and_gradients(const Mlp& row_enc, const Mlp& col_enc,
                                                          const Mlp& dec,
                                                          std::span<const PairSample> batch,
                                                          double lambda) {
  if (batch.empty()) throw BadRangeError("loss_and_gradients: empty batch");
  if (lambda < 0.0) throw BadRangeError("loss_and_gradients: lambda must be >= 0");
  if (row_enc.output_size() != 1 || col_enc.output_size() != 1 || dec.input_size() != 2 ||
      dec.output_size() != 1) {
    throw SizeMismatchError("loss_and_gradients: encoder/decoder widths must be 1/1/2->1");
  }
  TriGrads grads{MlpGrads::zeros_like(row_enc), MlpGrads::zeros_like(col_enc),
                 MlpGrads::zeros_like(dec)};
  ForwardCache row_cache, col_cache, dec_cache;
  const double inv_batch = 1.0 / static_cast<double>(batch.size());
  double data = 0.0;
  double dec_in[2];
  double out_grad[1];
  for (const PairSample& s : batch) {
    forward(row_enc, s.row_input, row_cache);
    forward(col_enc, s.col_input, col_cache);
    dec_in[0] = row_cache.activations.back()[0];
    dec_in[1] = col_cache.activations.back()[0];
    forward(dec, std::span<const double>(dec_in, 2), dec_cache);
    const double pred = dec_cache.activations.back()[0];
    const double err = pred - s.target;
    data += err * err * inv_batch;
    out_grad[0] = 2.0 * err * inv_batch;
    const std::vector<double> dec_input_grad =
        backward(dec, dec_cache, std::span<const double>(out_grad, 1), grads.decoder);
    const double g_row[1] = {dec_input_grad[0]};
    const double g_col[1] = {dec_input_grad[1]};
    backward(row_enc, row_cache, std::span<const double>(g_row, 1), grads.row_encoder);
    backward(col_enc, col_cache, std::span<const double>(g_col, 1), grads.column_encoder);
  }
  detail::add_l2_gradient(row_enc, lambda, grads.row_encoder);
  detail::add_l2_gradient(col_enc, lambda, grads.column_encoder);
  detail::add_l2_gradient(dec, lambda, grads.decoder);
  const double reg = lambda * (detail::squared_param_norm(row_enc) +
                               detail::squared_param_norm(col_enc) +
                               detail::squared_param_norm(dec));
  return {LossReport{data, reg, data + reg}, std::move(grads)};
}

/// Loss evaluation without gradients (used by the finite-difference oracle).
inline double loss_value(const Mlp& net, std::span<const Sample> batch, double lambda) {
  ForwardCache cache;
  double data = 0.0;
  const double inv_batch = 1.0 / static_cast<double>(batch.size());
  for (const Sample& s : batch) {
    forward(net, s.input, cache);
    const auto& pred = cache.activations.back();
    for (std::size_t k = 0; k < pred.size(); ++k) {
      const double err = pred[k] - s.target[k];
      data += err * err * inv_batch;
    }
  }
  return data + lambda * detail::squared_param_norm(net);
}

inline double loss_value(const Mlp& row_enc, const Mlp& col_enc, const Mlp& dec,
                         std::span<const PairSample> batch, double lambda) {
  ForwardCache row_cache, col_cache, dec_cache;
  double data = 0.0;
  const double inv_batch = 1.0 / static_cast<double>(batch.size());
  double dec_in[2];
  for (const PairSample& s : batch) {
    forward(row_enc, s.row_input, row_cache);
    forward(col_enc, s.col_input, col_cache);
    dec_in[0] = row_cache.activations.back()[0];
    dec_in[1] = col_cache.activations.back()[0];
    forward(dec, std::span<const double>(dec_in, 2), dec_cache);
    const double err = dec_cache.activations.back()[0] - s.target;
    data += err * err * inv_batch;
  }
  return data + lambda * (detail::squared_param_norm(row_enc) +
                          detail::squared_param_norm(col_enc) +
                          detail::squared_param_norm(dec));
}

namespace detail {

template <typename LossFn>
void central_difference_into(Mlp& net, double h, LossFn&& loss, MlpGrads& out) {
  auto probe = [&](double& param, double& slot) {
    const double saved = param;
    param = saved + h;
    const double up = loss();
    param = saved - h;
    const double down = loss();
    param = saved;
    slot = (up - down) / (2.0 * h);
  };
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    for (std::size_t k = 0; k < net.weights[l].size(); ++k) {
      probe(net.weights[l].entries()[k], out.weights[l].entries()[k]);
    }
    for (std::size_t k = 0; k < net.biases[l].size(); ++k) {
      probe(net.biases[l][k], out.biases[l][k]);
    }
  }
}

}  // namespace detail

/// Central-difference gradient (L(w+h) - L(w-h)) / 2h per parameter. Works from
/// loss evaluations only, independent of backpropagation.
inline MlpGrads finite_difference_gradients(Mlp net, std::span<const Sample> batch, double lambda,
                                            double h) {
  if (!(h > 0.0)) throw BadRangeError("finite_difference_gradients: h must be positive");
  MlpGrads out = MlpGrads::zeros_like(net);
  detail::central_difference_into(net, h, [&] { return loss_value(net, batch, lambda); }, out);
  return out;
}

inline TriGrads finite_difference_gradients(Mlp row_enc, Mlp col_enc, Mlp dec,
                                            std::span<const PairSample> batch, double lambda,
                                            double h) {
  if (!(h > 0.0)) throw BadRangeError("finite_difference_gradients: h must be positive");
  TriGrads out{MlpGrads::zeros_like(row_enc), MlpGrads::zeros_like(col_enc),
               MlpGrads::zeros_like(dec)};
  auto loss = [&] { return loss_value(row_enc, col_enc, dec, batch, lambda); };
  detail::central_difference_into(row_enc, h, loss, out.row_encoder);
  detail::central_difference_into(col_enc, h, loss, out.column_encoder);
  detail::central_difference_into(dec, h, loss, out.decoder);
  return out;
}

/// Adam optimizer state over a flat parameter vector; moments start at zero
/// and step_count advances by one per update.
struct AdamState {
  double learning_rate = 1e-2;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t step_count = 0;
  std::vector<double> first_moment;
  std::vector<double> second_moment;

  static AdamState for_parameter_count(std::size_t n, double learning_rate, double beta1 = 0.9,
                                       double beta2 = 0.999, double epsilon = 1e-8) {
    AdamState s;
    s.learning_rate = learning_rate;
    s.beta1 = beta1;
    s.beta2 = beta2;
    s.epsilon = epsilon;
    s.first_moment.assign(n, 0.0);
    s.second_moment.assign(n, 0.0);
    return s;
  }
};

/// One Adam update with bias correction, in place.
inline void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state) {
  if (params.size() != grads.size() || params.size() != state.first_moment.size()) {
    throw SizeMismatchError("adam_step: parameter/gradient/moment sizes disagree");
  }
  state.step_count += 1;
  const double t = static_cast<double>(state.step_count);
  const double c1 = 1.0 - std::pow(state.beta1, t);
  const double c2 = 1.0 - std::pow(state.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    double& m = state.first_moment[i];
    double& v = state.second_moment[i];
    const double g = grads[i];
    m = state.beta1 * m + (1.0 - state.beta1) * g;
    v = state.beta2 * v + (1.0 - state.beta2) * g * g;
    const double m_hat = m / c1;
    const double v_hat = v / c2;
    params[i] -= state.learning_rate * m_hat / (std::sqrt(v_hat) + state.epsilon);
  }
}

/// Flat parameter layout: per layer, weight entries row-major then biases.
inline void copy_params_flat(const Mlp& net, std::span<double> out) {
  std::size_t k = 0;
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    for (double v : net.weights[l].entries()) out[k++] = v;
    for (double v : net.biases[l]) out[k++] = v;
  }
}

inline void set_params_flat(Mlp& net, std::span<const double> in) {
  std::size_t k = 0;
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    for (double& v : net.weights[l].entries()) v = in[k++];
    for (double& v : net.biases[l]) v = in[k++];
  }
}

inline void copy_grads_flat(const MlpGrads& grads, std::span<double> out) {
  std::size_t k = 0;
  for (std::size_t l = 0; l < grads.weights.size(); ++l) {
    for (double v : grads.weights[l].entries()) out[k++] = v;
    for (double v : grads.biases[l]) out[k++] = v;
  }
}

}  // namespace seriate
