#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "seriate/errors.hpp"
#include "seriate/matrix.hpp"
#include "seriate/nn.hpp"
#include "seriate/permutation.hpp"
#include "seriate/rng.hpp"

namespace seriate {

/// Row encoder (p -> 1), column encoder (n -> 1) and decoder (2 -> 1) trained
/// jointly to reconstruct matrix entries from the scalar feature pair.
struct DeepTmrModel {
  Mlp row_encoder;
  Mlp column_encoder;
  Mlp decoder;

  std::size_t parameter_count() const {
    return row_encoder.parameter_count() + column_encoder.parameter_count() +
           decoder.parameter_count();
  }
};

struct TrainConfig {
  double learning_rate = 1e-2;
  std::size_t epochs = 100;
  double lambda = 1e-10;
  std::size_t batch_size = 200;
  std::vector<std::size_t> row_encoder_hidden{10};
  std::vector<std::size_t> column_encoder_hidden{10};
  std::vector<std::size_t> decoder_hidden{10};
  Activation hidden_activation = Activation::Tanh;
  Activation output_activation = Activation::Linear;
  std::uint64_t seed = 0;
  std::size_t restarts = 1;
  std::size_t loss_window = 100;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;

  void validate() const {
    if (learning_rate <= 0.0) throw BadRangeError("TrainConfig: learning_rate must be positive");
    if (epochs == 0) throw BadRangeError("TrainConfig: epochs must be >= 1");
    if (lambda < 0.0) throw BadRangeError("TrainConfig: lambda must be >= 0");
    if (batch_size == 0) throw BadRangeError("TrainConfig: batch_size must be >= 1");
    if (restarts == 0) throw BadRangeError("TrainConfig: restarts must be >= 1");
    if (loss_window == 0) throw BadRangeError("TrainConfig: loss_window must be >= 1");
  }
};

/// ceil(epochs * n * p / batch): the exact number of optimizer iterations.
inline std::size_t planned_iterations(std::size_t epochs, std::size_t n, std::size_t p,
                                      std::size_t batch) {
  if (batch == 0) throw BadRangeError("planned_iterations: batch must be >= 1");
  const std::size_t work = epochs * n * p;
  return (work + batch - 1) / batch;
}

inline std::vector<double> row_vector(const DenseMatrix& a, std::size_t i) {
  if (i >= a.rows()) throw SizeMismatchError("row_vector: row index out of range");
  const auto r = a.row(i);
  return {r.begin(), r.end()};
}

inline std::vector<double> col_vector(const DenseMatrix& a, std::size_t j) {
  if (j >= a.cols()) throw SizeMismatchError("col_vector: column index out of range");
  return a.col(j);
}

inline DeepTmrModel init_model(std::size_t n, std::size_t p, const TrainConfig& cfg, Rng& rng) {
  auto sizes = [](std::size_t in, const std::vector<std::size_t>& hidden) {
    std::vector<std::size_t> s;
    s.push_back(in);
    s.insert(s.end(), hidden.begin(), hidden.end());
    s.push_back(1);
    return s;
  };
  DeepTmrModel model;
  model.row_encoder =
      glorot_init(sizes(p, cfg.row_encoder_hidden), rng, cfg.hidden_activation,
                  cfg.output_activation);
  model.column_encoder =
      glorot_init(sizes(n, cfg.column_encoder_hidden), rng, cfg.hidden_activation,
                  cfg.output_activation);
  model.decoder = glorot_init(sizes(2, cfg.decoder_hidden), rng, cfg.hidden_activation,
                              cfg.output_activation);
  return model;
}

inline double predict_entry(const DeepTmrModel& model, std::span<const double> row_input,
                            std::span<const double> col_input) {
  const double g = forward(model.row_encoder, row_input)[0];
  const double h = forward(model.column_encoder, col_input)[0];
  const double pair[2] = {g, h};
  return forward(model.decoder, std::span<const double>(pair, 2))[0];
}

struct TrainOutcome {
  DeepTmrModel model;
  std::vector<double> loss_history;
  LossReport final_loss;
};

/// Trains a fresh model on A for exactly planned_iterations(...) Adam steps.
/// Each iteration samples a with-replacement mini-batch of entry indices,
/// backpropagates the L2-regularized MSE jointly through the three networks
/// and applies one Adam update. A non-finite loss aborts with diagnostics.
inline TrainOutcome train(const DenseMatrix& a, const TrainConfig& cfg, Rng& rng) {
  cfg.validate();
  const std::size_t n = a.rows();
  const std::size_t p = a.cols();
  if (n == 0 || p == 0) throw SizeMismatchError("train: empty matrix");

  DeepTmrModel model = init_model(n, p, cfg, rng);

  // Input vectors are taken from the fixed observed matrix. Rows are
  // contiguous; columns are materialized once.
  std::vector<std::vector<double>> cols(p);
  for (std::size_t j = 0; j < p; ++j) cols[j] = a.col(j);

  const std::size_t param_count = model.parameter_count();
  AdamState adam = AdamState::for_parameter_count(param_count, cfg.learning_rate, cfg.adam_beta1,
                                                  cfg.adam_beta2, cfg.adam_epsilon);
  std::vector<double> flat_params(param_count);
  std::vector<double> flat_grads(param_count);

  const std::size_t iterations = planned_iterations(cfg.epochs, n, p, cfg.batch_size);
  std::vector<double> history;
  history.reserve(iterations);
  std::vector<PairSample> batch(cfg.batch_size);
  LossReport last{};

  const std::size_t c_row = model.row_encoder.parameter_count();
  const std::size_t c_col = model.column_encoder.parameter_count();
  const std::size_t c_dec = model.decoder.parameter_count();

  for (std::size_t it = 0; it < iterations; ++it) {
    const auto indices = sample_batch(rng, n, p, cfg.batch_size);
    for (std::size_t k = 0; k < indices.size(); ++k) {
      const auto [i, j] = indices[k];
      batch[k] = PairSample{a.row(i), cols[j], a(i, j)};
    }
    auto [report, grads] =
        loss_and_gradients(model.row_encoder, model.column_encoder, model.decoder, batch,
                           cfg.lambda);
    if (!std::isfinite(report.total)) {
      throw NonFiniteError("train: non-finite loss at iteration " + std::to_string(it) + " of " +
                           std::to_string(iterations));
    }
    copy_params_flat(model.row_encoder, std::span(flat_params.data(), c_row));
    copy_params_flat(model.column_encoder, std::span(flat_params.data() + c_row, c_col));
    copy_params_flat(model.decoder, std::span(flat_params.data() + c_row + c_col, c_dec));
    copy_grads_flat(grads.row_encoder, std::span(flat_grads.data(), c_row));
    copy_grads_flat(grads.column_encoder, std::span(flat_grads.data() + c_row, c_col));
    copy_grads_flat(grads.decoder, std::span(flat_grads.data() + c_row + c_col, c_dec));
    adam_step(flat_params, flat_grads, adam);
    set_params_flat(model.row_encoder, std::span<const double>(flat_params.data(), c_row));
    set_params_flat(model.column_encoder,
                    std::span<const double>(flat_params.data() + c_row, c_col));
    set_params_flat(model.decoder,
                    std::span<const double>(flat_params.data() + c_row + c_col, c_dec));
    history.push_back(report.total);
    last = report;
  }
  return {std::move(model), std::move(history), last};
}

/// g_i = row_encoder(row i), h_j = column_encoder(column j).
inline std::pair<std::vector<double>, std::vector<double>> encode_features(
    const DeepTmrModel& model, const DenseMatrix& a) {
  if (model.row_encoder.input_size() != a.cols() || model.column_encoder.input_size() != a.rows()) {
    throw SizeMismatchError("encode_features: model widths do not match matrix");
  }
  std::vector<double> g(a.rows());
  std::vector<double> h(a.cols());
  ForwardCache cache;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    forward(model.row_encoder, a.row(i), cache);
    g[i] = cache.activations.back()[0];
  }
  for (std::size_t j = 0; j < a.cols(); ++j) {
    const auto col = a.col(j);
    forward(model.column_encoder, col, cache);
    h[j] = cache.activations.back()[0];
  }
  return {std::move(g), std::move(h)};
}

struct ReorderResult {
  Permutation row_perm;
  Permutation col_perm;
  std::vector<double> g;
  std::vector<double> h;
  DenseMatrix reordered_observed;
  DenseMatrix reordered_denoised;
  LossReport final_loss{};
  std::vector<double> loss_history;
};

/// Sorts rows by g and columns by h (ascending) and permutes both the observed
/// matrix and the decoder's denoised reconstruction accordingly.
inline ReorderResult reorder_by_features(const DenseMatrix& a, const DeepTmrModel& model) {
  ReorderResult res;
  auto [g, h] = encode_features(model, a);
  res.row_perm = argsort(g);
  res.col_perm = argsort(h);
  DenseMatrix denoised(a.rows(), a.cols());
  ForwardCache cache;
  double pair[2];
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      pair[0] = g[i];
      pair[1] = h[j];
      forward(model.decoder, std::span<const double>(pair, 2), cache);
      denoised(i, j) = cache.activations.back()[0];
    }
  }
  res.reordered_observed = apply_permutation(a, res.row_perm, res.col_perm);
  res.reordered_denoised = apply_permutation(denoised, res.row_perm, res.col_perm);
  res.g = std::move(g);
  res.h = std::move(h);
  return res;
}

struct RestartOutcome {
  ReorderResult result;
  DeepTmrModel model;
  std::vector<double> selection_scores;  // +inf marks a failed trial
  std::size_t selected_trial = 0;
  std::vector<std::string> trial_errors;  // empty string when the trial survived
};

/// Mean total loss over the final `window` iterations; the restart selection
/// score.
inline double trailing_mean_loss(const std::vector<double>& history, std::size_t window) {
  const std::size_t w = std::min(window, history.size());
  if (w == 0) return std::numeric_limits<double>::infinity();
  double s = 0.0;
  for (std::size_t k = history.size() - w; k < history.size(); ++k) s += history[k];
  return s / static_cast<double>(w);
}

/// Trains cfg.restarts models with per-trial seeds derived from (cfg.seed,
/// trial index) and keeps the one with the minimum trailing mean loss. Failed
/// trials are recorded and skipped; `jobs` > 1 runs trials concurrently.
inline RestartOutcome train_with_restarts(const DenseMatrix& a, const TrainConfig& cfg,
                                          std::size_t jobs = 1) {
  cfg.validate();
  const std::size_t trials = cfg.restarts;
  std::vector<std::optional<TrainOutcome>> outcomes(trials);
  std::vector<double> scores(trials, std::numeric_limits<double>::infinity());
  std::vector<std::string> errors(trials);

  auto run_trial = [&](std::size_t k) {
    Rng trial_rng(derive_seed(cfg.seed, k));
    try {
      TrainOutcome out = train(a, cfg, trial_rng);
      scores[k] = trailing_mean_loss(out.loss_history, cfg.loss_window);
      outcomes[k] = std::move(out);
    } catch (const Error& e) {
      errors[k] = e.what();
    }
  };

  if (jobs <= 1 || trials == 1) {
    for (std::size_t k = 0; k < trials; ++k) run_trial(k);
  } else {
    std::atomic<std::size_t> next{0};
    const std::size_t workers = std::min(jobs, trials);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t k = next.fetch_add(1);
          if (k >= trials) return;
          run_trial(k);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  std::size_t best = trials;
  for (std::size_t k = 0; k < trials; ++k) {
    if (outcomes[k] && (best == trials || scores[k] < scores[best])) best = k;
  }
  if (best == trials) {
    std::string detail;
    for (std::size_t k = 0; k < trials; ++k) detail += " [" + std::to_string(k) + "] " + errors[k];
    throw NonFiniteError("train_with_restarts: all trials failed:" + detail);
  }

  TrainOutcome& chosen = *outcomes[best];
  RestartOutcome out;
  out.result = reorder_by_features(a, chosen.model);
  out.result.final_loss = chosen.final_loss;
  out.result.loss_history = std::move(chosen.loss_history);
  out.model = std::move(chosen.model);
  out.selection_scores = std::move(scores);
  out.selected_trial = best;
  out.trial_errors = std::move(errors);
  return out;
}

}  // namespace seriate
