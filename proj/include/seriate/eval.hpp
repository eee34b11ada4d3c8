#pragma once

#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "seriate/baselines.hpp"
#include "seriate/deeptmr.hpp"
#include "seriate/errors.hpp"
#include "seriate/matrix.hpp"
#include "seriate/permutation.hpp"
#include "seriate/synthetic.hpp"

namespace seriate {

/// Mean squared reordering error, minimized over the four row/column flip
/// combinations.
struct ErrorBreakdown {
  double error = 0.0;
  int row_flip = 0;
  int col_flip = 0;
  std::array<double, 4> per_flip_errors{};  // flips (0,0), (0,1), (1,0), (1,1)
};

/// E = min over flips (k, h) of
/// (1/np) sum_ij (mean_bar[i][j] - mean_observed[rowperm_k(i)][colperm_h(j)])^2.
/// The first flip combination attaining the minimum wins.
inline ErrorBreakdown reordering_error(const DenseMatrix& mean_bar,
                                       const DenseMatrix& mean_observed,
                                       const Permutation& row_perm, const Permutation& col_perm) {
  if (mean_bar.rows() != mean_observed.rows() || mean_bar.cols() != mean_observed.cols()) {
    throw SizeMismatchError("reordering_error: mean matrices have different shapes");
  }
  if (row_perm.size() != mean_bar.rows() || col_perm.size() != mean_bar.cols()) {
    throw SizeMismatchError("reordering_error: permutation sizes do not match matrices");
  }
  const std::size_t n = mean_bar.rows();
  const std::size_t p = mean_bar.cols();
  const Permutation row_flipped = row_perm.flipped();
  const Permutation col_flipped = col_perm.flipped();

  ErrorBreakdown out;
  for (int k = 0; k < 2; ++k) {
    const Permutation& rp = k == 0 ? row_perm : row_flipped;
    for (int h = 0; h < 2; ++h) {
      const Permutation& cp = h == 0 ? col_perm : col_flipped;
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const auto bar_row = mean_bar.row(i);
        const auto obs_row = mean_observed.row(rp(i));
        for (std::size_t j = 0; j < p; ++j) {
          const double d = bar_row[j] - obs_row[cp(j)];
          s += d * d;
        }
      }
      out.per_flip_errors[static_cast<std::size_t>(k * 2 + h)] =
          s / (static_cast<double>(n) * static_cast<double>(p));
    }
  }
  std::size_t best = 0;
  for (std::size_t idx = 1; idx < 4; ++idx) {
    if (out.per_flip_errors[idx] < out.per_flip_errors[best]) best = idx;
  }
  out.error = out.per_flip_errors[best];
  out.row_flip = static_cast<int>(best / 2);
  out.col_flip = static_cast<int>(best % 2);
  return out;
}

/// Number of adjacent positions in the reordered sequence where the cluster
/// label changes.
inline std::size_t cluster_contiguity(std::span<const std::size_t> labels,
                                      const Permutation& perm) {
  if (labels.size() != perm.size()) {
    throw SizeMismatchError("cluster_contiguity: label count does not match permutation");
  }
  std::size_t switches = 0;
  for (std::size_t i = 0; i + 1 < perm.size(); ++i) {
    if (labels[perm(i)] != labels[perm(i + 1)]) ++switches;
  }
  return switches;
}

/// Grid benchmark on the diagonal gradation model. All methods share the same
/// instance within a (sigma, trial) cell; every cell derives its own seed so
/// any single cell can be replayed in isolation.
struct BenchmarkConfig {
  std::vector<double> sigmas;
  std::size_t trials = 10;
  std::vector<std::string> methods{"deeptmr", "svd-rank1", "svd-angle", "mds"};
  std::size_t n = 100;
  std::size_t p = 100;
  std::uint64_t seed = 0;
  TrainConfig deeptmr = [] {
    TrainConfig cfg;
    cfg.epochs = 200;
    cfg.restarts = 5;
    return cfg;
  }();
  std::size_t jobs = 1;

  static std::vector<double> default_sigma_grid() {
    std::vector<double> s;
    for (int t = 1; t <= 10; ++t) s.push_back(0.03 * t);
    return s;
  }
};

struct BenchmarkRow {
  std::string method;
  double sigma = 0.0;
  std::size_t sigma_index = 0;
  std::size_t trial = 0;
  std::uint64_t cell_seed = 0;
  double error = std::numeric_limits<double>::quiet_NaN();
  int row_flip = 0;
  int col_flip = 0;
  double wall_time_ms = 0.0;
  std::optional<double> selection_score;  // deeptmr only
  std::string failure;                    // empty on success
};

struct BenchmarkAggregate {
  std::string method;
  double sigma = 0.0;
  std::size_t trials_ok = 0;
  double mean_error = std::numeric_limits<double>::quiet_NaN();
  double std_error = std::numeric_limits<double>::quiet_NaN();  // sample std, n-1
};

struct BenchmarkReport {
  BenchmarkConfig config;
  std::vector<BenchmarkRow> rows;
  std::vector<BenchmarkAggregate> aggregates;
};

namespace detail {

inline void run_benchmark_cell(const BenchmarkConfig& cfg, BenchmarkRow& row) {
  const auto started = std::chrono::steady_clock::now();
  try {
    DgmParams params;
    params.n = cfg.n;
    params.p = cfg.p;
    params.sigma = row.sigma;
    Rng instance_rng(derive_seed(row.cell_seed, 0));
    SyntheticInstance inst = dgm_generate(params, instance_rng);
    inst.seed = row.cell_seed;

    Permutation row_perm, col_perm;
    if (row.method == "deeptmr") {
      TrainConfig train_cfg = cfg.deeptmr;
      train_cfg.seed = derive_seed(row.cell_seed, 1);
      RestartOutcome outcome = train_with_restarts(inst.observed, train_cfg);
      row_perm = outcome.result.row_perm;
      col_perm = outcome.result.col_perm;
      row.selection_score = outcome.selection_scores[outcome.selected_trial];
    } else if (row.method == "svd-rank1") {
      BaselineResult r = svd_rank_one_order(inst.observed);
      row_perm = std::move(r.row_perm);
      col_perm = std::move(r.col_perm);
    } else if (row.method == "svd-angle") {
      BaselineResult r = svd_angle_order(inst.observed);
      row_perm = std::move(r.row_perm);
      col_perm = std::move(r.col_perm);
    } else if (row.method == "mds") {
      BaselineResult r = mds_order(inst.observed);
      row_perm = std::move(r.row_perm);
      col_perm = std::move(r.col_perm);
    } else {
      throw BadRangeError("run_benchmark: unknown method " + row.method);
    }

    const ErrorBreakdown e = reordering_error(inst.mean_bar, inst.mean_observed, row_perm,
                                              col_perm);
    row.error = e.error;
    row.row_flip = e.row_flip;
    row.col_flip = e.col_flip;
  } catch (const Error& err) {
    row.failure = err.what();
  }
  row.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
          .count();
}

}  // namespace detail

inline BenchmarkReport run_benchmark(const BenchmarkConfig& cfg) {
  if (cfg.sigmas.empty()) throw BadRangeError("run_benchmark: empty sigma grid");
  if (cfg.trials == 0) throw BadRangeError("run_benchmark: trials must be >= 1");
  if (cfg.methods.empty()) throw BadRangeError("run_benchmark: no methods configured");
  for (const auto& m : cfg.methods) {
    if (m != "deeptmr" && m != "svd-rank1" && m != "svd-angle" && m != "mds") {
      throw BadRangeError("run_benchmark: unknown method " + m);
    }
  }

  BenchmarkReport report;
  report.config = cfg;
  for (std::size_t t = 0; t < cfg.sigmas.size(); ++t) {
    for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
      const std::uint64_t cell_seed = derive_seed(cfg.seed, t, trial);
      for (const auto& method : cfg.methods) {
        BenchmarkRow row;
        row.method = method;
        row.sigma = cfg.sigmas[t];
        row.sigma_index = t;
        row.trial = trial;
        row.cell_seed = cell_seed;
        report.rows.push_back(std::move(row));
      }
    }
  }

  const std::size_t jobs = std::max<std::size_t>(1, cfg.jobs);
  if (jobs == 1 || report.rows.size() == 1) {
    for (auto& row : report.rows) detail::run_benchmark_cell(cfg, row);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const std::size_t workers = std::min(jobs, report.rows.size());
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t k = next.fetch_add(1);
          if (k >= report.rows.size()) return;
          detail::run_benchmark_cell(cfg, report.rows[k]);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  for (std::size_t t = 0; t < cfg.sigmas.size(); ++t) {
    for (const auto& method : cfg.methods) {
      BenchmarkAggregate agg;
      agg.method = method;
      agg.sigma = cfg.sigmas[t];
      double sum = 0.0;
      std::vector<double> values;
      for (const auto& row : report.rows) {
        if (row.sigma_index == t && row.method == method && row.failure.empty()) {
          values.push_back(row.error);
          sum += row.error;
        }
      }
      agg.trials_ok = values.size();
      if (!values.empty()) {
        agg.mean_error = sum / static_cast<double>(values.size());
        if (values.size() > 1) {
          double ss = 0.0;
          for (double v : values) ss += (v - agg.mean_error) * (v - agg.mean_error);
          agg.std_error = std::sqrt(ss / static_cast<double>(values.size() - 1));
        } else {
          agg.std_error = 0.0;
        }
      }
      report.aggregates.push_back(std::move(agg));
    }
  }
  return report;
}

}  // namespace seriate
