#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "seriate/errors.hpp"
#include "seriate/matrix.hpp"
#include "seriate/permutation.hpp"
#include "seriate/rng.hpp"

namespace seriate {

/// A generated benchmark instance. `observed` and `mean_observed` are `a_bar`
/// and `mean_bar` with the same random row/column shuffle applied. `mean_bar`
/// is rescaled with the min/max of the realized noisy matrix so both live on
/// one affine scale.
struct SyntheticInstance {
  std::string model;
  DenseMatrix a_bar;           // latent-order data, normalized to [0, 1]
  DenseMatrix mean_bar;        // latent-order means on the same scale
  DenseMatrix observed;        // shuffled a_bar
  DenseMatrix mean_observed;   // shuffled mean_bar
  Permutation true_row_perm;   // shuffle: observed = apply(a_bar, row, col)
  Permutation true_col_perm;
  double sigma = 0.0;
  std::uint64_t seed = 0;                // caller-provided bookkeeping
  double norm_min = 0.0;                 // affine map used by the normalization
  double norm_max = 1.0;
  std::vector<std::size_t> row_labels;   // latent-order cluster ids (LBM only)
  std::vector<std::size_t> col_labels;
};

struct ShuffleResult {
  DenseMatrix observed;
  DenseMatrix mean_observed;
  Permutation row_perm;
  Permutation col_perm;
};

/// Applies one random row permutation and one random column permutation
/// identically to the data matrix and its mean matrix.
inline ShuffleResult shuffle_instance(const DenseMatrix& a_bar, const DenseMatrix& mean_bar,
                                      Rng& rng) {
  if (a_bar.rows() != mean_bar.rows() || a_bar.cols() != mean_bar.cols()) {
    throw SizeMismatchError("shuffle_instance: data and mean shapes disagree");
  }
  ShuffleResult out;
  out.row_perm = rng.random_permutation(a_bar.rows());
  out.col_perm = rng.random_permutation(a_bar.cols());
  out.observed = apply_permutation(a_bar, out.row_perm, out.col_perm);
  out.mean_observed = apply_permutation(mean_bar, out.row_perm, out.col_perm);
  return out;
}

namespace detail {

/// Draws entry = mean + sigma * N(0,1) in row-major order, rescales data and
/// means with the data extremes, then shuffles.
inline SyntheticInstance assemble_instance(std::string model, const DenseMatrix& means,
                                           double sigma, Rng& rng) {
  if (sigma < 0.0) throw BadRangeError(model + ": sigma must be >= 0");
  const std::size_t n = means.rows();
  const std::size_t p = means.cols();
  DenseMatrix raw(n, p);
  for (std::size_t k = 0; k < raw.size(); ++k) {
    raw.entries()[k] = means.entries()[k] + sigma * rng.standard_normal();
  }
  const auto [lo, hi] = raw.min_max();
  if (!(hi > lo)) {
    throw DegenerateRangeError(model + ": generated matrix is constant, cannot normalize");
  }
  const double range = hi - lo;
  SyntheticInstance inst;
  inst.model = std::move(model);
  inst.sigma = sigma;
  inst.norm_min = lo;
  inst.norm_max = hi;
  inst.a_bar = DenseMatrix(n, p);
  inst.mean_bar = DenseMatrix(n, p);
  for (std::size_t k = 0; k < raw.size(); ++k) {
    inst.a_bar.entries()[k] = (raw.entries()[k] - lo) / range;
    inst.mean_bar.entries()[k] = (means.entries()[k] - lo) / range;
  }
  ShuffleResult sh = shuffle_instance(inst.a_bar, inst.mean_bar, rng);
  inst.observed = std::move(sh.observed);
  inst.mean_observed = std::move(sh.mean_observed);
  inst.true_row_perm = std::move(sh.row_perm);
  inst.true_col_perm = std::move(sh.col_perm);
  return inst;
}

inline std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

}  // namespace detail

struct LbmParams {
  std::size_t n = 100;
  std::size_t p = 100;
  std::size_t row_clusters = 3;
  std::size_t col_clusters = 3;
  DenseMatrix block_means = DenseMatrix::from_rows({{0.9, 0.4, 0.8},
                                                    {0.1, 0.6, 0.2},
                                                    {0.5, 0.3, 0.7}});
  double sigma = 0.05;
};

/// Latent block model: contiguous row/column clusters of size ceil(n/K) and
/// ceil(p/H) (last cluster truncated), block-constant Gaussian means.
inline SyntheticInstance lbm_generate(const LbmParams& params, Rng& rng) {
  const auto [n, p] = std::pair{params.n, params.p};
  const std::size_t k = params.row_clusters;
  const std::size_t h = params.col_clusters;
  if (k == 0 || h == 0 || k > n || h > p) {
    throw BadRangeError("lbm_generate: cluster counts must satisfy 1 <= K <= n, 1 <= H <= p");
  }
  if (params.block_means.rows() != k || params.block_means.cols() != h) {
    throw SizeMismatchError("lbm_generate: block mean matrix must be K x H");
  }
  const std::size_t row_span = detail::ceil_div(n, k);
  const std::size_t col_span = detail::ceil_div(p, h);
  std::vector<std::size_t> row_labels(n), col_labels(p);
  for (std::size_t i = 0; i < n; ++i) row_labels[i] = std::min(i / row_span, k - 1);
  for (std::size_t j = 0; j < p; ++j) col_labels[j] = std::min(j / col_span, h - 1);
  DenseMatrix means(n, p);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      means(i, j) = params.block_means(row_labels[i], col_labels[j]);
    }
  }
  SyntheticInstance inst = detail::assemble_instance("lbm", means, params.sigma, rng);
  inst.row_labels = std::move(row_labels);
  inst.col_labels = std::move(col_labels);
  return inst;
}

struct SpmParams {
  std::size_t n = 100;
  std::size_t p = 100;
  std::size_t clusters = 4;
  std::vector<double> stripe_means{0.9, 0.6, 0.3, 0.1};
  double sigma = 0.05;
};

/// Striped pattern model: the cluster of entry (i, j) depends on i + j,
/// producing anti-diagonal stripes of width ceil((n+p)/K).
inline SyntheticInstance spm_generate(const SpmParams& params, Rng& rng) {
  const std::size_t n = params.n;
  const std::size_t p = params.p;
  const std::size_t k = params.clusters;
  if (k == 0) throw BadRangeError("spm_generate: clusters must be >= 1");
  if (params.stripe_means.size() != k) {
    throw SizeMismatchError("spm_generate: need one mean per cluster");
  }
  const std::size_t span = detail::ceil_div(n + p, k);
  DenseMatrix means(n, p);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      means(i, j) = params.stripe_means[std::min((i + j) / span, k - 1)];
    }
  }
  return detail::assemble_instance("spm", means, params.sigma, rng);
}

struct GbmParams {
  std::size_t n = 100;
  std::size_t p = 100;
  double sigma = 0.05;
};

/// Gradation block model: flat 0.1 background with a left-to-right gradient
/// from 0.1 to 0.9 inside the top-left ceil(n/2) x ceil(p/2) block.
inline SyntheticInstance gbm_generate(const GbmParams& params, Rng& rng) {
  const std::size_t n = params.n;
  const std::size_t p = params.p;
  const std::size_t n0 = detail::ceil_div(n, 2);
  const std::size_t p0 = detail::ceil_div(p, 2);
  if (p0 < 2) throw BadRangeError("gbm_generate: gradation block needs at least two columns");
  DenseMatrix means(n, p);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      if (i < n0 && j < p0) {
        means(i, j) = 0.8 * static_cast<double>(j) / static_cast<double>(p0 - 1) + 0.1;
      } else {
        means(i, j) = 0.1;
      }
    }
  }
  return detail::assemble_instance("gbm", means, params.sigma, rng);
}

struct DgmParams {
  std::size_t n = 100;
  std::size_t p = 100;
  double sigma = 0.05;
};

/// Diagonal gradation model: mean 0.9 - 0.8 |i - j| / max(n, p). The latent
/// order is unique up to flips, which makes it the benchmark model.
inline SyntheticInstance dgm_generate(const DgmParams& params, Rng& rng) {
  const std::size_t n = params.n;
  const std::size_t p = params.p;
  if (n == 0 || p == 0) throw BadRangeError("dgm_generate: empty matrix");
  const double denom = static_cast<double>(std::max(n, p));
  DenseMatrix means(n, p);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      const double dist = i > j ? static_cast<double>(i - j) : static_cast<double>(j - i);
      means(i, j) = 0.9 - 0.8 * dist / denom;
    }
  }
  return detail::assemble_instance("dgm", means, params.sigma, rng);
}

}  // namespace seriate
