#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "seriate/errors.hpp"
#include "seriate/linalg.hpp"
#include "seriate/matrix.hpp"
#include "seriate/permutation.hpp"

namespace seriate {

/// Output of a deterministic reordering method. Scores are stored in original
/// index order; applying the permutation to them yields a nondecreasing
/// sequence.
struct BaselineResult {
  std::string method;
  Permutation row_perm;
  Permutation col_perm;
  std::vector<double> row_scores;
  std::vector<double> col_scores;
  std::optional<DenseMatrix> denoised;
  std::vector<std::size_t> degenerate_rows;  // zero-variance rows hit the scaling guard
  std::vector<std::size_t> degenerate_cols;
};

/// Orders rows by sqrt(sigma1) * u1 and columns by sqrt(sigma1) * v1; the
/// denoised output is the best rank-one approximation.
inline BaselineResult svd_rank_one_order(const DenseMatrix& a) {
  const SingularTriplet t = top_singular_triplet(a);
  const double scale = std::sqrt(t.sigma);
  BaselineResult res;
  res.method = "svd-rank1";
  res.row_scores.resize(a.rows());
  res.col_scores.resize(a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) res.row_scores[i] = scale * t.left[i];
  for (std::size_t j = 0; j < a.cols(); ++j) res.col_scores[j] = scale * t.right[j];
  res.row_perm = argsort(res.row_scores);
  res.col_perm = argsort(res.col_scores);
  DenseMatrix denoised(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      denoised(i, j) = res.row_scores[i] * res.col_scores[j];
    }
  }
  res.denoised = std::move(denoised);
  return res;
}

/// Angle of a point against the top two singular-vector coordinates:
/// atan(u2 / u1) plus pi when u1 <= 0. Lands in (-pi/2, 3pi/2].
inline double angle_from_components(double u1, double u2) {
  double base = 0.0;
  if (u1 != 0.0 || u2 != 0.0) base = std::atan(u2 / u1);
  return base + (u1 <= 0.0 ? std::numbers::pi : 0.0);
}

namespace detail {

struct AngleAxis {
  Permutation perm;
  std::vector<double> scores;
  std::vector<std::size_t> degenerate;
};

/// Rows of M are mean-centered and scaled by their root mean square
/// (population 1/p, denominator guarded at 1e-12); the order comes from the
/// angles between the top two row singular vectors, cut at the largest
/// circular gap.
inline AngleAxis angle_order_for_rows(const DenseMatrix& m) {
  const std::size_t n = m.rows();
  const std::size_t p = m.cols();
  constexpr double kGuard = 1e-12;
  AngleAxis out;

  DenseMatrix scaled(n, p);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = m.row(i);
    double mean = 0.0;
    for (double v : row) mean += v;
    mean /= static_cast<double>(p);
    double ms = 0.0;
    for (double v : row) ms += (v - mean) * (v - mean);
    double rms = std::sqrt(ms / static_cast<double>(p));
    if (rms <= kGuard) {
      rms = kGuard;
      out.degenerate.push_back(i);
    }
    auto dst = scaled.row(i);
    for (std::size_t j = 0; j < p; ++j) dst[j] = (row[j] - mean) / rms;
  }

  SingularTriplet t1, t2;
  try {
    std::tie(t1, t2) = top_two_singular(scaled);
  } catch (const ZeroMatrixError&) {
    throw RankDeficientError("svd_angle_order: centered matrix is zero");
  }

  std::vector<double> alpha(n);
  for (std::size_t i = 0; i < n; ++i) {
    alpha[i] = angle_from_components(t1.left[i], t2.left[i]);
  }

  // Cut the circular angle sequence after the largest gap between adjacent
  // sorted angles (wrap-around gap included); first occurrence wins ties.
  const Permutation sorted = argsort(alpha);
  double best_gap = -1.0;
  std::size_t best_k = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double lo = alpha[sorted(k)];
    const double hi =
        k + 1 < n ? alpha[sorted(k + 1)] : alpha[sorted(0)] + 2.0 * std::numbers::pi;
    const double gap = hi - lo;
    if (gap > best_gap) {
      best_gap = gap;
      best_k = k;
    }
  }
  const std::size_t start = (best_k + 1) % n;
  std::vector<std::size_t> order(n);
  out.scores.resize(n);
  for (std::size_t step = 0; step < n; ++step) {
    const std::size_t pos = (start + step) % n;
    const std::size_t original = sorted(pos);
    order[step] = original;
    out.scores[original] = alpha[original] + (start + step >= n ? 2.0 * std::numbers::pi : 0.0);
  }
  out.perm = Permutation::from_mapping(std::move(order));
  return out;
}

struct MdsAxis {
  Permutation perm;
  std::vector<double> scores;
};

/// Classical MDS scores from the double-centered squared row distances; the
/// one-dimensional embedding is sqrt(lambda1) * v1.
inline MdsAxis mds_order_for_rows(const DenseMatrix& m) {
  const std::size_t n = m.rows();
  const DenseMatrix d = pairwise_row_distances(m);

  std::vector<double> row_mean(n, 0.0);
  double grand = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double sq = d(i, j) * d(i, j);
      row_mean[i] += sq;
      grand += sq;
    }
    row_mean[i] /= static_cast<double>(n);
  }
  grand /= static_cast<double>(n) * static_cast<double>(n);

  DenseMatrix b(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      b(i, j) = -0.5 * (d(i, j) * d(i, j) - row_mean[i] - row_mean[j] + grand);
    }
  }

  const EigenPair top = top_eigenpair_sym(b);
  const double scale = std::sqrt(std::max(top.value, 0.0));
  MdsAxis out;
  out.scores.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.scores[i] = scale * top.vector[i];
  out.perm = argsort(out.scores);
  return out;
}

}  // namespace detail

/// Angle-based ordering from the top two singular vectors of the row-wise
/// centered and scaled matrix; columns use the same procedure on the
/// transpose.
inline BaselineResult svd_angle_order(const DenseMatrix& a) {
  if (a.rows() < 2 || a.cols() < 2) {
    throw SizeMismatchError("svd_angle_order: requires at least a 2x2 matrix");
  }
  detail::AngleAxis rows = detail::angle_order_for_rows(a);
  detail::AngleAxis cols = detail::angle_order_for_rows(a.transposed());
  BaselineResult res;
  res.method = "svd-angle";
  res.row_perm = std::move(rows.perm);
  res.col_perm = std::move(cols.perm);
  res.row_scores = std::move(rows.scores);
  res.col_scores = std::move(cols.scores);
  res.degenerate_rows = std::move(rows.degenerate);
  res.degenerate_cols = std::move(cols.degenerate);
  return res;
}

/// Classical multidimensional scaling on Euclidean row (and column) distances,
/// keeping only the top embedding coordinate. A side with a single element
/// degenerates to the identity order via the zero-spectrum path.
inline BaselineResult mds_order(const DenseMatrix& a) {
  if (a.rows() < 1 || a.cols() < 1) {
    throw SizeMismatchError("mds_order: empty matrix");
  }
  detail::MdsAxis rows = detail::mds_order_for_rows(a);
  detail::MdsAxis cols = detail::mds_order_for_rows(a.transposed());
  BaselineResult res;
  res.method = "mds";
  res.row_perm = std::move(rows.perm);
  res.col_perm = std::move(cols.perm);
  res.row_scores = std::move(rows.scores);
  res.col_scores = std::move(cols.scores);
  return res;
}

}  // namespace seriate
