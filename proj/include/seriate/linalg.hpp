#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "seriate/errors.hpp"
#include "seriate/matrix.hpp"
#include "seriate/rng.hpp"

namespace seriate {

namespace detail {

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

/// y = M x.
inline std::vector<double> multiply(const DenseMatrix& m, std::span<const double> x) {
  std::vector<double> y(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) y[i] = dot(m.row(i), x);
  return y;
}

/// y = M^T x.
inline std::vector<double> multiply_transpose(const DenseMatrix& m, std::span<const double> x) {
  std::vector<double> y(m.cols(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto row = m.row(i);
    const double xi = x[i];
    for (std::size_t j = 0; j < m.cols(); ++j) y[j] += xi * row[j];
  }
  return y;
}

inline void scale(std::vector<double>& v, double factor) {
  for (double& x : v) x *= factor;
}

/// Sign convention: entry sum >= 0; on an exact tie the first nonzero entry
/// is made positive. Returns true when a flip is required.
inline bool needs_sign_flip(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  if (s < 0.0) return true;
  if (s > 0.0) return false;
  for (double x : v) {
    if (x != 0.0) return x < 0.0;
  }
  return false;
}

/// Deterministic unit start vector for the iterative solvers.
inline std::vector<double> start_vector(std::size_t n, std::uint64_t attempt) {
  Rng rng(0x5eed5eed5eed5eedULL, attempt);
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(-1.0, 1.0);
  const double nv = norm2(v);
  scale(v, 1.0 / nv);
  return v;
}

inline bool max_abs_is_zero(const DenseMatrix& m) {
  for (double v : m.entries()) {
    if (v != 0.0) return false;
  }
  return true;
}

}  // namespace detail

/// Top singular value with unit left/right singular vectors.
struct SingularTriplet {
  double sigma = 0.0;
  std::vector<double> left;
  std::vector<double> right;
};

/// Largest singular triplet of M by alternating power iteration on the Gram
/// operator. Accepts once consecutive sigma estimates agree to
/// tol * max(1, sigma) and the residual ||M right - sigma left|| is within the
/// same bound, so both post-conditions hold: M^T left = sigma * right exactly
/// by construction, M right ~ sigma * left within tolerance.
inline SingularTriplet top_singular_triplet(const DenseMatrix& m, double tol = 1e-10,
                                            std::size_t max_iter = 10000) {
  if (m.rows() == 0 || m.cols() == 0) throw SizeMismatchError("top_singular_triplet: empty matrix");
  if (!(tol > 0.0)) throw BadRangeError("top_singular_triplet: tol must be positive");
  if (detail::max_abs_is_zero(m)) throw ZeroMatrixError("top_singular_triplet: zero matrix");

  std::vector<double> v = detail::start_vector(m.cols(), 0);
  std::uint64_t attempt = 0;
  double sigma_prev = -1.0;
  std::vector<double> u;
  double sigma = 0.0;

  for (std::size_t iter = 0; iter < max_iter; ++iter) {
    u = detail::multiply(m, v);
    const double nu = detail::norm2(u);
    if (nu == 0.0) {
      // v landed in the null space; restart from a fresh direction.
      v = detail::start_vector(m.cols(), ++attempt);
      sigma_prev = -1.0;
      continue;
    }
    detail::scale(u, 1.0 / nu);
    std::vector<double> w = detail::multiply_transpose(m, u);
    sigma = detail::norm2(w);
    if (sigma == 0.0) {
      v = detail::start_vector(m.cols(), ++attempt);
      sigma_prev = -1.0;
      continue;
    }
    v = std::move(w);
    detail::scale(v, 1.0 / sigma);
    if (sigma_prev >= 0.0 && std::abs(sigma - sigma_prev) <= tol * std::max(1.0, sigma)) {
      const std::vector<double> mv = detail::multiply(m, v);
      double residual_sq = 0.0;
      for (std::size_t i = 0; i < mv.size(); ++i) {
        const double d = mv[i] - sigma * u[i];
        residual_sq += d * d;
      }
      if (std::sqrt(residual_sq) <= tol * std::max(1.0, sigma)) {
        if (detail::needs_sign_flip(u)) {
          detail::scale(u, -1.0);
          detail::scale(v, -1.0);
        }
        return {sigma, std::move(u), std::move(v)};
      }
    }
    sigma_prev = sigma;
  }
  throw NoConvergenceError("top_singular_triplet: no convergence after max_iter iterations");
}

/// Top two singular triplets; the second comes from power iteration on the
/// deflated matrix M - sigma1 u1 v1^T. Throws RankDeficientError when the
/// residual spectrum is below tol * max(1, sigma1).
inline std::pair<SingularTriplet, SingularTriplet> top_two_singular(const DenseMatrix& m,
                                                                    double tol = 1e-10,
                                                                    std::size_t max_iter = 10000) {
  SingularTriplet first = top_singular_triplet(m, tol, max_iter);
  DenseMatrix deflated(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      deflated(i, j) = m(i, j) - first.sigma * first.left[i] * first.right[j];
    }
  }
  SingularTriplet second;
  try {
    second = top_singular_triplet(deflated, tol, max_iter);
  } catch (const ZeroMatrixError&) {
    throw RankDeficientError("top_two_singular: matrix has numerical rank one");
  }
  if (second.sigma <= tol * std::max(1.0, first.sigma)) {
    throw RankDeficientError("top_two_singular: second singular value below tolerance");
  }
  return {std::move(first), std::move(second)};
}

struct EigenPair {
  double value = 0.0;
  std::vector<double> vector;
  bool zero_spectrum = false;
};

/// Largest eigenpair of a symmetric PSD matrix by power iteration with
/// Rayleigh-quotient estimates; accepts once the eigenvalue stabilizes and
/// ||B v - lambda v|| <= tol * max(1, |lambda|). A zero matrix yields value 0
/// with the zero_spectrum flag set.
inline EigenPair top_eigenpair_sym(const DenseMatrix& b, double tol = 1e-10,
                                   std::size_t max_iter = 10000) {
  if (b.rows() != b.cols() || b.rows() == 0) {
    throw SizeMismatchError("top_eigenpair_sym: matrix must be square and nonempty");
  }
  for (std::size_t i = 0; i < b.rows(); ++i) {
    for (std::size_t j = i + 1; j < b.cols(); ++j) {
      if (std::abs(b(i, j) - b(j, i)) > 1e-10) {
        throw NotSymmetricError("top_eigenpair_sym: matrix is not symmetric");
      }
    }
  }
  if (detail::max_abs_is_zero(b)) {
    std::vector<double> e0(b.rows(), 0.0);
    e0[0] = 1.0;
    return {0.0, std::move(e0), true};
  }

  std::vector<double> x = detail::start_vector(b.rows(), 0);
  std::uint64_t attempt = 0;
  double lambda_prev = 0.0;
  bool have_prev = false;

  for (std::size_t iter = 0; iter < max_iter; ++iter) {
    std::vector<double> y = detail::multiply(b, x);
    const double lambda = detail::dot(x, y);
    const double ny = detail::norm2(y);
    if (ny == 0.0) {
      x = detail::start_vector(b.rows(), ++attempt);
      have_prev = false;
      continue;
    }
    if (have_prev && std::abs(lambda - lambda_prev) <= tol * std::max(1.0, std::abs(lambda))) {
      double residual_sq = 0.0;
      for (std::size_t i = 0; i < y.size(); ++i) {
        const double d = y[i] - lambda * x[i];
        residual_sq += d * d;
      }
      if (std::sqrt(residual_sq) <= tol * std::max(1.0, std::abs(lambda))) {
        if (detail::needs_sign_flip(x)) detail::scale(x, -1.0);
        return {lambda, std::move(x), false};
      }
    }
    lambda_prev = lambda;
    have_prev = true;
    x = std::move(y);
    detail::scale(x, 1.0 / ny);
  }
  throw NoConvergenceError("top_eigenpair_sym: no convergence after max_iter iterations");
}

}  // namespace seriate
