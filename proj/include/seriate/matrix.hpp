#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "seriate/errors.hpp"
#include "seriate/permutation.hpp"

namespace seriate {

/// Dense real matrix, row-major.
class DenseMatrix {
 public:
  DenseMatrix() = default;

  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), entries_(rows * cols, fill) {}

  static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    DenseMatrix m;
    m.rows_ = rows.size();
    m.cols_ = rows.size() ? rows.begin()->size() : 0;
    m.entries_.reserve(m.rows_ * m.cols_);
    for (const auto& r : rows) {
      if (r.size() != m.cols_) throw SizeMismatchError("from_rows: ragged rows");
      m.entries_.insert(m.entries_.end(), r.begin(), r.end());
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return entries_.size(); }

  double& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const {
    return {entries_.data() + i * cols_, cols_};
  }
  std::span<double> row(std::size_t i) { return {entries_.data() + i * cols_, cols_}; }

  std::vector<double> col(std::size_t j) const {
    std::vector<double> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = entries_[i * cols_ + j];
    return c;
  }

  const std::vector<double>& entries() const { return entries_; }
  std::vector<double>& entries() { return entries_; }

  DenseMatrix transposed() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    }
    return t;
  }

  bool all_finite() const {
    for (double v : entries_) {
      if (!std::isfinite(v)) return false;
    }
    return true;
  }

  std::pair<double, double> min_max() const {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (double v : entries_) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    return {lo, hi};
  }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> entries_;
};

/// Affine rescale onto [0, 1]: (v - min) / (max - min). The extreme entries map
/// to exactly 0 and 1.
inline DenseMatrix normalize_unit_range(const DenseMatrix& m) {
  auto [lo, hi] = m.min_max();
  if (!(hi > lo)) {
    throw DegenerateRangeError("normalize_unit_range: constant matrix (max == min)");
  }
  const double range = hi - lo;
  DenseMatrix out(m.rows(), m.cols());
  for (std::size_t k = 0; k < m.size(); ++k) {
    out.entries()[k] = (m.entries()[k] - lo) / range;
  }
  return out;
}

/// Entrywise log(v + 1); requires all entries >= 0.
inline DenseMatrix log1p_transform(const DenseMatrix& m) {
  DenseMatrix out(m.rows(), m.cols());
  for (std::size_t k = 0; k < m.size(); ++k) {
    const double v = m.entries()[k];
    if (v < 0.0) throw NegativeEntryError("log1p_transform: negative entry");
    out.entries()[k] = std::log1p(v);
  }
  return out;
}

/// result[i][j] = m[row_p(i)][col_p(j)].
inline DenseMatrix apply_permutation(const DenseMatrix& m, const Permutation& row_p,
                                     const Permutation& col_p) {
  if (row_p.size() != m.rows() || col_p.size() != m.cols()) {
    throw SizeMismatchError("apply_permutation: permutation size does not match matrix");
  }
  DenseMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto src = m.row(row_p(i));
    auto dst = out.row(i);
    for (std::size_t j = 0; j < m.cols(); ++j) dst[j] = src[col_p(j)];
  }
  return out;
}

/// Symmetric n x n matrix of Euclidean distances between rows; zero diagonal.
inline DenseMatrix pairwise_row_distances(const DenseMatrix& m) {
  const std::size_t n = m.rows();
  DenseMatrix d(n, n, 0.0);
  for (std::size_t a = 0; a < n; ++a) {
    const auto ra = m.row(a);
    for (std::size_t b = a + 1; b < n; ++b) {
      const auto rb = m.row(b);
      double s = 0.0;
      for (std::size_t j = 0; j < m.cols(); ++j) {
        const double diff = ra[j] - rb[j];
        s += diff * diff;
      }
      const double dist = std::sqrt(s);
      d(a, b) = dist;
      d(b, a) = dist;
    }
  }
  return d;
}

}  // namespace seriate
