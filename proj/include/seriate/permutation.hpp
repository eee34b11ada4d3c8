#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "seriate/errors.hpp"

namespace seriate {

/// Bijection on {0..size-1}, stored as target position -> source index.
class Permutation {
 public:
  Permutation() = default;

  /// Identity permutation of the given size.
  explicit Permutation(std::size_t size) : mapping_(size) {
    std::iota(mapping_.begin(), mapping_.end(), std::size_t{0});
  }

  /// Validates that `mapping` is a bijection on {0..n-1}.
  static Permutation from_mapping(std::vector<std::size_t> mapping) {
    std::vector<bool> seen(mapping.size(), false);
    for (std::size_t v : mapping) {
      if (v >= mapping.size() || seen[v]) {
        throw BadRangeError("permutation mapping is not a bijection");
      }
      seen[v] = true;
    }
    Permutation p;
    p.mapping_ = std::move(mapping);
    return p;
  }

  std::size_t size() const { return mapping_.size(); }

  /// Source index placed at target position i.
  std::size_t operator()(std::size_t i) const { return mapping_[i]; }

  const std::vector<std::size_t>& mapping() const { return mapping_; }

  bool is_identity() const {
    for (std::size_t i = 0; i < mapping_.size(); ++i) {
      if (mapping_[i] != i) return false;
    }
    return true;
  }

  /// Inverse bijection: inverse()(this(i)) == i.
  Permutation inverse() const {
    Permutation inv;
    inv.mapping_.resize(mapping_.size());
    for (std::size_t i = 0; i < mapping_.size(); ++i) {
      inv.mapping_[mapping_[i]] = i;
    }
    return inv;
  }

  /// Order reversal: flipped()(i) == (*this)(size-1-i).
  Permutation flipped() const {
    Permutation rev;
    rev.mapping_.assign(mapping_.rbegin(), mapping_.rend());
    return rev;
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<std::size_t> mapping_;
};

inline Permutation invert_permutation(const Permutation& p) { return p.inverse(); }

/// Stable ascending argsort: values[result(0)] <= values[result(1)] <= ...
/// Ties keep their original relative order.
inline Permutation argsort(std::span<const double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) throw NonFiniteError("argsort: non-finite value");
  }
  std::vector<std::size_t> idx(values.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  return Permutation::from_mapping(std::move(idx));
}

inline Permutation argsort(const std::vector<double>& values) {
  return argsort(std::span<const double>(values));
}

}  // namespace seriate
