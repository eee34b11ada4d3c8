#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>
#include <vector>

#include "seriate/errors.hpp"
#include "seriate/permutation.hpp"

namespace seriate {

namespace detail {

/// SplitMix64 finalizer. Bijective on 64-bit words.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

/// Derives an independent seed from a base seed and a stream id.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return detail::mix64(base + 0x9e3779b97f4a7c15ULL * (stream + 1));
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  return derive_seed(derive_seed(base, a), b);
}

/// Deterministic 64-bit generator (SplitMix64). Identical seed gives an
/// identical sequence on every platform. Single-owner mutable state; parallel
/// work derives one Rng per task via derive_seed.
class Rng {
 public:
  static constexpr const char* kAlgorithmId = "splitmix64";

  explicit Rng(std::uint64_t seed) : state_(seed) {}
  Rng(std::uint64_t seed, std::uint64_t stream) : state_(derive_seed(seed, stream)) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return detail::mix64(state_);
  }

  /// Uniform double in [0, 1), 53-bit resolution.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) {
    if (!(lo < hi)) throw BadRangeError("uniform: requires lo < hi");
    return lo + next_double() * (hi - lo);
  }

  /// One standard-normal draw (Box-Muller); the paired draw is cached.
  double standard_normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // u1 in (0, 1] so the log is finite.
    const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    const double u2 = next_double();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  /// Unbiased uniform integer in [0, bound) by rejection.
  std::uint64_t next_below(std::uint64_t bound) {
    if (bound == 0) throw BadRangeError("next_below: bound must be positive");
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  /// Uniformly distributed permutation of {0..m-1} (Fisher-Yates).
  Permutation random_permutation(std::size_t m) {
    if (m == 0) throw BadRangeError("random_permutation: m must be >= 1");
    std::vector<std::size_t> v(m);
    for (std::size_t i = 0; i < m; ++i) v[i] = i;
    for (std::size_t i = m - 1; i > 0; --i) {
      const std::size_t j = static_cast<std::size_t>(next_below(i + 1));
      std::swap(v[i], v[j]);
    }
    return Permutation::from_mapping(std::move(v));
  }

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// `batch` (row, col) index pairs drawn uniformly with replacement from the
/// n x p grid. Row index is drawn before column index for each pair.
inline std::vector<std::pair<std::size_t, std::size_t>> sample_batch(Rng& rng, std::size_t n,
                                                                     std::size_t p,
                                                                     std::size_t batch) {
  if (batch == 0) throw BadRangeError("sample_batch: batch must be >= 1");
  std::vector<std::pair<std::size_t, std::size_t>> out;
  out.reserve(batch);
  for (std::size_t k = 0; k < batch; ++k) {
    const std::size_t i = static_cast<std::size_t>(rng.next_below(n));
    const std::size_t j = static_cast<std::size_t>(rng.next_below(p));
    out.emplace_back(i, j);
  }
  return out;
}

}  // namespace seriate
