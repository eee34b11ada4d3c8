#include <gtest/gtest.h>

#include <cmath>

#include "seriate/matrix.hpp"
#include "seriate/permutation.hpp"
#include "seriate/rng.hpp"

using namespace seriate;

namespace {

DenseMatrix random_matrix(std::size_t n, std::size_t p, Rng& rng, double lo = -1.0,
                          double hi = 1.0) {
  DenseMatrix m(n, p);
  for (double& v : m.entries()) v = rng.uniform(lo, hi);
  return m;
}

}  // namespace

TEST(NormalizeUnitRange, AffineMapForced) {
  const DenseMatrix m = DenseMatrix::from_rows({{1, 3}, {3, 5}});
  const DenseMatrix out = normalize_unit_range(m);
  EXPECT_DOUBLE_EQ(out(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(out(0, 1), 0.5);
  EXPECT_DOUBLE_EQ(out(1, 0), 0.5);
  EXPECT_DOUBLE_EQ(out(1, 1), 1.0);
}

TEST(NormalizeUnitRange, AlreadyUnitRangeUnchanged) {
  const DenseMatrix m = DenseMatrix::from_rows({{0.0, 0.25}, {0.75, 1.0}});
  const DenseMatrix out = normalize_unit_range(m);
  EXPECT_EQ(out, m);
}

TEST(NormalizeUnitRange, ConstantMatrixThrows) {
  const DenseMatrix m = DenseMatrix::from_rows({{2, 2}, {2, 2}});
  EXPECT_THROW(normalize_unit_range(m), DegenerateRangeError);
}

TEST(NormalizeUnitRange, ExtremesMapToExactBounds) {
  Rng rng(11);
  for (int rep = 0; rep < 50; ++rep) {
    const DenseMatrix m = random_matrix(5, 7, rng, -10.0, 10.0);
    const DenseMatrix out = normalize_unit_range(m);
    const auto [lo, hi] = out.min_max();
    EXPECT_EQ(lo, 0.0);
    EXPECT_EQ(hi, 1.0);
    for (double v : out.entries()) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
}

TEST(Log1pTransform, KnownValues) {
  EXPECT_DOUBLE_EQ(log1p_transform(DenseMatrix::from_rows({{0.0}}))(0, 0), 0.0);
  const double e_minus_1 = std::exp(1.0) - 1.0;
  EXPECT_NEAR(log1p_transform(DenseMatrix::from_rows({{e_minus_1}}))(0, 0), 1.0, 1e-15);
}

TEST(Log1pTransform, NegativeEntryThrows) {
  EXPECT_THROW(log1p_transform(DenseMatrix::from_rows({{-1.0}})), NegativeEntryError);
}

TEST(ApplyPermutation, IdentityLeavesMatrix) {
  Rng rng(3);
  const DenseMatrix m = random_matrix(4, 6, rng);
  EXPECT_EQ(apply_permutation(m, Permutation(4), Permutation(6)), m);
}

TEST(ApplyPermutation, RowSwap) {
  const DenseMatrix m = DenseMatrix::from_rows({{1, 2}, {3, 4}});
  const Permutation swap = Permutation::from_mapping({1, 0});
  const DenseMatrix out = apply_permutation(m, swap, Permutation(2));
  EXPECT_EQ(out, DenseMatrix::from_rows({{3, 4}, {1, 2}}));
}

TEST(ApplyPermutation, SizeMismatchThrows) {
  const DenseMatrix m = DenseMatrix::from_rows({{1, 2}, {3, 4}});
  EXPECT_THROW(apply_permutation(m, Permutation(3), Permutation(2)), SizeMismatchError);
}

TEST(ApplyPermutation, InverseRoundTripProperty) {
  Rng rng(17);
  for (int rep = 0; rep < 40; ++rep) {
    const std::size_t n = 1 + rng.next_below(20);
    const std::size_t p = 1 + rng.next_below(20);
    const DenseMatrix m = random_matrix(n, p, rng);
    const Permutation rp = rng.random_permutation(n);
    const Permutation cp = rng.random_permutation(p);
    const DenseMatrix shuffled = apply_permutation(m, rp, cp);
    EXPECT_EQ(apply_permutation(shuffled, rp.inverse(), cp.inverse()), m);
  }
}

TEST(InvertPermutation, CycleAndDoubleInversion) {
  EXPECT_TRUE(invert_permutation(Permutation(5)).is_identity());
  const Permutation p = Permutation::from_mapping({1, 2, 0});
  EXPECT_EQ(p.inverse().mapping(), (std::vector<std::size_t>{2, 0, 1}));
  EXPECT_EQ(p.inverse().inverse(), p);
}

TEST(Argsort, BasicOrderingAndStability) {
  const std::vector<double> v{0.3, 0.1, 0.2};
  EXPECT_EQ(argsort(v).mapping(), (std::vector<std::size_t>{1, 2, 0}));
  const std::vector<double> ties{0.5, 0.5};
  EXPECT_EQ(argsort(ties).mapping(), (std::vector<std::size_t>{0, 1}));
  const std::vector<double> sorted{1.0, 2.0, 3.0};
  EXPECT_TRUE(argsort(sorted).is_identity());
}

TEST(Argsort, NanThrows) {
  const std::vector<double> v{0.1, std::nan("")};
  EXPECT_THROW(argsort(v), NonFiniteError);
}

TEST(PairwiseRowDistances, KnownAndSymmetric) {
  const DenseMatrix same = DenseMatrix::from_rows({{1, 2}, {1, 2}});
  const DenseMatrix d0 = pairwise_row_distances(same);
  EXPECT_DOUBLE_EQ(d0(0, 1), 0.0);

  const DenseMatrix tri = DenseMatrix::from_rows({{0, 0}, {3, 4}});
  EXPECT_DOUBLE_EQ(pairwise_row_distances(tri)(0, 1), 5.0);

  Rng rng(29);
  const DenseMatrix m = random_matrix(4, 3, rng);
  const DenseMatrix d = pairwise_row_distances(m);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_DOUBLE_EQ(d(i, i), 0.0);
    for (std::size_t j = 0; j < 4; ++j) EXPECT_DOUBLE_EQ(d(i, j), d(j, i));
  }
}

TEST(PairwiseRowDistances, TriangleInequalityOnSampledTriples) {
  Rng rng(31);
  const DenseMatrix m = random_matrix(8, 5, rng);
  const DenseMatrix d = pairwise_row_distances(m);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t a = rng.next_below(8);
    const std::size_t b = rng.next_below(8);
    const std::size_t c = rng.next_below(8);
    EXPECT_LE(d(a, c), d(a, b) + d(b, c) + 1e-12);
  }
}
