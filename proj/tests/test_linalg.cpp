#include <gtest/gtest.h>

#include <cmath>

#include "oracles/jacobi.hpp"
#include "seriate/linalg.hpp"
#include "seriate/rng.hpp"

using namespace seriate;

namespace {

DenseMatrix random_matrix(std::size_t n, std::size_t p, Rng& rng) {
  DenseMatrix m(n, p);
  for (double& v : m.entries()) v = rng.uniform(-1.0, 1.0);
  return m;
}

}  // namespace

TEST(TopSingularTriplet, Diagonal) {
  const DenseMatrix m = DenseMatrix::from_rows({{2, 0}, {0, 1}});
  const SingularTriplet t = top_singular_triplet(m);
  EXPECT_NEAR(t.sigma, 2.0, 1e-10);
  EXPECT_NEAR(std::abs(t.left[0]), 1.0, 1e-8);
  EXPECT_NEAR(t.left[1], 0.0, 1e-8);
  EXPECT_NEAR(std::abs(t.right[0]), 1.0, 1e-8);
  // Sign convention: entry sum of the left vector is nonnegative.
  EXPECT_GE(t.left[0] + t.left[1], 0.0);
}

TEST(TopSingularTriplet, RankOneOuterProduct) {
  // outer((1,2),(3,4)): sigma = ||r|| ||c|| = sqrt(5) * 5 = 5 sqrt(5).
  const DenseMatrix m = DenseMatrix::from_rows({{3, 4}, {6, 8}});
  const SingularTriplet t = top_singular_triplet(m);
  EXPECT_NEAR(t.sigma, 5.0 * std::sqrt(5.0), 1e-9);
  const auto sv = oracle::jacobi_singular_values(m);
  EXPECT_NEAR(t.sigma, sv[0], 1e-9);
}

TEST(TopSingularTriplet, MatchesJacobiOracleOnSeededMatrix) {
  Rng rng(101);
  const DenseMatrix m = random_matrix(5, 4, rng);
  const SingularTriplet t = top_singular_triplet(m);
  const auto sv = oracle::jacobi_singular_values(m);
  EXPECT_NEAR(t.sigma, sv[0], 1e-8);
}

TEST(TopSingularTriplet, ZeroMatrixThrows) {
  EXPECT_THROW(top_singular_triplet(DenseMatrix(3, 3, 0.0)), ZeroMatrixError);
}

TEST(TopSingularTriplet, ResidualsWithinTolerance) {
  Rng rng(555);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = 2 + rng.next_below(6);
    const std::size_t p = 2 + rng.next_below(6);
    const DenseMatrix m = random_matrix(n, p, rng);
    const SingularTriplet t = top_singular_triplet(m, 1e-12, 100000);
    // M^T u = sigma v holds by construction; M v ~ sigma u to iteration accuracy.
    const auto mtu = detail::multiply_transpose(m, t.left);
    for (std::size_t j = 0; j < p; ++j) EXPECT_NEAR(mtu[j], t.sigma * t.right[j], 1e-12);
    const auto mv = detail::multiply(m, t.right);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(mv[i], t.sigma * t.left[i], 1e-5);
    EXPECT_NEAR(detail::norm2(t.left), 1.0, 1e-10);
    EXPECT_NEAR(detail::norm2(t.right), 1.0, 1e-10);
  }
}

TEST(TopSingularTriplet, OracleEquivalenceHundredSeeds) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    const std::size_t n = 2 + rng.next_below(7);
    const std::size_t p = 2 + rng.next_below(7);
    const DenseMatrix m = random_matrix(n, p, rng);
    const SingularTriplet t = top_singular_triplet(m, 1e-12, 200000);
    const auto sv = oracle::jacobi_singular_values(m);
    ASSERT_NEAR(t.sigma, sv[0], 1e-8) << "seed " << seed;
  }
}

TEST(TopSingularTriplet, TransposeInvariance) {
  Rng rng(202);
  for (int rep = 0; rep < 20; ++rep) {
    const DenseMatrix m = random_matrix(3 + rng.next_below(5), 3 + rng.next_below(5), rng);
    const double s1 = top_singular_triplet(m).sigma;
    const double s2 = top_singular_triplet(m.transposed()).sigma;
    EXPECT_NEAR(s1, s2, 1e-9);
  }
}

TEST(TopTwoSingular, Diagonal) {
  const DenseMatrix m = DenseMatrix::from_rows({{3, 0}, {0, 1}});
  const auto [t1, t2] = top_two_singular(m);
  EXPECT_NEAR(t1.sigma, 3.0, 1e-9);
  EXPECT_NEAR(t2.sigma, 1.0, 1e-9);
  EXPECT_GE(t1.sigma, t2.sigma);
}

TEST(TopTwoSingular, DeflatedMatchesOracleSecondValue) {
  Rng rng(303);
  const DenseMatrix m = random_matrix(4, 4, rng);
  const auto [t1, t2] = top_two_singular(m, 1e-12, 200000);
  const auto sv = oracle::jacobi_singular_values(m);
  EXPECT_NEAR(t1.sigma, sv[0], 1e-8);
  EXPECT_NEAR(t2.sigma, sv[1], 1e-7);
}

TEST(TopTwoSingular, RankOneThrows) {
  const DenseMatrix m = DenseMatrix::from_rows({{3, 4}, {6, 8}});
  EXPECT_THROW(top_two_singular(m), RankDeficientError);
}

TEST(TopEigenpairSym, Diagonal) {
  const DenseMatrix b = DenseMatrix::from_rows({{3, 0}, {0, 1}});
  const EigenPair e = top_eigenpair_sym(b);
  EXPECT_NEAR(e.value, 3.0, 1e-9);
  EXPECT_NEAR(std::abs(e.vector[0]), 1.0, 1e-8);
  EXPECT_FALSE(e.zero_spectrum);
}

TEST(TopEigenpairSym, ZeroMatrixFlagged) {
  const EigenPair e = top_eigenpair_sym(DenseMatrix(3, 3, 0.0));
  EXPECT_DOUBLE_EQ(e.value, 0.0);
  EXPECT_TRUE(e.zero_spectrum);
  EXPECT_NEAR(detail::norm2(e.vector), 1.0, 1e-12);
}

TEST(TopEigenpairSym, NotSymmetricThrows) {
  const DenseMatrix b = DenseMatrix::from_rows({{1, 2}, {0, 1}});
  EXPECT_THROW(top_eigenpair_sym(b), NotSymmetricError);
}

TEST(TopEigenpairSym, CollinearPointsDoubleCentering) {
  // Double-centered squared distances of 1-d points 0, 1, 2: B = x x^T with
  // x = (-1, 0, 1); top eigenvalue 2 with eigenvector along x.
  const DenseMatrix b = DenseMatrix::from_rows({{1, 0, -1}, {0, 0, 0}, {-1, 0, 1}});
  const EigenPair e = top_eigenpair_sym(b);
  EXPECT_NEAR(e.value, 2.0, 1e-9);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(e.vector[0]), inv_sqrt2, 1e-6);
  EXPECT_NEAR(e.vector[1], 0.0, 1e-6);
  EXPECT_NEAR(std::abs(e.vector[2]), inv_sqrt2, 1e-6);
  EXPECT_NEAR(e.vector[0] + e.vector[2], 0.0, 1e-6);
}

TEST(TopEigenpairSym, MatchesJacobiOnRandomGrams) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Rng rng(derive_seed(9, seed));
    const std::size_t n = 2 + rng.next_below(5);
    const DenseMatrix m = random_matrix(n + 1, n, rng);
    DenseMatrix gram(n, n);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b2 = a; b2 < n; ++b2) {
        double s = 0.0;
        for (std::size_t i = 0; i < m.rows(); ++i) s += m(i, a) * m(i, b2);
        gram(a, b2) = s;
        gram(b2, a) = s;
      }
    }
    const EigenPair e = top_eigenpair_sym(gram, 1e-13, 200000);
    const auto eig = oracle::jacobi_eigenvalues(gram);
    ASSERT_NEAR(e.value, eig[0], 1e-8) << "seed " << seed;
  }
}
