#include <gtest/gtest.h>

#include "support.hpp"

using namespace fanwalk;
using namespace fanwalk::testing;

namespace {

// P(Gamma(n, 1) >= t): the l1 norm of n standard Laplace coordinates.
double gamma_tail(Index n, double t) {
  double term = 1.0, sum = 0.0;
  for (Index k = 0; k < n; ++k) {
    sum += term;
    term *= t / static_cast<double>(k + 1);
  }
  return std::exp(-t) * sum;
}

double cofactor_det(const Mat& M) {
  const Index k = M.rows();
  if (k == 1) return M(0, 0);
  double d = 0.0;
  for (Index j = 0; j < k; ++j) {
    Mat minor(k - 1, k - 1);
    for (Index r = 1; r < k; ++r) {
      for (Index c = 0, cc = 0; c < k; ++c) {
        if (c != j) minor(r - 1, cc++) = M(r, c);
      }
    }
    d += (j % 2 ? -1.0 : 1.0) * M(0, j) * cofactor_det(minor);
  }
  return d;
}

}  // namespace

TEST(EnumerateVertices, Counts) {
  EXPECT_EQ(oracle::enumerate_vertices(normalize(unit_square())).vertices.size(), 4u);
  EXPECT_EQ(oracle::enumerate_vertices(normalize(triangle())).vertices.size(), 3u);
  EXPECT_EQ(oracle::enumerate_vertices(normalize(cube(3, vec({1, 2, 3})))).vertices.size(), 8u);
}

TEST(EnumerateVertices, OptimumAndUniqueness) {
  const auto sq = oracle::enumerate_vertices(normalize(unit_square()));
  EXPECT_EQ(sq.optimal_basis, Basis({0, 1}));
  EXPECT_NEAR(sq.optimal_value, std::sqrt(2.0), 1e-15);
  EXPECT_TRUE(sq.unique_optimum);
  EXPECT_FALSE(oracle::enumerate_vertices(normalize(unit_square(vec({1, 0})))).unique_optimum);
}

TEST(EnumerateVertices, BudgetEnforced) {
  try {
    oracle::enumerate_vertices(normalize(cube(3, vec({1, 2, 3}))), 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::TooLarge);
  }
}

TEST(MaxSubdeterminant, Examples) {
  Mat sq(4, 2);
  sq << 1, 0, 0, 1, -1, 0, 0, -1;
  EXPECT_EQ(oracle::max_subdeterminant(sq), 1);
  Mat upper(2, 2);
  upper << 1, 1, 0, 1;
  EXPECT_EQ(oracle::max_subdeterminant(upper), 1);
  Mat rot(2, 2);
  rot << 1, 1, -1, 1;
  EXPECT_EQ(oracle::max_subdeterminant(rot), 2);
  Mat frac(1, 1);
  frac << 0.5;
  EXPECT_THROW(oracle::max_subdeterminant(frac), Error);
}

TEST(MaxSubdeterminant, BareissMatchesCofactorExpansion) {
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<int> entry(-3, 3);
  for (int trial = 0; trial < 300; ++trial) {
    const Index k = 1 + trial % 5;
    Mat M(k, k);
    std::vector<std::vector<std::int64_t>> ints(k, std::vector<std::int64_t>(k));
    for (Index i = 0; i < k; ++i)
      for (Index j = 0; j < k; ++j) M(i, j) = static_cast<double>(ints[i][j] = entry(rng));
    EXPECT_EQ(std::abs(oracle::detail::bareiss_det(ints)), static_cast<std::int64_t>(std::llround(std::abs(cofactor_det(M)))));
  }
}

TEST(LaplaceTail, ZeroThresholdDegenerates) {
  const auto t = oracle::laplace_tail_check(2, 0.0, 1.0, 1000, 1);
  EXPECT_DOUBLE_EQ(t.empirical, 1.0);
  EXPECT_GE(t.bound, 1.0);
  EXPECT_TRUE(t.ok);
}

TEST(LaplaceTail, BoundFormula) {
  // alpha = 4 n^3 / delta makes the exponent alpha delta / 2n^2 equal to 2n
  const auto two = oracle::laplace_tail_check(2, 32.0, 1.0, 1000, 1);
  EXPECT_DOUBLE_EQ(two.threshold, 8.0);
  EXPECT_NEAR(two.bound, 2.0 * std::exp(-4.0), 1e-15);
  const auto three = oracle::laplace_tail_check(3, 108.0, 1.0, 1000, 1);
  EXPECT_NEAR(three.bound, 3.0 * std::exp(-6.0), 1e-15);
}

TEST(LaplaceTail, EmpiricalMatchesGammaTail) {
  for (Index n : {1, 2, 3, 4}) {
    for (double t : {0.5, 2.0, 6.0}) {
      // threshold alpha delta / 2n = t with delta = 1
      const auto chk = oracle::laplace_tail_check(n, 2.0 * n * t, 1.0, 200000, 10 + n);
      const double p = gamma_tail(n, t);
      const double sigma = std::sqrt(p * (1.0 - p) / 200000.0);
      EXPECT_NEAR(chk.empirical, p, 5.0 * sigma + 1e-6) << "n=" << n << " t=" << t;
    }
  }
}

TEST(LaplaceTail, PassesOnSmallGrid) {
  for (Index n : {2, 3}) {
    for (double delta : {1.0, 0.5}) {
      const auto chk = oracle::laplace_tail_check(n, default_alpha(n, delta), delta, 100000, 3);
      EXPECT_TRUE(chk.ok) << n << " " << delta;
    }
  }
}

TEST(Generator, BoxTwoIsUnitSquare) {
  const LinearProgram lp = oracle::tu_instance_generator(oracle::TuKind::Box, 2, 4, 0);
  const auto e = oracle::enumerate_vertices(normalize(lp));
  ASSERT_EQ(e.vertices.size(), 4u);
  for (const Vertex& v : e.vertices) {
    for (Index i = 0; i < 2; ++i) EXPECT_TRUE(std::abs(v.point(i)) < 1e-12 || std::abs(v.point(i) - 1.0) < 1e-12);
  }
}

TEST(Generator, IntervalRowsAreConsecutiveOnes) {
  const LinearProgram lp = oracle::tu_instance_generator(oracle::TuKind::Interval, 3, 9, 1);
  EXPECT_EQ(oracle::max_subdeterminant(lp.A), 1);
  for (Index i = 0; i < lp.rows(); ++i) {
    std::vector<Index> support;
    for (Index j = 0; j < 3; ++j)
      if (lp.A(i, j) != 0.0) support.push_back(j);
    ASSERT_FALSE(support.empty());
    EXPECT_EQ(support.back() - support.front() + 1, static_cast<Index>(support.size()));
    for (Index j : support) EXPECT_EQ(lp.A(i, j), lp.A(i, support.front()));
  }
}

TEST(Generator, NetworkRowsAreArcs) {
  const LinearProgram lp = oracle::tu_instance_generator(oracle::TuKind::Network, 4, 12, 2);
  for (Index i = 8; i < lp.rows(); ++i) {
    EXPECT_DOUBLE_EQ(lp.A.row(i).sum(), 0.0);
    EXPECT_DOUBLE_EQ(lp.A.row(i).cwiseAbs().sum(), 2.0);
  }
  EXPECT_EQ(oracle::max_subdeterminant(lp.A), 1);
}

TEST(Generator, DeterministicPerSeed) {
  const LinearProgram a = oracle::tu_instance_generator(oracle::TuKind::Network, 3, 10, 5);
  const LinearProgram b = oracle::tu_instance_generator(oracle::TuKind::Network, 3, 10, 5);
  const LinearProgram c = oracle::tu_instance_generator(oracle::TuKind::Network, 3, 10, 6);
  EXPECT_EQ(a.A, b.A);
  EXPECT_EQ(a.b, b.b);
  EXPECT_EQ(a.c, b.c);
  EXPECT_FALSE(a.b == c.b && a.c == c.c);
}

TEST(Generator, InstancesAreNondegenerateWithUniqueOptimum) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto kind = static_cast<oracle::TuKind>(seed % 3);
    const Index n = 1 + static_cast<Index>(seed % 5);
    const LinearProgram lp = oracle::tu_instance_generator(kind, n, std::min<Index>(2 * n + seed % 6, 20), seed);
    const NormalizedLP norm = normalize(lp);
    EXPECT_TRUE(check_nondegenerate(norm));
    EXPECT_TRUE(oracle::enumerate_vertices(norm).unique_optimum);
    const NormalizedLP rot = normalize(oracle::rotated_instance(lp, seed));
    EXPECT_TRUE(oracle::enumerate_vertices(rot).unique_optimum);
    EXPECT_NEAR(oracle::enumerate_vertices(rot).optimal_value, oracle::enumerate_vertices(norm).optimal_value, 1e-9);
  }
}

TEST(Generator, RejectsBadShapes) {
  EXPECT_THROW(oracle::tu_instance_generator(oracle::TuKind::Interval, 3, 5, 0), Error);
  EXPECT_THROW(oracle::tu_instance_generator(oracle::TuKind::Interval, 6, 14, 0), Error);
  EXPECT_THROW(oracle::tu_instance_generator(oracle::TuKind::Network, 2, 31, 0), Error);
  EXPECT_NO_THROW(oracle::tu_instance_generator(oracle::TuKind::Box, 2, 32, 0));
}

TEST(DeltaChain, BruteForceAboveSubdeterminantBound) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Index n = 2 + static_cast<Index>(seed % 3);
    const LinearProgram lp = oracle::tu_instance_generator(static_cast<oracle::TuKind>(seed % 3), n, 2 * n + 4, seed);
    const std::int64_t D = oracle::max_subdeterminant(lp.A);
    EXPECT_GE(delta_bruteforce(normalize(lp)).delta, 1.0 / (n * D * D) - 1e-9);
  }
  // a non-TU integer matrix
  Mat A(4, 2);
  A << 1, 2, -1, 0, 0, -1, 3, 1;
  const std::int64_t D = oracle::max_subdeterminant(A);
  EXPECT_EQ(D, 5);
  EXPECT_GE(delta_bruteforce(normalize(make_lp(A, Vec::Ones(4), vec({1, 1})))).delta, 1.0 / (2.0 * D * D) - 1e-9);
}
