#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <set>
#include <stdexcept>

#include "xaibench/hash.hpp"
#include "xaibench/numeric.hpp"
#include "xaibench/parallel.hpp"
#include "xaibench/rng.hpp"

using namespace xaibench;

TEST(Rng, SameSeedSameStream) {
  Rng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    EXPECT_EQ(x, b());
    differs = differs || x != c();
  }
  EXPECT_TRUE(differs);
}

TEST(Rng, UniformStaysInOpenInterval) {
  Rng r(1);
  for (int i = 0; i < 100000; ++i) {
    const double u = r.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Rng, NormalMoments) {
  Rng r(7);
  const int n = 200000;
  double s = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    const double z = r.normal(2.0, 3.0);
    s += z;
    s2 += z * z;
  }
  const double m = s / n, var = s2 / n - m * m;
  EXPECT_NEAR(m, 2.0, 4 * 3.0 / std::sqrt(n));
  EXPECT_NEAR(var, 9.0, 0.15);
}

TEST(Rng, BelowIsUniformish) {
  Rng r(3);
  std::vector<int> counts(10, 0);
  for (int i = 0; i < 100000; ++i) ++counts[r.below(10)];
  for (int c : counts) EXPECT_NEAR(c, 10000, 500);
}

TEST(Rng, DerivedSeedsSeparateStagesAndIds) {
  std::set<std::uint64_t> seen;
  for (int id = 0; id < 100; ++id) {
    seen.insert(derive_seed(1, "a", id));
    seen.insert(derive_seed(1, "b", id));
    seen.insert(derive_seed(2, "a", id));
  }
  EXPECT_EQ(seen.size(), 300u);
  EXPECT_EQ(derive_seed(5, "x", 1, 2), derive_seed(5, "x", 1, 2));
  EXPECT_NE(derive_seed(5, "x", 1, 2), derive_seed(5, "x", 2, 1));
}

TEST(Rng, PermutationIsPermutation) {
  Rng r(11);
  auto p = permutation(50, r);
  std::sort(p.begin(), p.end());
  for (std::size_t i = 0; i < p.size(); ++i) EXPECT_EQ(p[i], i);
}

TEST(Numeric, SoftmaxSumsToOneAndIsShiftInvariant) {
  Vector z(3);
  z << 1000.0, 1001.0, 999.0;
  const Vector p = softmax(z);
  EXPECT_NEAR(p.sum(), 1.0, 1e-15);
  Vector z2 = z.array() - 1000.0;
  EXPECT_TRUE(p.isApprox(softmax(z2), 1e-15));
}

TEST(Numeric, SampleStddevUsesNminus1) {
  const std::vector<double> v{0.0, 1.0};
  EXPECT_DOUBLE_EQ(mean(v), 0.5);
  EXPECT_NEAR(sample_stddev(v), std::sqrt(0.5), 1e-15);
}

TEST(Numeric, MeanOfConstantIsExact) {
  for (std::size_t n : {1u, 3u, 7u, 25u, 1001u}) {
    const std::vector<double> v(n, 0.37);
    EXPECT_EQ(mean(v), 0.37) << n;
    EXPECT_EQ(sample_stddev(v), 0.0) << n;
  }
}

TEST(Numeric, PairwiseSumMatchesLongDouble) {
  Rng r(5);
  std::vector<double> xs(100001);
  long double ref = 0;
  for (auto& x : xs) {
    x = r.uniform(-1.0, 1.0);
    ref += x;
  }
  EXPECT_NEAR(pairwise_sum(xs), static_cast<double>(ref), 1e-10);
}

TEST(Numeric, GaussLegendreIntegratesPolynomialsExactly) {
  for (int n = 1; n <= 12; ++n) {
    const auto q = gauss_legendre(n);
    double wsum = 0;
    for (double w : q.weights) wsum += w;
    EXPECT_NEAR(wsum, 1.0, 1e-13);
    for (int deg = 0; deg <= 2 * n - 1; ++deg) {
      double integral = 0;
      for (std::size_t i = 0; i < q.nodes.size(); ++i) integral += q.weights[i] * std::pow(q.nodes[i], deg);
      EXPECT_NEAR(integral, 1.0 / (deg + 1), 1e-12) << "n=" << n << " deg=" << deg;
    }
  }
}

TEST(Parallel, VisitsEveryIndexOnce) {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i]++; });
  for (auto& h : hits) EXPECT_EQ(h.load(), 1);
}

TEST(Parallel, RethrowsLowestFailingIndex) {
  for (std::size_t workers : {1u, 3u}) {
    try {
      parallel_for(100, workers, [](std::size_t i) {
        if (i == 17 || i == 60) throw std::runtime_error(std::to_string(i));
      });
      FAIL() << "expected an exception";
    } catch (const std::runtime_error& e) {
      EXPECT_STREQ(e.what(), "17");
    }
  }
}

TEST(Hash, Sha256KnownVectors) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
