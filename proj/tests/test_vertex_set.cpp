#include <gtest/gtest.h>

#include <random>
#include <set>

#include "rgis/random.hpp"
#include "rgis/vertex_set.hpp"

using namespace rgis;

TEST(VertexSet, EmptyAndFull) {
  VertexSet e(130);
  EXPECT_EQ(e.size(), 0u);
  EXPECT_TRUE(e.empty());
  auto f = VertexSet::full(130);
  EXPECT_EQ(f.size(), 130u);
  EXPECT_TRUE(f.contains(129));
  EXPECT_EQ(f.words().back() >> (130 % 64), 0u);  // no stray bits past n
}

TEST(VertexSet, InsertEraseKeepCount) {
  VertexSet s(70);
  EXPECT_TRUE(s.insert(3));
  EXPECT_FALSE(s.insert(3));
  EXPECT_TRUE(s.insert(69));
  EXPECT_EQ(s.size(), 2u);
  EXPECT_TRUE(s.erase(3));
  EXPECT_FALSE(s.erase(3));
  EXPECT_EQ(s.members(), std::vector<Vertex>{69});
}

TEST(VertexSet, OutOfRangeIsDomainError) {
  VertexSet s(10);
  EXPECT_THROW(s.insert(10), DomainError);
  EXPECT_THROW((void)s.contains(11), DomainError);
}

TEST(VertexSet, SetAlgebraMatchesStdSet) {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 1 + rng() % 200;
    std::set<Vertex> a, b;
    VertexSet va(n), vb(n);
    for (Vertex v = 0; v < n; ++v) {
      if (rng() % 3 == 0) { a.insert(v); va.insert(v); }
      if (rng() % 2 == 0) { b.insert(v); vb.insert(v); }
    }
    std::set<Vertex> inter, diff, uni;
    for (Vertex v : a) (b.count(v) ? inter : diff).insert(v);
    uni = a;
    uni.insert(b.begin(), b.end());

    VertexSet x = va; x.intersect_with(vb);
    VertexSet y = va; y.subtract(vb);
    VertexSet z = va; z.unite_with(vb);
    EXPECT_EQ(x.members(), std::vector<Vertex>(inter.begin(), inter.end()));
    EXPECT_EQ(y.members(), std::vector<Vertex>(diff.begin(), diff.end()));
    EXPECT_EQ(z.members(), std::vector<Vertex>(uni.begin(), uni.end()));
    EXPECT_EQ(x.size(), inter.size());
    EXPECT_EQ(y.size(), diff.size());
    EXPECT_EQ(z.size(), uni.size());
    EXPECT_EQ(va.intersects(vb), !inter.empty());
    EXPECT_TRUE(x.is_subset_of(va));
    EXPECT_EQ(va.is_subset_of(vb), diff.empty());
  }
}

TEST(Random, StreamsAreDeterministicAndDistinct) {
  Stream a(derive_seed(1, 0)), b(derive_seed(1, 0)), c(derive_seed(1, 1));
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    EXPECT_EQ(x, b());
    EXPECT_NE(x, c());
  }
}

TEST(Random, BelowIsRoughlyUniform) {
  Stream rng(42);
  std::vector<int> counts(7, 0);
  const int draws = 70000;
  for (int i = 0; i < draws; ++i) ++counts[rng.below(7)];
  for (int c : counts) EXPECT_NEAR(c, draws / 7, 5 * std::sqrt(draws / 7.0));
  EXPECT_THROW(rng.below(0), DomainError);
}

TEST(Random, SampleSubsetIsSortedDistinctAndUniform) {
  Stream rng(3);
  std::vector<int> hits(10, 0);
  for (int rep = 0; rep < 20000; ++rep) {
    auto s = sample_subset(10, 4, rng);
    ASSERT_EQ(s.size(), 4u);
    for (std::size_t i = 1; i < s.size(); ++i) ASSERT_LT(s[i - 1], s[i]);
    for (auto v : s) ++hits[v];
  }
  for (int h : hits) EXPECT_NEAR(h, 8000, 5 * std::sqrt(8000 * 0.6));
  EXPECT_THROW(sample_subset(3, 4, rng), DomainError);
}
