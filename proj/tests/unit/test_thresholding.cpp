#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "lcs/analysis.hpp"
#include "lcs/rng.hpp"
#include "lcs/thresholding.hpp"

using namespace lcs;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

Vector random_vector(Index n, std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> nd;
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = nd(rng);
  return v;
}

// Random vector with many repeated magnitudes, to exercise ties.
Vector tied_vector(Index n, std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_int_distribution<int> lvl(0, 3);
  std::bernoulli_distribution coin(0.5);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = (coin(rng) ? 1.0 : -1.0) * lvl(rng);
  return v;
}

// Best s-term approximation by exhaustive search over supports.
double best_s_term_error(const Vector& a, Index s) {
  double best = INFINITY;
  detail::for_each_subset(a.size(), s, [&](const std::vector<Index>& c) {
    Vector b = Vector::Zero(a.size());
    for (Index i : c) b[i] = a[i];
    best = std::min(best, (a - b).norm());
  });
  return best;
}

}  // namespace

TEST(HardThreshold, Examples) {
  EXPECT_EQ(hard_threshold(vec({3, -5, 1, 0}), 2), vec({3, -5, 0, 0}));
  EXPECT_EQ(hard_threshold(vec({3, -5, 1, 0}), 0), Vector::Zero(4));
  EXPECT_EQ(hard_threshold(vec({3, -5, 1, 0}), 4), vec({3, -5, 1, 0}));
  EXPECT_EQ(hard_threshold(vec({2, -2}), 1), vec({2, 0}));
}

TEST(HardThreshold, RejectsBadSparsity) {
  EXPECT_THROW(hard_threshold(vec({1, 2}), 3), InvalidArgument);
  EXPECT_THROW(hard_threshold(vec({1, 2}), -1), InvalidArgument);
}

TEST(HardThreshold, TiesGoToLowestIndex) {
  EXPECT_EQ(hard_threshold(vec({1, -1, 1, 1}), 2), vec({1, -1, 0, 0}));
  EXPECT_EQ(hard_threshold(vec({0, 2, 1, -2, 2}), 2), vec({0, 2, 0, -2, 0}));
}

TEST(HardThreshold, BestSTermAgainstBruteForce) {
  for (std::uint64_t t = 0; t < 200; ++t) {
    const Index n = 4 + static_cast<Index>(t % 9);
    const Index s = 1 + static_cast<Index>(t % 3);
    const Vector a = t % 2 ? random_vector(n, t) : tied_vector(n, t);
    const Vector h = hard_threshold(a, s);
    EXPECT_LE(SupportSet::of(h).size(), static_cast<std::size_t>(s));
    for (Index i = 0; i < n; ++i) EXPECT_TRUE(h[i] == 0.0 || h[i] == a[i]);
    EXPECT_NEAR((a - h).norm(), best_s_term_error(a, s), 1e-14);
  }
}

TEST(HardThreshold, NestedSupportsAndIdempotent) {
  for (std::uint64_t t = 0; t < 100; ++t) {
    const Vector a = t % 2 ? random_vector(20, t) : tied_vector(20, t);
    for (Index s = 0; s < 20; ++s) {
      const Vector hs = hard_threshold(a, s);
      const Vector hs1 = hard_threshold(a, s + 1);
      for (Index i = 0; i < 20; ++i) {
        // Kept positions of H_s stay kept in H_{s+1} (zeros in a are ambiguous).
        if (hs[i] != 0.0) {
          EXPECT_NE(hs1[i], 0.0);
        }
      }
      EXPECT_EQ(hard_threshold(hs, s), hs);
    }
  }
}

TEST(HardThresholdPks, Examples) {
  EXPECT_EQ(hard_threshold_pks(vec({1, 5, -3}), 2, SupportSet{0}), vec({1, 5, 0}));
  const Vector a = random_vector(12, 5);
  EXPECT_EQ(hard_threshold_pks(a, 4, SupportSet{}), hard_threshold(a, 4));
  const SupportSet t0{1, 6, 9};
  EXPECT_EQ(hard_threshold_pks(a, 3, t0), restrict_to(a, t0));
}

TEST(HardThresholdPks, KnownZerosPassThrough) {
  // A known entry with value 0 still occupies its slot.
  const Vector a = vec({0, 5, 4, 3});
  EXPECT_EQ(hard_threshold_pks(a, 2, SupportSet{0}), vec({0, 5, 0, 0}));
}

TEST(HardThresholdPks, RejectsOversizedKnownSet) {
  EXPECT_THROW(hard_threshold_pks(vec({1, 2, 3}), 1, SupportSet({0, 1})), InvalidArgument);
  EXPECT_THROW(hard_threshold_pks(vec({1, 2, 3}), 2, SupportSet{3}), InvalidArgument);
}

TEST(HardThresholdPks, DecompositionIdentity) {
  for (std::uint64_t t = 0; t < 200; ++t) {
    const Index n = 16;
    const Vector a = t % 2 ? random_vector(n, t) : tied_vector(n, t);
    Rng rng(t);
    std::vector<Index> pick;
    for (Index i = 0; i < n; ++i)
      if (std::bernoulli_distribution(0.2)(rng)) pick.push_back(i);
    const SupportSet t0(pick);
    const Index k = static_cast<Index>(t0.size());
    const Index s = std::min<Index>(n, k + static_cast<Index>(t % 5));
    const Vector mask = t0.indicator(n);
    const Vector inside = a.cwiseProduct(mask);
    const Vector outside = a - inside;
    const Vector expect = inside + hard_threshold(outside, s - k);
    const Vector got = hard_threshold_pks(a, s, t0);
    EXPECT_EQ(got, expect);
    EXPECT_EQ(hard_threshold_pks(got, s, t0), got);
    EXPECT_LE(SupportSet::of(got).size(), static_cast<std::size_t>(s));
  }
}

TEST(BlockModel, Examples) {
  const BlockSparsityModel m{2, 1};
  EXPECT_EQ(project_model(vec({3, 0, 1, 1}), m), vec({3, 0, 0, 0}));
  const Vector a = random_vector(12, 3);
  EXPECT_EQ(project_model(a, BlockSparsityModel{3, 4}), a);
  EXPECT_EQ(project_model(a, SparsityModel{5}), hard_threshold(a, 5));
}

TEST(BlockModel, MatchesExhaustiveBlockSearch) {
  for (std::uint64_t t = 0; t < 100; ++t) {
    const Vector a = random_vector(32, t);
    const Vector got = project_model(a, BlockSparsityModel{4, 2});
    double best = INFINITY;
    Vector arg;
    detail::for_each_subset(8, 2, [&](const std::vector<Index>& c) {
      Vector b = Vector::Zero(32);
      for (Index blk : c) b.segment(blk * 4, 4) = a.segment(blk * 4, 4);
      const double err = (a - b).norm();
      if (err < best) {
        best = err;
        arg = b;
      }
    });
    EXPECT_EQ(got, arg);
    EXPECT_EQ(project_model(got, BlockSparsityModel{4, 2}), got);
  }
}

TEST(BlockModel, ValidatesShape) {
  EXPECT_THROW(project_model(Vector::Ones(5), BlockSparsityModel{2, 1}), InvalidArgument);
  EXPECT_THROW(project_model(Vector::Ones(4), BlockSparsityModel{2, 3}), InvalidArgument);
  EXPECT_THROW(project_model(Vector::Ones(4), BlockSparsityModel{0, 1}), InvalidArgument);
}
