#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <queue>
#include <random>
#include <set>

#include "asymp/error.hpp"
#include "asymp/group.hpp"

using namespace asymp;

namespace {

using Mat = Eigen::Matrix<std::int64_t, 3, 3>;

Mat as_matrix(const GroupPoint& g) {
  Mat m = Mat::Identity();
  m(0, 1) = g.coords[0];
  m(1, 2) = g.coords[1];
  m(0, 2) = g.coords[2];
  return m;
}

GroupPoint from_matrix(const Mat& m) { return h3(m(0, 1), m(1, 2), m(0, 2)); }

std::set<GroupPoint> as_set(const FiniteSubset& s) { return {s.begin(), s.end()}; }

// Word ball by breadth-first closure under right multiplication by generators.
std::set<GroupPoint> bfs_ball(std::int64_t r) {
  const GroupPoint gens[] = {h3(1, 0, 0), h3(-1, 0, 0), h3(0, 1, 0), h3(0, -1, 0)};
  std::set<GroupPoint> seen{identity(GroupKind::Heisenberg3)};
  std::vector<GroupPoint> frontier(seen.begin(), seen.end());
  for (std::int64_t d = 0; d < r; ++d) {
    std::vector<GroupPoint> next;
    for (const auto& g : frontier)
      for (const auto& s : gens)
        if (seen.insert(g * s).second) next.push_back(g * s);
    frontier = std::move(next);
  }
  return seen;
}

}  // namespace

TEST(Group, SpecExamples) {
  EXPECT_EQ(z(3) * z(4), z(7));
  EXPECT_EQ(z2(1, 2) * inverse(z2(1, 2)), z2(0, 0));
  EXPECT_EQ(h3(1, 0, 0) * h3(0, 1, 0), h3(1, 1, 1));
  EXPECT_EQ(h3(0, 1, 0) * h3(1, 0, 0), h3(1, 1, 0));
}

TEST(Group, HeisenbergMatchesMatrixProduct) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::int64_t> d(-1000, 1000);
  for (int i = 0; i < 500; ++i) {
    const GroupPoint a = h3(d(rng), d(rng), d(rng)), b = h3(d(rng), d(rng), d(rng));
    EXPECT_EQ(a * b, from_matrix(as_matrix(a) * as_matrix(b)));
    const Mat inv = as_matrix(a).cast<double>().inverse().array().round().cast<std::int64_t>().matrix();
    EXPECT_EQ(inverse(a), from_matrix(inv));
  }
}

TEST(Group, AssociativityExhaustiveSmallBalls) {
  for (GroupKind kind : {GroupKind::IntLine, GroupKind::IntPlane, GroupKind::Heisenberg3}) {
    const FiniteSubset b = ball(kind, kind == GroupKind::IntPlane ? 1 : 2);
    for (const auto& x : b)
      for (const auto& y : b)
        for (const auto& w : b) ASSERT_EQ((x * y) * w, x * (y * w));
  }
}

TEST(Group, MixedGroupsRejected) {
  try {
    (void)(z(1) * z2(1, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::MixedGroup);
  }
}

TEST(Group, Balls) {
  EXPECT_EQ(as_set(ball(GroupKind::IntLine, 2)), (std::set<GroupPoint>{z(-2), z(-1), z(0), z(1), z(2)}));
  EXPECT_EQ(ball(GroupKind::IntPlane, 1).size(), 9u);
  for (std::int64_t r = 0; r <= 5; ++r) EXPECT_EQ(as_set(ball(GroupKind::Heisenberg3, r)), bfs_ball(r)) << r;
}

TEST(Group, CanonicalEnumeration) {
  for (GroupKind kind : {GroupKind::IntLine, GroupKind::IntPlane, GroupKind::Heisenberg3}) {
    GroupPoint prev = element_at(kind, 0);
    EXPECT_TRUE(is_identity(prev));
    for (std::uint64_t i = 1; i < 3000; ++i) {
      const GroupPoint g = element_at(kind, i);
      ASSERT_EQ(canonical_index(g), i);
      ASSERT_TRUE(radius(prev) < radius(g) || (radius(prev) == radius(g) && prev.coords < g.coords));
      prev = g;
    }
  }
  // Every point of the radius-4 H3 ball precedes every point outside it.
  const auto b = ball(GroupKind::Heisenberg3, 4);
  std::uint64_t max_index = 0;
  for (const auto& g : b) max_index = std::max(max_index, canonical_index(g));
  EXPECT_EQ(max_index + 1, b.size());
}

TEST(Group, InvarianceRatios) {
  const std::int64_t lo[] = {0}, hi[] = {10};
  const FiniteSubset F = box(GroupKind::IntLine, lo, hi);
  const FiniteSubset K(GroupKind::IntLine, {z(-1), z(0), z(1)});
  auto r = check_invariance(K, Rational(1, 4), F);
  EXPECT_EQ(r.ratio, Rational(2, 10));
  EXPECT_TRUE(r.invariant);

  r = check_invariance(FiniteSubset(GroupKind::IntLine, {z(0)}), Rational(1, 1000), F);
  EXPECT_EQ(r.ratio, Rational(0));
  EXPECT_TRUE(r.invariant);

  const std::int64_t lo2[] = {0, 0}, hi2[] = {10, 10};
  const FiniteSubset F2 = box(GroupKind::IntPlane, lo2, hi2);
  const FiniteSubset cross(GroupKind::IntPlane, {z2(0, 0), z2(1, 0), z2(-1, 0), z2(0, 1), z2(0, -1)});
  EXPECT_EQ(check_invariance(cross, Rational(2, 5), F2).ratio, Rational(40, 100));
  EXPECT_FALSE(check_invariance(cross, Rational(2, 5), F2).invariant);
  EXPECT_TRUE(check_invariance(cross, Rational(41, 100), F2).invariant);
}

TEST(Group, InvarianceMatchesBruteForceOnHeisenberg) {
  std::mt19937_64 rng(11);
  const FiniteSubset K = ball(GroupKind::Heisenberg3, 1);
  for (int t = 0; t < 20; ++t) {
    std::vector<GroupPoint> pts;
    std::uniform_int_distribution<std::int64_t> d(-3, 3);
    for (int i = 0; i < 30; ++i) pts.push_back(h3(d(rng), d(rng), d(rng)));
    const FiniteSubset F(GroupKind::Heisenberg3, pts);
    std::set<GroupPoint> kf;
    for (const auto& k : K)
      for (const auto& f : F) kf.insert(k * f);
    const std::set<GroupPoint> fs = as_set(F);
    std::size_t diff = 0;
    for (const auto& g : kf) diff += fs.count(g) == 0;
    for (const auto& g : fs) diff += kf.count(g) == 0;
    EXPECT_EQ(check_invariance(K, Rational(1), F).ratio,
              Rational(static_cast<std::int64_t>(diff), static_cast<std::int64_t>(F.size())));
  }
}

TEST(Group, FolnerThreshold) {
  const FiniteSubset K(GroupKind::IntLine, {z(-1), z(0), z(1)});
  std::vector<FiniteSubset> seq;
  for (std::int64_t n = 1; n <= 100; ++n) {
    const std::int64_t lo[] = {0}, hi[] = {n};
    seq.push_back(box(GroupKind::IntLine, lo, hi));
  }
  EXPECT_EQ(folner_threshold(seq, K, Rational(1, 10)), std::optional<std::size_t>(21));
  EXPECT_EQ(folner_threshold(seq, K, Rational(3)), std::optional<std::size_t>(1));

  const std::vector<FiniteSubset> singletons(10, FiniteSubset(GroupKind::IntLine, {z(0)}));
  EXPECT_EQ(folner_threshold(singletons, K, Rational(1, 10)), std::nullopt);
}
