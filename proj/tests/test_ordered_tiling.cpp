#include <gtest/gtest.h>

#include "asymp/error.hpp"
#include "asymp/ordered_tiling.hpp"
#include "asymp/tiling.hpp"

using namespace asymp;

namespace {

// Independent flattening of the dyadic square [0, 2^k)^2 at `origin`:
// quadrants (0,0), (h,0), (h,h), (0,h), each flattened recursively.
void flatten(int k, std::int64_t x, std::int64_t y, std::vector<GroupPoint>& out) {
  if (k == 0) {
    out.push_back(z2(x, y));
    return;
  }
  const std::int64_t h = std::int64_t{1} << (k - 1);
  flatten(k - 1, x, y, out);
  flatten(k - 1, x + h, y, out);
  flatten(k - 1, x + h, y + h, out);
  flatten(k - 1, x, y + h, out);
}

}  // namespace

TEST(OrderedTiling, NaturalOdometerOrder) {
  const SystemPtr sys = compile(z_odometer_spec({4, 16, 64}));
  const auto inst = anchored_instance(sys, 3, 0, z(21));
  EXPECT_EQ(induced_order_full(inst, 3), natural_order(21));
}

TEST(OrderedTiling, ReversedLevelOneEnumeration) {
  const SystemPtr sys = compile(z_odometer_spec({2, 4}, {1}));
  EXPECT_EQ(tile_enumeration(*sys, {2, 0, z(0)}), (std::vector<GroupPoint>{z(1), z(0), z(3), z(2)}));
  const auto inst = anchored_instance(sys, 2, 0, z(0));
  EXPECT_EQ(order_interval_elements(inst, {{2, 0, z(0)}, 1, 2}), (std::vector<GroupPoint>{z(1), z(0)}));
  EXPECT_EQ(order_interval_elements(inst, {{2, 0, z(0)}, 3, 3}), (std::vector<GroupPoint>{z(3)}));
  EXPECT_THROW(order_interval_elements(inst, {{2, 0, z(0)}, 3, 5}), Error);

  const SystemPtr nat = compile(z_odometer_spec({2, 4}));
  const auto ninst = anchored_instance(nat, 2, 0, z(0));
  EXPECT_EQ(order_interval_elements(ninst, {{2, 0, z(0)}, 2, 3}), (std::vector<GroupPoint>{z(1), z(2)}));
}

TEST(OrderedTiling, ReversedOdometerWindowMatchesRecursion) {
  // Levels 1 and 3 reversed; the tile order is read off an explicit recursion.
  const SystemPtr sys = compile(z_odometer_spec({2, 4, 8}, {1, 3}));
  std::vector<std::int64_t> rec;
  for (std::int64_t a : {4, 0})
    for (std::int64_t b : {0, 2})
      for (std::int64_t c : {1, 0}) rec.push_back(a + b + c);
  for (std::int64_t anchor = 0; anchor < 8; ++anchor) {
    const auto inst = anchored_instance(sys, 3, 0, z(anchor));
    const OrderWindow w = induced_order_full(inst, 3);
    const auto at = std::find(rec.begin(), rec.end(), anchor) - rec.begin();
    for (std::int64_t k = -w.radius(); k <= w.radius(); ++k) {
      EXPECT_EQ(*w.at_position(k), z(rec[static_cast<std::size_t>(at + k)] - anchor));
    }
  }
}

TEST(OrderedTiling, DyadicMatchesFlatteningOracle) {
  const SystemPtr sys = compile(z2_dyadic_spec(4));
  std::vector<GroupPoint> oracle;
  flatten(4, 0, 0, oracle);
  EXPECT_EQ(sys->enumeration(4, 0), oracle);

  const GroupPoint anchor = z2(6, 9);
  const auto inst = anchored_instance(sys, 4, 0, anchor);
  const OrderWindow w = induced_order_full(inst, 4);
  const auto at = std::find(oracle.begin(), oracle.end(), anchor) - oracle.begin();
  for (std::int64_t k = -w.radius(); k <= w.radius(); ++k) {
    EXPECT_EQ(*w.at_position(k), oracle[static_cast<std::size_t>(at + k)] * inverse(anchor));
  }
  // ball(1) window: positions of the nine cells match the oracle ranks.
  const auto small = induced_order(inst, 4, ball(GroupKind::IntPlane, 1));
  for (const auto& u : ball(GroupKind::IntPlane, 1)) {
    const auto rank = std::find(oracle.begin(), oracle.end(), u * anchor) - oracle.begin();
    EXPECT_EQ(*small.position_of(u), rank - at);
  }
}

TEST(OrderedTiling, DepthConsistency) {
  for (const auto& [spec, anchor, top] :
       {std::tuple{z_odometer_spec({2, 4, 8, 16, 32, 64, 128}, {2, 5}), z(43), 7},
        std::tuple{z2_dyadic_spec(7), z2(42, 85), 7}}) {
    const SystemPtr sys = compile(spec);
    const auto inst = anchored_instance(sys, top, 0, anchor);
    for (int k = 1; k < top; ++k) {
      const OrderWindow lo = induced_order_full(inst, k);
      const OrderWindow hi = induced_order_full(inst, k + 1);
      std::int64_t prev = 0;
      for (std::int64_t i = -lo.radius(); i <= lo.radius(); ++i) {
        const std::int64_t p = *hi.position_of(*lo.at_position(i));
        if (i > -lo.radius()) {
          EXPECT_EQ(p, prev + 1);
        }
        prev = p;
      }
    }
  }
}

TEST(OrderedTiling, Straightness) {
  const SystemPtr sys = compile(z_odometer_spec({4, 16, 64}));
  EXPECT_EQ(straightness_status(anchored_instance(sys, 3, 0, z(0)), 3).kind, Straightness::PlusNTail);
  EXPECT_EQ(straightness_status(anchored_instance(sys, 3, 0, z(63)), 3).kind, Straightness::MinusNTail);
  const auto mid = anchored_instance(sys, 3, 0, z(21));
  const auto st = straightness_status(mid, 3, ball(GroupKind::IntLine, 21));
  EXPECT_EQ(st.kind, Straightness::StraightSoFar);
  EXPECT_EQ(st.depth, 3);
  // The depth-2 central tile [-5, 11) omits most of the window.
  EXPECT_EQ(straightness_status(mid, 2).kind, Straightness::NotGeneralPosition);
}

TEST(OrderedTiling, WindowNotDominated) {
  const SystemPtr sys = compile(z_odometer_spec({4, 16}));
  const auto inst = anchored_instance(sys, 2, 0, z(5));
  try {
    induced_order(inst, 1, ball(GroupKind::IntLine, 3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::WindowNotDominated);
  }
}

TEST(OrderedTiling, IntervalScan) {
  const SystemPtr z1 = compile(z_odometer_spec({4, 16, 64, 256}));
  const FiniteSubset K(GroupKind::IntLine, {z(-1), z(0), z(1)});
  const auto scan = interval_invariance_scan(*z1, K, Rational(1, 10));
  EXPECT_EQ(scan.l0, std::optional<std::size_t>(21));
  for (const auto& b : scan.buckets) EXPECT_EQ(b.worst_ratio, Rational(2, static_cast<std::int64_t>(b.length)));
  EXPECT_EQ(interval_invariance_scan(*z1, K, Rational(3)).l0, std::optional<std::size_t>(1));

  const SystemPtr dy = compile(z2_dyadic_spec(5));
  const FiniteSubset cross(GroupKind::IntPlane, {z2(0, 0), z2(1, 0), z2(-1, 0), z2(0, 1), z2(0, -1)});
  const auto ds = interval_invariance_scan(*dy, cross, Rational(1, 2), {5, 4096});
  ASSERT_TRUE(ds.l0.has_value());
  EXPECT_EQ(ds.levels_scanned, 5);
  for (const auto& b : ds.buckets)
    if (b.length >= *ds.l0) {
      EXPECT_LT(b.worst_ratio, Rational(1, 2));
    }
}
