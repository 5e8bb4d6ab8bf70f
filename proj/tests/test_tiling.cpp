#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "asymp/error.hpp"
#include "asymp/io.hpp"
#include "asymp/ordered_tiling.hpp"
#include "asymp/tiling.hpp"

using namespace asymp;

namespace {

FiniteSubset cross() {
  return FiniteSubset(GroupKind::IntPlane, {z2(0, 0), z2(1, 0), z2(-1, 0), z2(0, 1), z2(0, -1)});
}

}  // namespace

TEST(Tiling, OdometerAccepted) {
  const auto rep = validate_system(z_odometer_spec({2, 8, 32}));
  EXPECT_TRUE(rep.accepted) << rep.first_violation();
}

TEST(Tiling, OverlappingSubtilesRejected) {
  TilingSpec spec = z_odometer_spec({2, 4});
  spec.levels[2].shapes[0].decomposition[0].centers = {z(0), z(1)};
  spec.levels[2].shapes[0].subtile_order = {z(0), z(1)};
  const auto rep = validate_system(spec);
  EXPECT_FALSE(rep.accepted);
  EXPECT_FALSE(rep.first_violation().empty());
}

TEST(Tiling, DyadicRatiosFromBoundaryCounting) {
  const auto rep = validate_system(z2_dyadic_spec(4), {{cross(), Rational(1, 2)}});
  ASSERT_TRUE(rep.accepted);
  for (int k = 1; k <= 4; ++k) {
    const std::int64_t side = std::int64_t{1} << k;
    const auto& r = rep.levels[static_cast<std::size_t>(k)].shapes.at(0).invariance.at(0);
    EXPECT_EQ(r.ratio, Rational(4 * side, side * side)) << k;
  }
}

TEST(Tiling, ConfiguredOrdersReadBack) {
  const SystemPtr d = compile(z2_dyadic_spec(2));
  EXPECT_EQ(tile_enumeration(*d, {1, 0, z2(0, 0)}), (std::vector<GroupPoint>{z2(0, 0), z2(1, 0), z2(1, 1), z2(0, 1)}));

  const SystemPtr r = compile(z_odometer_spec({2, 4}, {2}));
  const auto subs = decompose(*r, {2, 0, z(0)});
  ASSERT_EQ(subs.size(), 2u);
  EXPECT_EQ(tile_cells(*r, subs[0]).elements(), (std::vector<GroupPoint>{z(2), z(3)}));
  EXPECT_EQ(tile_cells(*r, subs[1]).elements(), (std::vector<GroupPoint>{z(0), z(1)}));

  const SystemPtr o = compile(z_odometer_spec({2, 4}));
  const auto ones = decompose(*o, {1, 0, z(0)});
  ASSERT_EQ(ones.size(), 2u);
  EXPECT_EQ(ones[0].center, z(0));
  EXPECT_EQ(ones[1].center, z(1));
}

TEST(Tiling, SymbolicEncodingOfEvenCenters) {
  const SystemPtr sys = compile(z_odometer_spec({2}));
  const auto inst = periodic_instance(sys, 1, 0, z(0), {z(2)}, 3);
  const auto sym = symbolic_encode(inst, 1, ball(GroupKind::IntLine, 4));
  for (std::int64_t i = -4; i <= 4; ++i) EXPECT_EQ(sym.label_at(z(i)), i % 2 == 0 ? 0 : -1) << i;
  EXPECT_EQ(decode_centers(*sys, sym).size(), 5u);

  const auto trivial = symbolic_encode(inst, 0, ball(GroupKind::IntLine, 4));
  for (std::int64_t i = -4; i <= 4; ++i) EXPECT_EQ(trivial.label_at(z(i)), 0);
}

TEST(Tiling, DyadicOffsetCentersOddOdd) {
  const SystemPtr sys = compile(z2_dyadic_spec(3));
  // Identity at offset (1,1) of the top square: level-1 centers sit at odd-odd points.
  const auto inst = anchored_instance(sys, 3, 0, z2(1, 1));
  const auto sym = symbolic_encode(inst, 1, inst.window());
  for (const auto& g : inst.window()) {
    const bool odd_odd = (g.coords[0] & 1) && (g.coords[1] & 1);
    EXPECT_EQ(sym.label_at(g) >= 0, odd_odd) << to_string(g);
  }
}

TEST(Tiling, CenterNormalizeKeepsOrders) {
  const TilingSpec rev = z_odometer_spec({2, 4, 8}, {1, 3});
  const OrderedTilingSystem before(rev);
  const OrderedTilingSystem after(center_normalize(rev));
  EXPECT_FALSE(is_centered(before));
  EXPECT_TRUE(is_centered(after));
  for (int k = 1; k <= 3; ++k) {
    EXPECT_EQ(after.center_position(k, 0), 0u);
    // Same order up to the translation that moved the center.
    const auto& e0 = before.enumeration(k, 0);
    const auto& e1 = after.enumeration(k, 0);
    ASSERT_EQ(e0.size(), e1.size());
    const GroupPoint t = inverse(e0.front()) * e1.front();
    for (std::size_t i = 0; i < e0.size(); ++i) EXPECT_EQ(e0[i] * t, e1[i]);
  }
  const TilingSpec plain = z_odometer_spec({2, 4});
  EXPECT_EQ(center_normalize(plain), plain);
}

TEST(Tiling, Odometrize) {
  const TilingSpec plain = z_odometer_spec({4, 16});
  const TilingSpec same = odometrize(plain, {4, 16});
  EXPECT_TRUE(check_odometric(OrderedTilingSystem(same)).odometric);
  EXPECT_EQ(same.levels[1].shapes, plain.levels[1].shapes);

  const TilingSpec dy = odometrize(center_normalize(z2_dyadic_spec(4)), {4, 16, 64, 256});
  const auto rep = check_odometric(OrderedTilingSystem(dy));
  EXPECT_TRUE(rep.odometric);
  EXPECT_GT(rep.rows_checked, 0u);

  // Exhaustive congruence re-check straight from the tables.
  const OrderedTilingSystem sys(dy);
  for (int k = 2; k <= 4; ++k) {
    for (std::size_t s = 0; s < sys.shape_count(k); ++s) {
      const auto& en = sys.enumeration(k, s);
      const auto jt = static_cast<std::int64_t>(sys.center_position(k, s));
      for (const auto& sub : sys.subtiles(k, s)) {
        const auto pos = std::find(en.begin(), en.end(), sub.center) - en.begin();
        EXPECT_EQ((pos - jt) % *sys.base(k - 1), 0);
      }
    }
  }

  try {
    odometrize(z_odometer_spec({4, 12}), {4, 6});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::BaseNotDividing);
  }
}

TEST(Tiling, ReversedOdometerIsOdometrized) {
  const TilingSpec rev = center_normalize(z_odometer_spec({2, 8, 32}, {2}));
  const TilingSpec odo = odometrize(rev, {2, 8, 32});
  EXPECT_TRUE(check_odometric(OrderedTilingSystem(odo)).odometric);
  EXPECT_TRUE(validate_system(odo).accepted);
}

TEST(Tiling, SpecJsonRoundTrip) {
  for (const TilingSpec& spec : {z_odometer_spec({2, 8}, {2}), odometrize(z2_dyadic_spec(3), {4, 16, 64})}) {
    EXPECT_EQ(spec_from_json(spec_to_json(spec)), spec);
  }
}
