#include <gtest/gtest.h>

#include <random>

#include "asymp/asymptotic.hpp"
#include "asymp/error.hpp"
#include "asymp/ordered_tiling.hpp"

using namespace asymp;

namespace {

ArrayPoint random_point(std::mt19937_64& rng, int floors, const FiniteSubset& w) {
  ArrayPoint x(floors, w);
  for (int f = 1; f <= floors; ++f)
    for (std::size_t i = 0; i < w.size(); ++i) x.set_at(f, i, rng() & 1);
  return x;
}

void flip(ArrayPoint& x, int floor, const GroupPoint& g) { x.set(floor, g, !*x.get(floor, g)); }

OrderWindow dyadic_order(const GroupPoint& anchor, int depth = 6) {
  return induced_order_full(anchored_instance(compile(z2_dyadic_spec(depth)), depth, 0, anchor), depth);
}

}  // namespace

TEST(Asymptotic, DistanceExamples) {
  std::mt19937_64 rng(1);
  const ArrayPoint x = random_point(rng, 3, ball(GroupKind::IntPlane, 6));
  EXPECT_EQ(array_distance(x, x), Dyadic::nil());
  ArrayPoint y = x;
  flip(y, 1, z2(0, 0));
  EXPECT_EQ(array_distance(x, y), Dyadic::pow2(0));
  y = x;
  flip(y, 1, z2(3, -1));
  EXPECT_EQ(array_distance(x, y), Dyadic::pow2(3));
  EXPECT_EQ(array_distance(x, y).value(), 0.125);
  // Floor 3 only counts from radius 2 on: a change at radius 1 is invisible.
  y = x;
  flip(y, 3, z2(1, 0));
  EXPECT_EQ(array_distance(x, y), Dyadic::nil());
  y = x;
  flip(y, 3, z2(2, 0));
  EXPECT_EQ(array_distance(x, y), Dyadic::pow2(2));
  EXPECT_EQ(array_distance(x, y, 1), Dyadic::nil());
}

TEST(Asymptotic, UltrametricOnRandomPoints) {
  std::mt19937_64 rng(4);
  const FiniteSubset w = ball(GroupKind::IntLine, 12);
  for (int t = 0; t < 200; ++t) {
    ArrayPoint a = random_point(rng, 2, w), b = a, c = a;
    for (int k = 0; k < 3; ++k) {
      flip(b, 1 + static_cast<int>(rng() % 2), z(static_cast<std::int64_t>(rng() % 25) - 12));
      flip(c, 1 + static_cast<int>(rng() % 2), z(static_cast<std::int64_t>(rng() % 25) - 12));
    }
    EXPECT_EQ(array_distance(a, b), array_distance(b, a));
    EXPECT_LE(array_distance(a, c), std::max(array_distance(a, b), array_distance(b, c)));
  }
}

TEST(Asymptotic, DetectExamples) {
  std::mt19937_64 rng(5);
  const OrderWindow nat = natural_order(300);
  const ArrayPoint x = random_point(rng, 1, ball(GroupKind::IntLine, 300));
  ArrayPoint y = x;
  flip(y, 1, z(-1));
  const auto v = detect(x, y, nat, 0, 200);
  ASSERT_TRUE(v.is<AgreeingTail>());
  EXPECT_EQ(std::get<AgreeingTail>(v.value).from, 0);

  ArrayPoint s = x;
  for (std::int64_t k = 0; k <= 300; k += 5) flip(s, 1, z(k));
  EXPECT_TRUE(detect(x, s, nat, 0, 200).is<SeparatedBeyond>());

  ArrayPoint near = x;
  flip(near, 1, z(-1));
  flip(near, 1, z(-30));
  const auto cv = detect(x, near, nat, 0, 20, {40, 0});
  EXPECT_TRUE(cv.is<ConvergentToHorizon>()) << cv.kind();

  EXPECT_THROW(detect(x, x, nat, 0, 10), Error);
  EXPECT_THROW(detect(x, y, nat, 0, 301), Error);
}

TEST(Asymptotic, TailPairOnDyadicOrder) {
  std::mt19937_64 rng(6);
  const OrderWindow w = dyadic_order(z2(21, 42));
  const ArrayPoint x = random_point(rng, 2, FiniteSubset(w.kind(), w.positions()));
  const ArrayPoint y = tail_pair(x, w, 0, *w.at_position(-3));
  EXPECT_EQ(*y.get(1, *w.at_position(-3)), !*x.get(1, *w.at_position(-3)));
  const auto v = detect(x, y, w, 0, w.radius());
  EXPECT_TRUE(v.is<AgreeingTail>());
  EXPECT_THROW(tail_pair(x, w, 0, *w.at_position(0)), Error);
  EXPECT_THROW(tail_pair(x, w, 0, *w.at_position(4)), Error);
}

TEST(Asymptotic, DistalityOfEvenOddCenters) {
  const FiniteSubset w = ball(GroupKind::IntLine, 20);
  ArrayPoint even(1, w), odd(1, w);
  for (std::int64_t g = -20; g <= 20; ++g) {
    even.set(1, z(g), g % 2 == 0);
    odd.set(1, z(g), g % 2 != 0);
  }
  std::vector<GroupPoint> shifts;
  for (std::int64_t g = -8; g <= 8; ++g) shifts.push_back(z(g));
  EXPECT_GE(distality_floor(even, odd, shifts), Dyadic::pow2(1));
  EXPECT_EQ(distality_floor(even, even, shifts), Dyadic::nil());
  EXPECT_EQ(distality_floor(even, odd, {z(0)}), array_distance(even, odd));
}

TEST(Asymptotic, PhiCheck) {
  std::mt19937_64 rng(7);
  const OrderWindow w = dyadic_order(z2(21, 42));
  const ArrayPoint x = random_point(rng, 1, FiniteSubset(w.kind(), w.positions()));
  const ArrayPoint y = tail_pair(x, w, 0, *w.at_position(-2));
  const auto same = phi_asymptotic_check(x, y, w, w, 0, 100);
  ASSERT_TRUE(std::holds_alternative<AsymptoticVerdict>(same));
  EXPECT_TRUE(std::get<AsymptoticVerdict>(same).is<AgreeingTail>());

  // Shifted centers: the neighbour's order differs.
  const auto inst = anchored_instance(compile(z2_dyadic_spec(6)), 6, 0, z2(21, 42));
  const OrderWindow moved = induced_order_full(inst.shifted(z2(1, 0)), 6);
  EXPECT_TRUE(std::holds_alternative<OrdersDiffer>(phi_asymptotic_check(x, y, w, moved, 0, 100)));
}
