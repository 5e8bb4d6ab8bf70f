#include <gtest/gtest.h>

#include <random>

#include "asymp/error.hpp"
#include "asymp/order.hpp"
#include "asymp/ordered_tiling.hpp"
#include "asymp/tiling.hpp"

using namespace asymp;

namespace {

// Pairwise check of a <' b <=> ag < bg over the acted window.
void expect_pairwise_action(const OrderWindow& w, const GroupPoint& g) {
  const auto acted = act(g, w);
  ASSERT_TRUE(acted);
  const auto& pts = acted->positions();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = 0; j < pts.size(); ++j) {
      const auto pa = w.position_of(pts[i] * g), pb = w.position_of(pts[j] * g);
      ASSERT_TRUE(pa && pb);
      ASSERT_EQ(i < j, *pa < *pb);
    }
  }
}

OrderWindow dyadic_window(const GroupPoint& anchor) {
  const SystemPtr sys = compile(z2_dyadic_spec(4));
  return induced_order_full(anchored_instance(sys, 4, 0, anchor), 4);
}

}  // namespace

TEST(Order, NaturalLookups) {
  const OrderWindow w = natural_order(10);
  EXPECT_EQ(*w.at_position(5), z(5));
  EXPECT_EQ(*w.position_of(z(-3)), -3);
  EXPECT_EQ(*w.position_of(z(0)), 0);
  EXPECT_EQ(compare(w, z(2), z(5)), Ordering::Less);
  EXPECT_EQ(compare(w, z(2), z(2)), Ordering::Equal);
  EXPECT_EQ(compare(w, z(2), z(50)), Ordering::OutOfWindow);
  EXPECT_FALSE(w.at_position(11).defined());
  EXPECT_EQ(w.at_position(11).failure(), OrderFailure::OutOfWindow);
}

TEST(Order, WindowValidation) {
  EXPECT_THROW(OrderWindow(GroupKind::IntLine, 1, {z(0), z(1), z(2)}), Error);  // not anchored
  EXPECT_THROW(OrderWindow(GroupKind::IntLine, 1, {z(1), z(0), z(1)}), Error);  // repeated
}

TEST(Order, NaturalOrderIsFixed) {
  const OrderWindow w = natural_order(20);
  for (std::int64_t k = -20; k <= 20; ++k) EXPECT_EQ(*act(z(k), w), natural_order(20 - std::llabs(k)));
  EXPECT_EQ(*successor_order(w), natural_order(19));
  EXPECT_EQ(*act(z(0), w), w);
}

TEST(Order, ActionMatchesPairwiseDefinition) {
  std::mt19937_64 rng(3);
  for (const OrderWindow& w : {dyadic_window(z2(5, 9)), enumeration_order(GroupKind::Heisenberg3, 30)}) {
    std::uniform_int_distribution<std::int64_t> pick(-w.radius() / 2, w.radius() / 2);
    for (int c = 0; c < 6; ++c) expect_pairwise_action(w, *w.at_position(pick(rng)));
  }
}

TEST(Order, TwoSuccessorsEqualActionOfSecondElement) {
  const OrderWindow w = dyadic_window(z2(6, 10));
  const OrderWindow twice = *successor_order(*successor_order(w));
  EXPECT_EQ(twice, *act(*w.at_position(2), w));
  EXPECT_EQ(*predecessor_order(*successor_order(w)), w.restricted(w.radius() - 2));
}

TEST(Order, ActionLawOnHeisenberg) {
  std::mt19937_64 rng(5);
  const OrderWindow w = enumeration_order(GroupKind::Heisenberg3, 200);
  std::uniform_int_distribution<std::int64_t> pick(-40, 40);
  for (int c = 0; c < 50; ++c) {
    const GroupPoint g = *w.at_position(pick(rng));
    const OrderWindow wg = *act(g, w);
    const GroupPoint h = *wg.at_position(pick(rng));
    const OrderWindow lhs = *act(h, wg);
    const auto rhs = act(h * g, w);
    ASSERT_TRUE(rhs);
    const std::int64_t r = std::min(lhs.radius(), rhs->radius());
    EXPECT_EQ(lhs.restricted(r), rhs->restricted(r));
  }
}

TEST(Order, TranslationIdentity) {
  const OrderWindow w = dyadic_window(z2(3, 12));
  for (std::int64_t k = -w.radius() / 2; k <= w.radius() / 2; ++k) {
    const GroupPoint g = *w.at_position(k);
    const OrderWindow a = *act(g, w);
    for (std::int64_t i = -a.radius(); i <= a.radius(); ++i) ASSERT_EQ(*a.at_position(i) * g, *w.at_position(i + k));
  }
}

TEST(Order, EnumerationOrderAlternates) {
  const OrderWindow w = enumeration_order(GroupKind::IntPlane, 4);
  EXPECT_EQ(*w.at_position(1), element_at(GroupKind::IntPlane, 1));
  EXPECT_EQ(*w.at_position(-1), element_at(GroupKind::IntPlane, 2));
  EXPECT_EQ(*w.at_position(2), element_at(GroupKind::IntPlane, 3));
}
