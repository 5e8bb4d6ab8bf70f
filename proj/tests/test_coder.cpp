#include <gtest/gtest.h>

#include <random>
#include <set>

#include "asymp/asymptotic.hpp"
#include "asymp/coder.hpp"
#include "asymp/error.hpp"

using namespace asymp;

namespace {

struct Rig {
  SystemPtr sys;
  TilingInstance inst;
  OrderWindow order;
};

Rig z_setup(std::vector<std::int64_t> base, std::int64_t anchor) {
  SystemPtr sys = compile(odometrize(z_odometer_spec(base), base));
  const int top = static_cast<int>(base.size());
  TilingInstance inst = anchored_instance(sys, top, 0, z(anchor));
  OrderWindow order = induced_order_full(inst, top);
  return {sys, inst, order};
}

UniversePtr sample(SampleKind kind, std::int64_t lo, std::int64_t hi) {
  SampleParams p;
  p.kind = kind;
  p.region = {GroupKind::IntLine, {lo}, {hi}};
  return generate_sample(p);
}

UniversePtr periodic(const std::string& pattern, std::int64_t len) {
  const std::int64_t lo[] = {0}, hi[] = {len};
  ArrayPoint x(1, box(GroupKind::IntLine, lo, hi));
  for (std::int64_t i = 0; i < len; ++i) x.set(1, z(i), pattern[static_cast<std::size_t>(i) % pattern.size()] == '1');
  return std::make_shared<const SampleUniverse>("periodic " + pattern, std::vector<ArrayPoint>{x});
}

std::vector<GroupPoint> interval(std::int64_t len) {
  std::vector<GroupPoint> v;
  for (std::int64_t i = 0; i < len; ++i) v.push_back(z(i));
  return v;
}

}  // namespace

TEST(Coder, PartitionsOnNaturalOdometer) {
  const Rig s = z_setup({4, 8, 32}, 13);
  const auto p1 = partition_intervals(s.order, s.inst, 1);
  EXPECT_EQ(p1.p, 4);
  // Centers sit at multiples of 4 in the tile frame; the identity is 13.
  EXPECT_EQ(p1.offset, -1);
  for (const auto& r : p1.ranges) {
    EXPECT_EQ(r.hi - r.lo, 4);
    EXPECT_EQ((r.lo + 13) % 4, 0);
  }
  const auto p2 = partition_intervals(s.order, s.inst, 2);
  for (const auto& r : p2.ranges) {
    if (!r.complete) continue;
    const auto* a = p1.range(p1.index_of_position(r.lo));
    ASSERT_NE(a, nullptr);
    EXPECT_EQ(a->lo, r.lo);
    ASSERT_NE(p1.range(a->index + 1), nullptr);
    EXPECT_EQ(p1.range(a->index + 1)->hi, r.hi);
  }
}

TEST(Coder, NaturalOrderRangesStartAtZero) {
  const Rig s = z_setup({4, 16, 64}, 20);
  const auto p1 = partition_intervals(s.order, s.inst, 1);
  const auto* r0 = p1.range(p1.index_of_position(0));
  EXPECT_EQ(r0->lo, 0);
  EXPECT_EQ(r0->hi, 4);
  EXPECT_EQ(p1.range(r0->index - 1)->lo, -4);
}

TEST(Coder, CodeTables) {
  const auto four = periodic("0001", 64);
  const CodeTable t = build_code_table(*four, 1, interval(4), 4);
  EXPECT_EQ(t.length(), 2);
  ASSERT_EQ(t.size(), 4u);
  std::set<std::vector<std::uint8_t>> words;
  for (std::uint64_t i = 0; i < 4; ++i) {
    EXPECT_EQ(t.code_of(t.census().blocks[i]), std::optional<std::uint64_t>(i));
    words.insert(t.word(i));
  }
  EXPECT_EQ(t.word(0), (std::vector<std::uint8_t>{0, 0}));
  EXPECT_EQ(t.word(3), (std::vector<std::uint8_t>{1, 1}));
  EXPECT_EQ(words.size(), 4u);

  try {
    build_code_table(*periodic("00001", 64), 1, interval(4), 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::CodeOverflow);
  }
  EXPECT_THROW(build_code_table(*four, 2, interval(4), 6), Error);

  const auto tm = sample(SampleKind::ThueMorse, -2048, 4096);
  EXPECT_LE(build_code_table(*tm, 1, interval(16), 16).size(), 256u);
}

TEST(Coder, ConstantZeroEncodesToZero) {
  const Rig s = z_setup({16, 64, 256}, 85);
  SampleParams p;
  p.kind = SampleKind::ConstantZero;
  p.floors = 2;
  p.region = {GroupKind::IntLine, {-400}, {400}};
  const Coder c(s.inst, s.order, {1, 2}, generate_sample(p));
  const CodedPoint y = c.encode(c.universe()->points().front(), 2);
  EXPECT_FALSE(y.log.empty());
  for (const auto& rec : y.log) EXPECT_EQ(rec.code_word, std::string(static_cast<std::size_t>(c.p(rec.step) >> rec.step), '0'));
  for (auto b : y.row) EXPECT_EQ(b, 0);
  for (auto b : y.filled.front()) EXPECT_EQ(b, 0);

  // The product adds one indicator floor per (level, shape).
  const Coder prod = product_pipeline(*sample(SampleKind::ConstantZero, -400, 400), s.inst, s.order, {1, 2});
  EXPECT_EQ(prod.universe()->floors(), 1 + 3);
}

TEST(Coder, ThueMorseDepthTwo) {
  const Rig s = z_setup({16, 64, 256, 1024}, 341);
  const Coder c = product_pipeline(*sample(SampleKind::ThueMorse, -2048, 4096), s.inst, s.order, {1, 2});
  const ArrayPoint& x = c.universe()->points().front();
  const CodedPoint y2 = c.encode(x, 2);
  EXPECT_TRUE(check_mask_exactness(c, y2).ok);

  // Step 2 leaves a quarter of each complete level-2 range open.
  const auto& part = c.partition(2);
  std::size_t counted = 0;
  for (const auto& r : part.ranges) {
    const auto* prev = part.range(r.index - 1);
    if (!r.complete || !prev || !prev->complete) continue;
    std::int64_t open = 0;
    for (std::int64_t k = r.lo; k < r.hi; ++k) open += y2.undefined()[static_cast<std::size_t>(k + s.order.radius())];
    EXPECT_EQ(open, 16);
    ++counted;
  }
  EXPECT_GT(counted, 5u);

  // Prefix stability and disjoint write regions.
  const CodedPoint y1 = c.encode(x, 1);
  for (std::size_t i = 0; i < y1.row.size(); ++i)
    if (!y1.undefined()[i]) {
      EXPECT_EQ(y1.row[i], y2.row[i]);
    }
  std::set<std::int64_t> written;
  for (const auto& rec : y2.log)
    for (auto k : rec.positions) EXPECT_TRUE(written.insert(k).second) << k;

  // Determinism.
  const CodedPoint again = c.encode(x, 2);
  EXPECT_EQ(again.row, y2.row);
  EXPECT_EQ(again.masks, y2.masks);
}

TEST(Coder, FullShiftOverflows) {
  const Rig s = z_setup({4, 16, 64}, 21);
  const Coder c = product_pipeline(*sample(SampleKind::FullShift, 0, 70000), s.inst, s.order, {1});
  try {
    c.prepare_tables(1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::CodeOverflow);
  }
}

TEST(Coder, SeparationWitnesses) {
  const Rig s = z_setup({16, 64, 256, 1024}, 341);
  const Coder base = product_pipeline(*sample(SampleKind::ThueMorse, -2048, 4096), s.inst, s.order, {1, 2});
  const ArrayPoint& x = base.universe()->points().front();
  std::mt19937_64 rng(9);
  for (int t = 0; t < 10; ++t) {
    const std::int64_t k = static_cast<std::int64_t>(rng() % 401) - 200;
    ArrayPoint x2 = x;
    x2.set(1, *s.order.at_position(k), !*x.get(1, *s.order.at_position(k)));
    const Coder c = base.with_universe(std::make_shared<const SampleUniverse>("pair", std::vector<ArrayPoint>{x, x2}));
    const CodedPoint y = c.encode(x, 2), y2 = c.encode(x2, 2);
    const auto rep = verify_separation(c, x, x2, y, y2);
    EXPECT_TRUE(rep.ok);
    EXPECT_EQ(rep.position0, k);
    ASSERT_EQ(rep.witnesses.size(), 2u);
    EXPECT_NE(rep.witnesses[0].position, rep.witnesses[1].position);
    EXPECT_TRUE(detect(y.as_point(), y2.as_point(), s.order, k, rep.witnesses.back().position).is<SeparatedBeyond>());
  }
  const CodedPoint y = base.encode(x, 2);
  try {
    verify_separation(base, x, x, y, y);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::PairEqual);
  }
  ArrayPoint edge = x;
  const GroupPoint last = *s.order.at_position(s.order.radius());
  edge.set(1, last, !*x.get(1, last));
  try {
    verify_separation(base, x, edge, y, y);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::WindowTooSmall);
  }
}

TEST(Coder, TowerStages) {
  const Rig s = z_setup({16, 64, 256, 1024}, 341);
  const Coder c = product_pipeline(*sample(SampleKind::ThueMorse, -2048, 4096), s.inst, s.order, {1, 2});
  const auto tower = tower_compose(c, c.universe()->points().front(), {1, 1});
  ASSERT_EQ(tower.size(), 2u);
  EXPECT_TRUE(check_mask_exactness(c, tower[0]).ok);
  EXPECT_TRUE(check_mask_exactness(c, tower[1]).ok);
  EXPECT_EQ(tower[0].masks, tower[1].masks);
  const auto single = tower_compose(c, c.universe()->points().front(), {2});
  EXPECT_EQ(single.front().row, c.encode(c.universe()->points().front(), 2).row);
}

TEST(Coder, RefusesNonStraightAndMismatchedGroups) {
  const Rig s = z_setup({16, 64, 256}, 0);
  try {
    Coder(s.inst, s.order, {1}, sample(SampleKind::ThueMorse, -500, 500));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotStraight);
  }
  SampleParams p;
  p.kind = SampleKind::Z2Xor;
  p.region = {GroupKind::IntPlane, {0, 0}, {8, 8}};
  const Rig ok = z_setup({16, 64, 256}, 85);
  EXPECT_THROW(product_pipeline(*generate_sample(p), ok.inst, ok.order, {1}), Error);
}
