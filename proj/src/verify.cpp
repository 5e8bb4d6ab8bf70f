#include <algorithm>
#include <random>

#include "asymp/digest.hpp"
#include "asymp/error.hpp"
#include "asymp/experiment.hpp"

namespace asymp {

namespace {

using Rng = std::mt19937_64;

struct Suite {
  RunReport& rep;
  const char* module;

  void add(const char* law, bool pass, Json detail = Json::object()) {
    rep.checks.push_back({module, law, pass, std::move(detail)});
  }
};

GroupPoint random_point(Rng& rng, GroupKind kind, std::int64_t r) {
  std::uniform_int_distribution<std::int64_t> d(-r, r);
  switch (kind) {
    case GroupKind::IntLine: return z(d(rng));
    case GroupKind::IntPlane: return z2(d(rng), d(rng));
    case GroupKind::Heisenberg3: return h3(d(rng), d(rng), d(rng));
  }
  return identity(kind);
}

constexpr GroupKind kAllGroups[] = {GroupKind::IntLine, GroupKind::IntPlane, GroupKind::Heisenberg3};

SystemPtr small_z_system() { return compile(odometrize(z_odometer_spec({16, 64, 256, 1024}), {16, 64, 256, 1024})); }

void group_suite(Suite s, Rng& rng) {
  std::size_t cases = 0;
  bool ok = true;
  for (GroupKind kind : kAllGroups) {
    for (int c = 0; c < 200; ++c, ++cases) {
      const GroupPoint a = random_point(rng, kind, 50), b = random_point(rng, kind, 50), d = random_point(rng, kind, 50);
      ok = ok && (a * b) * d == a * (b * d);
      ok = ok && a * inverse(a) == identity(kind) && inverse(a) * a == identity(kind);
      ok = ok && a * identity(kind) == a;
    }
  }
  s.add("group_axioms", ok, {{"cases", cases}});

  ok = true;
  for (GroupKind kind : kAllGroups) {
    std::int64_t last_r = 0;
    for (std::uint64_t i = 0; i < 1500; ++i) {
      const GroupPoint g = element_at(kind, i);
      ok = ok && canonical_index(g) == i && radius(g) >= last_r;
      last_r = radius(g);
    }
  }
  s.add("enumeration_roundtrip", ok, {{"indices", 1500}});

  const std::int64_t lo[] = {0}, hi[] = {10};
  const auto r = check_invariance(FiniteSubset(GroupKind::IntLine, {z(-1), z(0), z(1)}), Rational(1, 4),
                                  box(GroupKind::IntLine, lo, hi));
  s.add("invariance_ratio", r.ratio == Rational(1, 5) && r.invariant, {{"ratio", rational_to_json(r.ratio)}});
}

// Translation identity i^{g(<)} g = (i+k)^< for g = k^<. The faulty variant
// reads (i-k) instead.
bool translation_identity(const OrderWindow& w, std::int64_t k, Fault fault) {
  const GroupPoint g = *w.at_position(k);
  const std::int64_t r = w.radius() - (k < 0 ? -k : k);
  std::vector<GroupPoint> acted;
  if (fault == Fault::TranslationSign) {
    for (std::int64_t i = -r; i <= r; ++i) acted.push_back(*w.at_position(i - k) * inverse(g));
  } else {
    const OrderWindow a = act(g, w).value();
    acted = a.positions();
  }
  for (std::int64_t i = -r; i <= r; ++i) {
    if (acted[static_cast<std::size_t>(i + r)] * g != *w.at_position(i + k)) return false;
  }
  return acted[static_cast<std::size_t>(r - k)] == inverse(g);
}

void order_suite(Suite s, Rng& rng, Fault fault) {
  std::vector<OrderWindow> windows;
  for (GroupKind kind : kAllGroups) windows.push_back(enumeration_order(kind, 80));
  {
    const SystemPtr sys = small_z_system();
    windows.push_back(induced_order_full(anchored_instance(sys, 4, 0, z(341)), 4));
  }

  std::size_t cases = 0;
  bool ok = true;
  for (const auto& w : windows) {
    std::uniform_int_distribution<std::int64_t> pick(-w.radius() / 2, w.radius() / 2);
    for (int c = 0; c < 60; ++c, ++cases) ok = ok && translation_identity(w, pick(rng), fault);
  }
  s.add("translation_identity", ok, {{"cases", cases}});

  // g(h(<)) = (hg)(<) on the common radius.
  ok = true;
  cases = 0;
  for (const auto& w : windows) {
    std::uniform_int_distribution<std::int64_t> pick(-w.radius() / 4, w.radius() / 4);
    for (int c = 0; c < 60; ++c, ++cases) {
      const GroupPoint g = *w.at_position(pick(rng));
      const OrderWindow wg = act(g, w).value();
      std::uniform_int_distribution<std::int64_t> pick2(-wg.radius() / 3, wg.radius() / 3);
      const GroupPoint h = *wg.at_position(pick2(rng));
      const OrderWindow lhs = act(h, wg).value();
      const auto rhs = act(h * g, w);
      if (!rhs) {
        ok = false;
        continue;
      }
      const std::int64_t r = std::min(lhs.radius(), rhs->radius());
      ok = ok && lhs.restricted(r) == rhs->restricted(r);
    }
  }
  s.add("action_law", ok, {{"cases", cases}});

  ok = true;
  for (const auto& w : windows) {
    const auto succ = successor_order(w);
    const auto act1 = act(*w.at_position(1), w);
    ok = ok && succ && act1 && *succ == *act1 && *predecessor_order(*succ) == w.restricted(w.radius() - 2);
    for (std::int64_t k = -w.radius(); k <= w.radius(); ++k) ok = ok && *w.position_of(*w.at_position(k)) == k;
  }
  s.add("successor_and_roundtrip", ok, {{"windows", windows.size()}});
}

void tiling_suite(Suite s) {
  const TilingSpec zspec = z_odometer_spec({4, 16, 64, 256}, {2, 3});
  const TilingSpec dspec = z2_dyadic_spec(4);
  const auto vz = validate_system(zspec);
  const auto vd = validate_system(dspec);
  s.add("determinism", vz.accepted && vd.accepted);

  bool ok = true;
  std::size_t rows = 0;
  for (const TilingSpec* spec : {&zspec, &dspec}) {
    std::vector<std::int64_t> base;
    for (int k = 1; k <= spec->depth(); ++k) {
      base.push_back(static_cast<std::int64_t>(spec->levels[static_cast<std::size_t>(k)].shapes.front().offsets.size()));
    }
    const TilingSpec odo = odometrize(center_normalize(*spec), base);
    const auto rep = check_odometric(OrderedTilingSystem(odo));
    ok = ok && rep.odometric && is_centered(OrderedTilingSystem(center_normalize(*spec)));
    rows += rep.rows_checked;
  }
  s.add("odometric_congruences", ok, {{"rows", rows}});

  const SystemPtr sys = small_z_system();
  const TilingInstance inst = anchored_instance(sys, 4, 0, z(341));
  ok = true;
  for (int level = 1; level <= 4; ++level) {
    const auto sym = symbolic_encode(inst, level, inst.window());
    auto decoded = decode_centers(*sys, sym);
    auto orig = inst.tiles(level);
    auto key = [](const Tile& t) { return std::make_pair(t.center, t.shape); };
    std::sort(decoded.begin(), decoded.end(), [&](auto& a, auto& b) { return key(a) < key(b); });
    std::sort(orig.begin(), orig.end(), [&](auto& a, auto& b) { return key(a) < key(b); });
    ok = ok && decoded == orig;
  }
  s.add("symbolic_roundtrip", ok);
}

void ordered_tiling_suite(Suite s) {
  const SystemPtr sys = small_z_system();
  const TilingInstance inst = anchored_instance(sys, 4, 0, z(341));
  const OrderWindow w = induced_order_full(inst, 4);
  const auto st = straightness_status(inst, 4, FiniteSubset(w.kind(), w.positions()));
  s.add("straightness", st.kind == Straightness::StraightSoFar, {{"status", std::string(straightness_name(st.kind))}});

  const auto left = anchored_instance(sys, 4, 0, z(0));
  const auto right = anchored_instance(sys, 4, 0, z(1023));
  s.add("tail_status",
        straightness_status(left, 4).kind == Straightness::PlusNTail &&
            straightness_status(right, 4).kind == Straightness::MinusNTail);

  const auto scan = interval_invariance_scan(*sys, FiniteSubset(GroupKind::IntLine, {z(-1), z(0), z(1)}),
                                             Rational(1, 10), {3, 256});
  s.add("interval_scan", scan.l0 == std::optional<std::size_t>(21), scan_to_json(scan));
}

void symbolic_suite(Suite s, Rng& rng) {
  SampleParams params;
  params.kind = SampleKind::ThueMorse;
  params.region = {GroupKind::IntLine, {-512}, {1024}};
  const UniversePtr tm = generate_sample(params);
  const SystemPtr sys = small_z_system();
  const TilingInstance inst = anchored_instance(sys, 4, 0, z(341));
  const OrderWindow w = induced_order_full(inst, 4);
  const ArrayPoint x = restrict_to(tm->points().front(), FiniteSubset(w.kind(), w.positions()));

  bool ok = true;
  std::uniform_int_distribution<std::int64_t> pick(-50, 50);
  for (int c = 0; c < 20; ++c) {
    const std::int64_t k = pick(rng);
    ok = ok && successor_path(x, w, k) == successor_jump(x, w, k);
  }
  s.add("successor_path", ok, {{"cases", 20}});

  const auto census = tm->census(1, {z(0), z(1), z(2)});
  s.add("thue_morse_census", census->count() == 6, {{"count", census->count()}});

  ok = true;
  for (const auto& [p, n] : {std::pair<std::int64_t, int>{16, 1}, {64, 1}}) {
    std::vector<GroupPoint> cells;
    for (std::int64_t i = 0; i < p; ++i) cells.push_back(z(i));
    ok = ok && entropy_bound_check(*tm, n, {{cells, p}}).all_pass;
  }
  s.add("entropy_bound", ok);
}

void asymptotic_suite(Suite s) {
  SampleParams params;
  params.kind = SampleKind::ThueMorse;
  params.region = {GroupKind::IntLine, {-512}, {1024}};
  const ArrayPoint full = generate_point(params);
  const SystemPtr sys = small_z_system();
  const TilingInstance inst = anchored_instance(sys, 4, 0, z(341));
  const OrderWindow w = induced_order_full(inst, 4);
  const ArrayPoint x = restrict_to(full, FiniteSubset(w.kind(), w.positions()));

  const ArrayPoint y = tail_pair(x, w, 0, *w.at_position(-5));
  const auto v = detect(x, y, w, 0, std::min<std::int64_t>(w.radius(), 300));
  s.add("tail_pair", v.is<AgreeingTail>(), {{"verdict", std::string(v.kind())}});

  ArrayPoint y2 = x;
  const std::size_t i = *x.index_of(*w.at_position(200));
  y2.set_at(1, i, !x.bit_at(1, i));
  const auto v2 = detect(x, y2, w, 0, 200);
  s.add("separated", v2.is<SeparatedBeyond>(), {{"verdict", std::string(v2.kind())}});

  s.add("distance_symmetry", array_distance(x, y2) == array_distance(y2, x) && array_distance(x, x) == Dyadic::nil());
}

void coder_suite(Suite s, Rng& rng) {
  SampleParams params;
  params.kind = SampleKind::ThueMorse;
  params.region = {GroupKind::IntLine, {-1024}, {2048}};
  const UniversePtr tm = generate_sample(params);
  const SystemPtr sys = small_z_system();
  const TilingInstance inst = anchored_instance(sys, 4, 0, z(341));
  const OrderWindow w = induced_order_full(inst, 4);
  const Coder coder = product_pipeline(*tm, inst, w, {1, 2});
  coder.prepare_tables(2);
  const ArrayPoint& x = coder.universe()->points().front();

  bool ok = true;
  for (int d = 1; d <= 2; ++d) ok = ok && check_mask_exactness(coder, coder.encode(x, d)).ok;
  s.add("mask_exactness", ok);

  std::uniform_int_distribution<std::int64_t> pick(-w.radius() / 2, w.radius() / 2);
  ok = true;
  for (int c = 0; c < 3; ++c) {
    ArrayPoint x2 = x;
    const std::size_t i = *x.index_of(*w.at_position(pick(rng)));
    x2.set_at(1, i, !x.bit_at(1, i));
    const Coder pc =
        coder.with_universe(std::make_shared<const SampleUniverse>("pair", std::vector<ArrayPoint>{x, x2}));
    ok = ok && verify_separation(pc, x, x2, pc.encode(x, 2), pc.encode(x2, 2)).ok;
  }
  s.add("separation_witnesses", ok, {{"pairs", 3}});

  params.kind = SampleKind::FullShift;
  bool overflow = false;
  try {
    product_pipeline(*generate_sample(params), inst, w, {1, 2}).prepare_tables(2);
  } catch (const Error& e) {
    overflow = e.code() == Errc::CodeOverflow;
  }
  s.add("full_shift_overflow", overflow);
}

}  // namespace

std::vector<std::string> module_names() {
  return {"group_core", "orders", "tilings", "ordered_tilings", "symbolic", "asymptotic", "extension_coder"};
}

Fault parse_fault(std::string_view name) {
  if (name.empty() || name == "none") return Fault::None;
  if (name == "translation-sign") return Fault::TranslationSign;
  throw Error(Errc::ConfigError, "unknown fault '" + std::string(name) + "'");
}

RunReport verify_all(const std::vector<std::string>& scope, std::uint64_t seed, Fault fault) {
  const auto names = module_names();
  for (const auto& m : scope) {
    if (std::find(names.begin(), names.end(), m) == names.end()) {
      throw Error(Errc::ConfigError, "unknown module '" + m + "' in scope");
    }
  }
  auto in_scope = [&](const std::string& m) { return scope.empty() || std::find(scope.begin(), scope.end(), m) != scope.end(); };

  RunReport rep;
  rep.command = "verify";
  rep.config = {{"scope", scope}, {"seed", seed}, {"fault", fault == Fault::None ? "none" : "translation-sign"}};
  try {
    for (const auto& m : names) {
      if (!in_scope(m)) continue;
      Rng rng(stream_seed(seed, "verify/" + m));
      Suite s{rep, m.c_str()};
      if (m == "group_core") group_suite(s, rng);
      if (m == "orders") order_suite(s, rng, fault);
      if (m == "tilings") tiling_suite(s);
      if (m == "ordered_tilings") ordered_tiling_suite(s);
      if (m == "symbolic") symbolic_suite(s, rng);
      if (m == "asymptotic") asymptotic_suite(s);
      if (m == "extension_coder") coder_suite(s, rng);
    }
  } catch (const Error& e) {
    rep.error = e.what();
    rep.exit_status = exit_code_for(e.code());
    return rep;
  }
  rep.exit_status = 0;
  for (const auto& c : rep.checks)
    if (!c.pass) rep.exit_status = 1;
  return rep;
}

}  // namespace asymp
