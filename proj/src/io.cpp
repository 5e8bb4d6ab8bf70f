#include "asymp/io.hpp"

#include <openssl/evp.h>

#include <charconv>

#include "asymp/error.hpp"

namespace asymp {

std::string dump_canonical(const Json& j) { return j.dump(2) + "\n"; }

std::string base64_encode(const std::vector<std::uint8_t>& bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), bytes.data(), static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

std::vector<std::uint8_t> base64_decode(std::string_view text) {
  if (text.size() % 4 != 0) throw Error(Errc::MalformedSpec, "base64 length is not a multiple of 4");
  std::vector<std::uint8_t> out(3 * (text.size() / 4));
  const int n = EVP_DecodeBlock(out.data(), reinterpret_cast<const unsigned char*>(text.data()), static_cast<int>(text.size()));
  if (n < 0) throw Error(Errc::MalformedSpec, "invalid base64");
  std::size_t pad = 0;
  if (!text.empty() && text.back() == '=') ++pad;
  if (text.size() > 1 && text[text.size() - 2] == '=') ++pad;
  out.resize(static_cast<std::size_t>(n) - pad);
  return out;
}

std::vector<std::uint8_t> pack_bits(const std::vector<std::uint8_t>& bits) {
  std::vector<std::uint8_t> out((bits.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) out[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
  return out;
}

std::vector<std::uint8_t> unpack_bits(const std::vector<std::uint8_t>& bytes, std::size_t count) {
  if (bytes.size() * 8 < count) throw Error(Errc::MalformedSpec, "bit array is shorter than its cell count");
  std::vector<std::uint8_t> bits(count);
  for (std::size_t i = 0; i < count; ++i) bits[i] = (bytes[i / 8] >> (7 - i % 8)) & 1;
  return bits;
}

Json point_to_json(const GroupPoint& g) {
  Json a = Json::array();
  for (int d = 0; d < dimension(g.kind); ++d) a.push_back(g.coords[static_cast<std::size_t>(d)]);
  return a;
}

GroupPoint point_from_json(GroupKind kind, const Json& j) {
  if (!j.is_array() || static_cast<int>(j.size()) != dimension(kind)) {
    throw Error(Errc::MalformedSpec, "expected a " + std::to_string(dimension(kind)) + "-tuple, got " + j.dump());
  }
  std::vector<std::int64_t> c;
  for (const auto& v : j) {
    if (!v.is_number_integer()) throw Error(Errc::MalformedSpec, "non-integer coordinate " + v.dump());
    c.push_back(v.get<std::int64_t>());
  }
  return make_point(kind, c);
}

Json points_to_json(const std::vector<GroupPoint>& pts) {
  Json a = Json::array();
  for (const auto& g : pts) a.push_back(point_to_json(g));
  return a;
}

std::vector<GroupPoint> points_from_json(GroupKind kind, const Json& j) {
  if (!j.is_array()) throw Error(Errc::MalformedSpec, "expected a list of points");
  std::vector<GroupPoint> out;
  for (const auto& v : j) out.push_back(point_from_json(kind, v));
  return out;
}

// ---------------------------------------------------------------------------
// Tiling specs
// ---------------------------------------------------------------------------

Json spec_to_json(const TilingSpec& spec) {
  Json levels = Json::array();
  for (const auto& level : spec.levels) {
    Json shapes = Json::array();
    for (const auto& s : level.shapes) {
      Json rows = Json::array();
      for (const auto& r : s.decomposition) rows.push_back({{"shape_id", r.shape_id}, {"centers", points_to_json(r.centers)}});
      shapes.push_back({{"id", s.id},
                        {"offsets", points_to_json(s.offsets)},
                        {"center", point_to_json(identity(spec.group))},
                        {"subtile_order", points_to_json(s.subtile_order)},
                        {"decomposition", rows}});
    }
    Json l = {{"shapes", shapes}};
    if (level.p) l["p"] = *level.p;
    levels.push_back(l);
  }
  return {{"group", std::string(group_name(spec.group))}, {"levels", levels}};
}

TilingSpec spec_from_json(const Json& j) {
  try {
    TilingSpec spec;
    spec.group = parse_group(j.at("group").get<std::string>());
    for (const auto& lj : j.at("levels")) {
      LevelSpec level;
      if (lj.contains("p") && !lj.at("p").is_null()) level.p = lj.at("p").get<std::int64_t>();
      for (const auto& sj : lj.at("shapes")) {
        ShapeSpec s;
        s.id = sj.at("id").get<std::string>();
        s.offsets = points_from_json(spec.group, sj.at("offsets"));
        if (sj.contains("subtile_order")) s.subtile_order = points_from_json(spec.group, sj.at("subtile_order"));
        if (sj.contains("decomposition")) {
          for (const auto& rj : sj.at("decomposition")) {
            s.decomposition.push_back({rj.at("shape_id").get<std::string>(), points_from_json(spec.group, rj.at("centers"))});
          }
        }
        if (sj.contains("center")) {
          const GroupPoint c = point_from_json(spec.group, sj.at("center"));
          if (!is_identity(c)) {
            const GroupPoint c_inv = inverse(c);
            for (auto& g : s.offsets) g = mul(g, c_inv);
            for (auto& g : s.subtile_order) g = mul(g, c_inv);
            for (auto& r : s.decomposition)
              for (auto& g : r.centers) g = mul(g, c_inv);
          }
        }
        level.shapes.push_back(std::move(s));
      }
      spec.levels.push_back(std::move(level));
    }
    return spec;
  } catch (const Json::exception& e) {
    throw Error(Errc::MalformedSpec, e.what());
  }
}

// ---------------------------------------------------------------------------
// Orders and points
// ---------------------------------------------------------------------------

Json order_to_json(const OrderWindow& w) {
  return {{"group", std::string(group_name(w.kind()))}, {"radius", w.radius()}, {"positions", points_to_json(w.positions())}};
}

OrderWindow order_from_json(const Json& j) {
  try {
    const GroupKind kind = parse_group(j.at("group").get<std::string>());
    return OrderWindow(kind, j.at("radius").get<std::int64_t>(), points_from_json(kind, j.at("positions")));
  } catch (const Json::exception& e) {
    throw Error(Errc::MalformedSpec, e.what());
  }
}

Json array_point_to_json(const ArrayPoint& x) {
  Json j = {{"group", std::string(group_name(x.kind()))},
            {"floors", x.floors()},
            {"cells", points_to_json(x.window().elements())},
            {"bits", base64_encode(pack_bits(x.bits()))}};
  if (x.has_undefined()) j["mask"] = base64_encode(pack_bits(x.undefined_mask()));
  return j;
}

ArrayPoint array_point_from_json(const Json& j) {
  try {
    const GroupKind kind = parse_group(j.at("group").get<std::string>());
    ArrayPoint x(j.at("floors").get<int>(), FiniteSubset(kind, points_from_json(kind, j.at("cells"))));
    const std::size_t total = static_cast<std::size_t>(x.floors()) * x.size();
    const auto bits = unpack_bits(base64_decode(j.at("bits").get<std::string>()), total);
    std::vector<std::uint8_t> mask(total, 0);
    if (j.contains("mask")) mask = unpack_bits(base64_decode(j.at("mask").get<std::string>()), total);
    for (int f = 1; f <= x.floors(); ++f) {
      for (std::size_t i = 0; i < x.size(); ++i) {
        const std::size_t s = static_cast<std::size_t>(f - 1) * x.size() + i;
        if (mask[s]) x.set_undefined_at(f, i);
        else x.set_at(f, i, bits[s] != 0);
      }
    }
    return x;
  } catch (const Json::exception& e) {
    throw Error(Errc::MalformedSpec, e.what());
  }
}

// ---------------------------------------------------------------------------
// Rationals
// ---------------------------------------------------------------------------

Json rational_to_json(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

namespace {

std::int64_t parse_int(std::string_view s) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw Error(Errc::ConfigError, "bad integer '" + std::string(s) + "'");
  return v;
}

Rational parse_rational(std::string_view s) {
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    const std::int64_t den = parse_int(s.substr(slash + 1));
    if (den == 0) throw Error(Errc::ConfigError, "zero denominator");
    return Rational(parse_int(s.substr(0, slash)), den);
  }
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    const std::string_view frac = s.substr(dot + 1);
    if (frac.size() > 18) throw Error(Errc::ConfigError, "too many decimals in '" + std::string(s) + "'");
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    const bool neg = !s.empty() && s.front() == '-';
    const std::string_view whole = s.substr(0, dot);
    const std::int64_t w = whole.empty() || whole == "-" ? 0 : parse_int(whole);
    const std::int64_t f = frac.empty() ? 0 : parse_int(frac);
    return Rational(w, 1) + Rational(neg ? -f : f, den);
  }
  return Rational(parse_int(s), 1);
}

}  // namespace

Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>(), 1);
  if (j.is_number_float()) return parse_rational(j.dump());
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw Error(Errc::ConfigError, "expected a rational, got " + j.dump());
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

Json validation_to_json(const ValidationReport& r) {
  Json levels = Json::array();
  for (const auto& l : r.levels) {
    Json shapes = Json::array();
    for (const auto& s : l.shapes) {
      Json inv = Json::array();
      for (const auto& i : s.invariance) inv.push_back({{"ratio", rational_to_json(i.ratio)}, {"invariant", i.invariant}});
      shapes.push_back({{"id", s.id}, {"size", s.size}, {"invariance", inv}});
    }
    levels.push_back({{"level", l.level}, {"deterministic", l.deterministic}, {"violations", l.violations}, {"shapes", shapes}});
  }
  return {{"accepted", r.accepted}, {"levels", levels}};
}

Json odometric_to_json(const OdometricReport& r) {
  Json v = Json::array();
  for (const auto& c : r.violations) {
    v.push_back({{"level", c.level},
                 {"shape", c.shape},
                 {"subtile_center", point_to_json(c.subtile_center)},
                 {"subtile_position", c.subtile_position},
                 {"center_position", c.center_position},
                 {"modulus", c.modulus}});
  }
  return {{"odometric", r.odometric}, {"rows_checked", r.rows_checked}, {"violations", v}};
}

Json scan_to_json(const IntervalScan& s) {
  Json buckets = Json::array();
  for (const auto& b : s.buckets) {
    buckets.push_back({{"length", b.length}, {"worst_ratio", rational_to_json(b.worst_ratio)}, {"count", b.count}});
  }
  return {{"K", points_to_json(s.K.elements())},
          {"eps", rational_to_json(s.eps)},
          {"l0", s.l0 ? Json(*s.l0) : Json(nullptr)},
          {"buckets", buckets},
          {"envelope",
           {{"levels", s.levels_scanned},
            {"shapes_scanned", s.shapes_scanned},
            {"shapes_skipped", s.shapes_skipped},
            {"intervals", s.intervals_examined}}}};
}

Json bound_to_json(const BoundReport& r) {
  Json e = Json::array();
  for (const auto& b : r.entries) {
    e.push_back({{"length", b.length},
                 {"p", b.p},
                 {"count", b.count},
                 {"bound_exponent", b.exponent},
                 {"pass", b.pass},
                 {"strict_pass", b.strict_pass}});
  }
  return {{"n", r.n}, {"entries", e}, {"pass", r.all_pass}};
}

namespace {

Json dyadic_json(const Dyadic& d) { return d.zero ? Json(nullptr) : Json(d.exponent); }

}  // namespace

Json verdict_to_json(const AsymptoticVerdict& v) {
  Json j = {{"kind", std::string(v.kind())}, {"k0", v.k0}, {"horizon", v.horizon}};
  Json exps = Json::array();
  for (const auto& d : v.distances) exps.push_back(dyadic_json(d));
  j["distance_exponents"] = exps;
  if (const auto* a = std::get_if<AgreeingTail>(&v.value)) j["from"] = a->from;
  if (const auto* c = std::get_if<ConvergentToHorizon>(&v.value)) j["final_distance_exponent"] = dyadic_json(c->final_distance);
  if (const auto* s = std::get_if<SeparatedBeyond>(&v.value)) {
    j["k"] = s->k;
    j["floor_distance_exponent"] = dyadic_json(s->floor_distance);
    j["witnesses"] = s->witnesses;
  }
  if (const auto* u = std::get_if<Undecided>(&v.value)) j["reason"] = u->reason;
  return j;
}

Json coded_to_json(const CodedPoint& y) {
  Json log = Json::array();
  for (const auto& r : y.log) {
    log.push_back({{"level", r.step},
                   {"range", r.range},
                   {"block_hash", r.block_hash},
                   {"code_word", r.code_word},
                   {"write_positions", r.positions}});
  }
  Json skipped = Json::array();
  for (const auto& s : y.skipped) skipped.push_back({{"level", s.step}, {"range", s.range}, {"reason", s.reason}});
  return {{"radius", y.radius},
          {"depth", y.depth},
          {"fill", std::string(fill_name(y.fill))},
          {"row", base64_encode(pack_bits(y.filled.front()))},
          {"mask", base64_encode(pack_bits(y.undefined()))},
          {"family_size", y.filled.size()},
          {"log", log},
          {"skipped", skipped}};
}

Json separation_to_json(const SeparationReport& r) {
  Json w = Json::array();
  for (const auto& x : r.witnesses) {
    w.push_back({{"level", x.step}, {"range", x.range}, {"position", x.position}, {"cell", point_to_json(x.cell)}});
  }
  return {{"n0", r.n0},
          {"g0", point_to_json(r.g0)},
          {"position0", r.position0},
          {"witnesses", w},
          {"skipped_levels", r.skipped_steps},
          {"missing_levels", r.missing_steps},
          {"ok", r.ok}};
}

Json mask_check_to_json(const MaskCheck& m) {
  return {{"ok", m.ok}, {"ranges_checked", m.ranges_checked}, {"failures", m.failures}};
}

Json partition_to_json(const IntervalPartition& p) {
  Json ranges = Json::array();
  for (const auto& r : p.ranges) ranges.push_back({{"index", r.index}, {"lo", r.lo}, {"hi", r.hi}, {"complete", r.complete}});
  return {{"level", p.level}, {"p", p.p}, {"offset", p.offset}, {"radius", p.radius}, {"ranges", ranges}};
}

}  // namespace asymp
