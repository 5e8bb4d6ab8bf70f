#include "asymp/tiling.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include "asymp/error.hpp"

namespace asymp {

namespace {

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

void check_kind(GroupKind kind, const GroupPoint& g, const std::string& where) {
  if (g.kind != kind) throw Error(Errc::MalformedSpec, where + ": point " + to_string(g) + " from another group");
}

}  // namespace

// ---------------------------------------------------------------------------
// Built-in specs
// ---------------------------------------------------------------------------

TilingSpec z_odometer_spec(const std::vector<std::int64_t>& base, const std::vector<int>& reversed_levels) {
  TilingSpec spec;
  spec.group = GroupKind::IntLine;
  spec.levels.push_back({{ShapeSpec{"e", {z(0)}, {}, {}}}, std::nullopt});
  std::int64_t prev = 1;
  std::string prev_id = "e";
  for (std::size_t k = 1; k <= base.size(); ++k) {
    const std::int64_t p = base[k - 1];
    if (p <= prev || p % prev != 0) {
      throw Error(Errc::BaseNotDividing, "odometer base must be strictly increasing with p_{k-1} | p_k");
    }
    ShapeSpec s;
    s.id = "I" + std::to_string(k);
    for (std::int64_t a = 0; a < p; ++a) s.offsets.push_back(z(a));
    DecompositionRow row{prev_id, {}};
    for (std::int64_t a = 0; a < p; a += prev) row.centers.push_back(z(a));
    s.subtile_order = row.centers;
    if (std::find(reversed_levels.begin(), reversed_levels.end(), static_cast<int>(k)) != reversed_levels.end()) {
      std::reverse(s.subtile_order.begin(), s.subtile_order.end());
    }
    s.decomposition.push_back(std::move(row));
    spec.levels.push_back({{std::move(s)}, p});
    prev = p;
    prev_id = "I" + std::to_string(k);
  }
  return spec;
}

TilingSpec z2_dyadic_spec(int depth) {
  TilingSpec spec;
  spec.group = GroupKind::IntPlane;
  spec.levels.push_back({{ShapeSpec{"e", {z2(0, 0)}, {}, {}}}, std::nullopt});
  std::string prev_id = "e";
  for (int k = 1; k <= depth; ++k) {
    const std::int64_t side = std::int64_t{1} << k;
    const std::int64_t h = side / 2;
    ShapeSpec s;
    s.id = "Q" + std::to_string(k);
    for (std::int64_t a = 0; a < side; ++a)
      for (std::int64_t b = 0; b < side; ++b) s.offsets.push_back(z2(a, b));
    s.subtile_order = {z2(0, 0), z2(h, 0), z2(h, h), z2(0, h)};
    s.decomposition.push_back({prev_id, s.subtile_order});
    spec.levels.push_back({{std::move(s)}, std::int64_t{1} << (2 * k)});
    prev_id = "Q" + std::to_string(k);
  }
  return spec;
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

std::string ValidationReport::first_violation() const {
  for (const auto& l : levels)
    if (!l.violations.empty()) return "level " + std::to_string(l.level) + ": " + l.violations.front();
  return {};
}

ValidationReport validate_system(const TilingSpec& spec, const std::vector<InvarianceProbe>& probes) {
  const GroupKind kind = spec.group;
  if (spec.levels.empty()) throw Error(Errc::MalformedSpec, "no levels");
  const auto& l0 = spec.levels[0].shapes;
  if (l0.size() != 1 || l0[0].offsets.size() != 1 || !is_identity(l0[0].offsets[0]) || l0[0].offsets[0].kind != kind ||
      !l0[0].decomposition.empty()) {
    throw Error(Errc::MalformedSpec, "level 0 must be the trivial singleton shape");
  }

  ValidationReport report;
  std::vector<std::unordered_map<std::string, const ShapeSpec*>> by_id(spec.levels.size());
  for (std::size_t k = 0; k < spec.levels.size(); ++k) {
    LevelReport lr;
    lr.level = static_cast<int>(k);
    const auto& shapes = spec.levels[k].shapes;
    if (shapes.empty()) throw Error(Errc::MalformedSpec, "level " + std::to_string(k) + " has no shapes");
    for (const auto& s : shapes) {
      const std::string where = "level " + std::to_string(k) + " shape " + s.id;
      if (!by_id[k].emplace(s.id, &s).second) throw Error(Errc::MalformedSpec, where + ": duplicate id");
      for (const auto& g : s.offsets) check_kind(kind, g, where);
      const FiniteSubset cells(kind, s.offsets);
      if (cells.size() != s.offsets.size()) throw Error(Errc::MalformedSpec, where + ": repeated offsets");
      if (!cells.contains(identity(kind))) throw Error(Errc::MalformedSpec, where + ": shape lacks the unit");

      ShapeReport sr{s.id, cells.size(), {}};
      for (const auto& probe : probes) sr.invariance.push_back(check_invariance(probe.K, probe.eps, cells));
      lr.shapes.push_back(std::move(sr));
      if (k == 0) continue;

      if (s.decomposition.empty()) throw Error(Errc::MalformedSpec, where + ": missing decomposition rows");
      std::unordered_map<GroupPoint, int, GroupPointHash> hits;
      std::vector<GroupPoint> all_centers;
      for (const auto& row : s.decomposition) {
        auto it = by_id[k - 1].find(row.shape_id);
        if (it == by_id[k - 1].end()) {
          throw Error(Errc::MalformedSpec, where + ": decomposition references unknown shape '" + row.shape_id + "'");
        }
        for (const auto& c : row.centers) {
          check_kind(kind, c, where);
          all_centers.push_back(c);
          bool reported = false;
          for (const auto& off : it->second->offsets) {
            const GroupPoint cell = mul(off, c);
            const int n = ++hits[cell];
            if (reported) continue;
            if (!cells.contains(cell)) {
              lr.violations.push_back(where + ": subtile (" + row.shape_id + ", " + to_string(c) +
                                      ") leaves the shape at " + to_string(cell));
              reported = true;
            } else if (n > 1) {
              lr.violations.push_back(where + ": subtile (" + row.shape_id + ", " + to_string(c) +
                                      ") overlaps at " + to_string(cell));
              reported = true;
            }
          }
        }
      }
      for (const auto& g : cells) {
        if (!hits.count(g)) lr.violations.push_back(where + ": cell " + to_string(g) + " not covered by subtiles");
      }
      std::vector<GroupPoint> order = s.subtile_order;
      std::sort(all_centers.begin(), all_centers.end());
      std::sort(order.begin(), order.end());
      if (order != all_centers) lr.violations.push_back(where + ": subtile order is not a permutation of the centers");
    }
    lr.deterministic = lr.violations.empty();
    report.accepted = report.accepted && lr.deterministic;
    report.levels.push_back(std::move(lr));
  }
  return report;
}

// ---------------------------------------------------------------------------
// OrderedTilingSystem
// ---------------------------------------------------------------------------

OrderedTilingSystem::OrderedTilingSystem(TilingSpec spec) : spec_(std::move(spec)) {
  const ValidationReport report = validate_system(spec_);
  if (!report.accepted) throw Error(Errc::MalformedSpec, report.first_violation());

  const std::size_t n_levels = spec_.levels.size();
  ids_.resize(n_levels);
  subtiles_.resize(n_levels);
  enums_.resize(n_levels);
  center_pos_.resize(n_levels);
  for (std::size_t k = 0; k < n_levels; ++k) {
    const auto& shapes = spec_.levels[k].shapes;
    for (std::size_t i = 0; i < shapes.size(); ++i) ids_[k].emplace(shapes[i].id, i);
    subtiles_[k].resize(shapes.size());
    enums_[k].resize(shapes.size());
    center_pos_[k].resize(shapes.size());
    for (std::size_t i = 0; i < shapes.size(); ++i) {
      const auto& s = shapes[i];
      auto& en = enums_[k][i];
      if (k == 0) {
        en = {identity(spec_.group)};
      } else {
        std::unordered_map<GroupPoint, std::size_t, GroupPointHash> shape_of_center;
        for (const auto& row : s.decomposition)
          for (const auto& c : row.centers) shape_of_center.emplace(c, ids_[k - 1].at(row.shape_id));
        en.reserve(s.offsets.size());
        for (const auto& c : s.subtile_order) {
          const std::size_t sub = shape_of_center.at(c);
          subtiles_[k][i].push_back({sub, c});
          for (const auto& off : enums_[k - 1][sub]) en.push_back(mul(off, c));
        }
      }
      center_pos_[k][i] = static_cast<std::size_t>(
          std::find_if(en.begin(), en.end(), [](const GroupPoint& g) { return is_identity(g); }) - en.begin());
    }
  }
}

std::size_t OrderedTilingSystem::shape_index(int level, const std::string& id) const {
  const auto& m = ids_.at(level);
  auto it = m.find(id);
  if (it == m.end()) throw Error(Errc::UnknownShape, "level " + std::to_string(level) + " shape '" + id + "'");
  return it->second;
}

std::optional<std::int64_t> OrderedTilingSystem::base(int level) const {
  if (level == 0) return 1;
  return spec_.levels.at(level).p;
}

SystemPtr compile(TilingSpec spec) { return std::make_shared<const OrderedTilingSystem>(std::move(spec)); }

// ---------------------------------------------------------------------------
// Tiles
// ---------------------------------------------------------------------------

namespace {

void require_tile(const OrderedTilingSystem& sys, const Tile& t) {
  if (t.level < 0 || t.level > sys.depth() || t.shape >= sys.shape_count(t.level)) {
    throw Error(Errc::UnknownShape, "tile at level " + std::to_string(t.level) + " with shape #" +
                                        std::to_string(t.shape));
  }
}

}  // namespace

FiniteSubset tile_cells(const OrderedTilingSystem& sys, const Tile& t) {
  return FiniteSubset(sys.kind(), tile_enumeration(sys, t));
}

std::vector<GroupPoint> tile_enumeration(const OrderedTilingSystem& sys, const Tile& t) {
  require_tile(sys, t);
  const auto& en = sys.enumeration(t.level, t.shape);
  std::vector<GroupPoint> out;
  out.reserve(en.size());
  for (const auto& off : en) out.push_back(mul(off, t.center));
  return out;
}

std::vector<Tile> decompose(const OrderedTilingSystem& sys, const Tile& t) {
  require_tile(sys, t);
  if (t.level < 1) throw Error(Errc::UnknownShape, "level-0 tiles have no subtiles");
  std::vector<Tile> out;
  for (const auto& st : sys.subtiles(t.level, t.shape)) out.push_back({t.level - 1, st.shape, mul(st.center, t.center)});
  return out;
}

TilingInstance::TilingInstance(SystemPtr sys, int top_level, std::vector<Tile> top_tiles,
                               std::optional<FiniteSubset> window)
    : sys_(std::move(sys)), top_level_(top_level), window_(sys_->kind()) {
  if (top_level_ < 0 || top_level_ > sys_->depth()) {
    throw Error(Errc::OutOfRange, "instance level " + std::to_string(top_level_) + " beyond system depth");
  }
  levels_.resize(static_cast<std::size_t>(top_level_) + 1);
  std::vector<Tile> current = std::move(top_tiles);
  for (int k = top_level_; k >= 0; --k) {
    auto& lt = levels_[static_cast<std::size_t>(k)];
    lt.tiles = current;
    std::vector<Tile> next;
    for (std::uint32_t i = 0; i < lt.tiles.size(); ++i) {
      const Tile& t = lt.tiles[i];
      if (t.level != k) throw Error(Errc::MalformedSpec, "top tile level mismatch");
      for (const auto& off : sys_->enumeration(k, t.shape)) {
        if (!lt.owner.emplace(mul(off, t.center), i).second) {
          throw Error(Errc::MalformedSpec, "tiles overlap at " + to_string(mul(off, t.center)));
        }
      }
      if (k > 0) {
        auto subs = decompose(*sys_, t);
        next.insert(next.end(), subs.begin(), subs.end());
      }
    }
    current = std::move(next);
  }
  if (window) {
    for (const auto& g : *window) {
      if (!covers(g)) throw Error(Errc::UncoveredCell, "window cell " + to_string(g) + " not covered");
    }
    window_ = std::move(*window);
  } else {
    std::vector<GroupPoint> cells;
    cells.reserve(levels_[0].tiles.size());
    for (const auto& t : levels_[0].tiles) cells.push_back(t.center);
    window_ = FiniteSubset(sys_->kind(), std::move(cells));
  }
}

std::optional<Tile> TilingInstance::tile_at(int level, const GroupPoint& g) const {
  if (level < 0 || level > top_level_) return std::nullopt;
  const auto& lt = levels_[static_cast<std::size_t>(level)];
  auto it = lt.owner.find(g);
  if (it == lt.owner.end()) return std::nullopt;
  return lt.tiles[it->second];
}

std::optional<Tile> TilingInstance::central_tile(int level) const { return tile_at(level, identity(kind())); }

TilingInstance TilingInstance::shifted(const GroupPoint& g) const {
  const GroupPoint g_inv = inverse(g);
  std::vector<Tile> top;
  for (const auto& t : top_tiles()) top.push_back({t.level, t.shape, mul(t.center, g_inv)});
  return TilingInstance(sys_, top_level_, std::move(top), translate_right(window_, g_inv));
}

TilingInstance TilingInstance::with_window(FiniteSubset window) const {
  return TilingInstance(sys_, top_level_, top_tiles(), std::move(window));
}

TilingInstance anchored_instance(SystemPtr sys, int level, std::size_t shape, const GroupPoint& anchor) {
  const auto& offsets = sys->shape(level, shape).offsets;
  if (std::find(offsets.begin(), offsets.end(), anchor) == offsets.end()) {
    throw Error(Errc::OutOfRange, "anchor " + to_string(anchor) + " not in shape");
  }
  Tile t{level, shape, inverse(anchor)};
  return TilingInstance(std::move(sys), level, {t});
}

TilingInstance periodic_instance(SystemPtr sys, int level, std::size_t shape, const GroupPoint& anchor,
                                 const std::vector<GroupPoint>& lattice, int copies) {
  const GroupPoint c0 = inverse(anchor);
  std::vector<Tile> tiles;
  std::vector<std::int64_t> coeff(lattice.size(), -copies);
  for (;;) {
    GroupPoint c = c0;
    for (std::size_t i = 0; i < lattice.size(); ++i) {
      GroupPoint step = identity(sys->kind());
      const GroupPoint& v = coeff[i] >= 0 ? lattice[i] : inverse(lattice[i]);
      for (std::int64_t n = 0; n < std::llabs(coeff[i]); ++n) step = mul(step, v);
      c = mul(c, step);
    }
    tiles.push_back({level, shape, c});
    std::size_t i = 0;
    while (i < coeff.size() && coeff[i] == copies) coeff[i++] = -copies;
    if (i == coeff.size()) break;
    ++coeff[i];
  }
  return TilingInstance(std::move(sys), level, std::move(tiles));
}

// ---------------------------------------------------------------------------
// Symbolic encoding
// ---------------------------------------------------------------------------

int SymbolicTiling::label_at(const GroupPoint& g) const {
  const auto& el = window.elements();
  for (std::size_t i = 0; i < el.size(); ++i)
    if (el[i] == g) return labels[i];
  throw Error(Errc::OutOfRange, "cell " + to_string(g) + " outside the symbolic window");
}

SymbolicTiling symbolic_encode(const TilingInstance& inst, int level, const FiniteSubset& window) {
  SymbolicTiling sym;
  sym.level = level;
  for (const auto& s : inst.system().spec().levels.at(level).shapes) sym.alphabet.push_back(s.id);
  sym.window = window;
  sym.labels.reserve(window.size());
  for (const auto& g : window) {
    const auto t = inst.tile_at(level, g);
    if (!t) throw Error(Errc::UncoveredCell, "cell " + to_string(g) + " not covered at level " + std::to_string(level));
    sym.labels.push_back(t->center == g ? static_cast<int>(t->shape) : -1);
  }
  return sym;
}

std::vector<Tile> decode_centers(const OrderedTilingSystem& sys, const SymbolicTiling& sym) {
  std::vector<Tile> out;
  for (std::size_t i = 0; i < sym.labels.size(); ++i) {
    if (sym.labels[i] < 0) continue;
    Tile t{sym.level, static_cast<std::size_t>(sym.labels[i]), sym.window[i]};
    require_tile(sys, t);
    out.push_back(t);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Centering and odometric systems
// ---------------------------------------------------------------------------

bool is_centered(const OrderedTilingSystem& sys) {
  for (int k = 1; k <= sys.depth(); ++k)
    for (std::size_t i = 0; i < sys.shape_count(k); ++i)
      if (sys.center_position(k, i) != 0) return false;
  return true;
}

namespace {

/// Shape S re-centered at `new_center` (an offset of S), with each subtile i
/// re-centered at offset `sub_centers[i]` of its own shape.
ShapeSpec recentered_shape(const OrderedTilingSystem& sys, int k, std::size_t idx, const GroupPoint& new_center,
                           const std::vector<std::string>& sub_ids, const std::vector<GroupPoint>& sub_centers,
                           std::string id) {
  const ShapeSpec& s = sys.shape(k, idx);
  const GroupPoint inv = inverse(new_center);
  ShapeSpec out;
  out.id = std::move(id);
  for (const auto& g : s.offsets) out.offsets.push_back(mul(g, inv));
  const auto& subs = sys.subtiles(k, idx);
  for (std::size_t i = 0; i < subs.size(); ++i) {
    const GroupPoint c = mul(mul(sub_centers[i], subs[i].center), inv);
    out.subtile_order.push_back(c);
    auto row = std::find_if(out.decomposition.begin(), out.decomposition.end(),
                            [&](const DecompositionRow& r) { return r.shape_id == sub_ids[i]; });
    if (row == out.decomposition.end()) {
      out.decomposition.push_back({sub_ids[i], {c}});
    } else {
      row->centers.push_back(c);
    }
  }
  return out;
}

}  // namespace

TilingSpec center_normalize(const TilingSpec& spec) {
  const OrderedTilingSystem sys(spec);
  TilingSpec out;
  out.group = spec.group;
  out.levels.push_back(spec.levels[0]);
  for (int k = 1; k <= sys.depth(); ++k) {
    LevelSpec level;
    level.p = spec.levels[static_cast<std::size_t>(k)].p;
    for (std::size_t i = 0; i < sys.shape_count(k); ++i) {
      std::vector<std::string> ids;
      std::vector<GroupPoint> firsts;
      for (const auto& st : sys.subtiles(k, i)) {
        ids.push_back(sys.shape(k - 1, st.shape).id);
        firsts.push_back(sys.enumeration(k - 1, st.shape).front());
      }
      level.shapes.push_back(
          recentered_shape(sys, k, i, sys.enumeration(k, i).front(), ids, firsts, sys.shape(k, i).id));
    }
    out.levels.push_back(std::move(level));
  }
  return out;
}

OdometricReport check_odometric(const OrderedTilingSystem& sys) {
  OdometricReport report;
  for (int k = 1; k <= sys.depth(); ++k) {
    if (!sys.base(k)) throw Error(Errc::NotOdometric, "no base entry at level " + std::to_string(k));
  }
  for (int k = 1; k <= sys.depth(); ++k) {
    const std::int64_t m = *sys.base(k - 1);
    for (std::size_t i = 0; i < sys.shape_count(k); ++i) {
      const auto jT = static_cast<std::int64_t>(sys.center_position(k, i));
      std::int64_t offset = 0;
      for (const auto& st : sys.subtiles(k, i)) {
        const std::int64_t j_sub = offset + static_cast<std::int64_t>(sys.center_position(k - 1, st.shape));
        ++report.rows_checked;
        if (floor_mod(j_sub - jT, m) != 0) {
          report.odometric = false;
          report.violations.push_back({k, sys.shape(k, i).id, st.center, j_sub, jT, m});
        }
        offset += static_cast<std::int64_t>(sys.enumeration(k - 1, st.shape).size());
      }
    }
  }
  return report;
}

TilingSpec odometrize(const TilingSpec& centered, const std::vector<std::int64_t>& base, CenterChoice choice) {
  const OrderedTilingSystem sys(centered);
  const int depth = sys.depth();
  if (static_cast<int>(base.size()) != depth) {
    throw Error(Errc::BaseNotDividing, "base has " + std::to_string(base.size()) + " entries for " +
                                           std::to_string(depth) + " levels");
  }
  std::vector<std::int64_t> p(static_cast<std::size_t>(depth) + 1, 1);
  for (int k = 1; k <= depth; ++k) {
    p[k] = base[k - 1];
    if (p[k] <= p[k - 1] || p[k] % p[k - 1] != 0) {
      throw Error(Errc::BaseNotDividing, "p_" + std::to_string(k - 1) + " = " + std::to_string(p[k - 1]) +
                                             " does not properly divide p_" + std::to_string(k) + " = " +
                                             std::to_string(p[k]));
    }
    for (std::size_t i = 0; i < sys.shape_count(k); ++i) {
      if (static_cast<std::size_t>(p[k]) > sys.enumeration(k, i).size()) {
        throw Error(Errc::BaseTooLarge, "p_" + std::to_string(k) + " = " + std::to_string(p[k]) +
                                            " exceeds |" + sys.shape(k, i).id + "|");
      }
    }
  }

  TilingSpec with_base = centered;
  for (int k = 1; k <= depth; ++k) with_base.levels[static_cast<std::size_t>(k)].p = p[k];
  if (check_odometric(OrderedTilingSystem(with_base)).odometric) return with_base;

  // Subtile i of S sits at offset o_i along S; with the parent's center at
  // position j, its center must sit at position (j - o_i) mod p_{k-1} of its own order.
  auto forced = [&](int k, std::size_t idx, std::int64_t j) {
    std::vector<std::pair<std::size_t, std::int64_t>> out;
    std::int64_t offset = 0;
    for (const auto& st : sys.subtiles(k, idx)) {
      out.emplace_back(st.shape, floor_mod(j - offset, p[k - 1]));
      offset += static_cast<std::int64_t>(sys.enumeration(k - 1, st.shape).size());
    }
    return out;
  };
  auto variant_id = [&](int k, std::size_t idx, std::int64_t j) {
    const std::string& id = sys.shape(k, idx).id;
    return j == 0 ? id : id + "@" + std::to_string(j);
  };

  std::vector<std::set<std::pair<std::size_t, std::int64_t>>> needed(static_cast<std::size_t>(depth) + 1);
  for (int k = 1; k <= depth; ++k) {
    for (std::size_t i = 0; i < sys.shape_count(k); ++i) {
      if (choice == CenterChoice::Enumerate) {
        for (std::int64_t j = 0; j < p[k]; ++j) needed[k].emplace(i, j);
      } else {
        needed[k].emplace(i, 0);
      }
    }
  }
  for (int k = depth; k >= 2; --k)
    for (const auto& [idx, j] : needed[k])
      for (const auto& f : forced(k, idx, j)) needed[k - 1].insert(f);

  TilingSpec out;
  out.group = centered.group;
  out.levels.push_back(centered.levels[0]);
  for (int k = 1; k <= depth; ++k) {
    LevelSpec level;
    level.p = p[k];
    for (const auto& [idx, j] : needed[k]) {
      std::vector<std::string> ids;
      std::vector<GroupPoint> centers;
      for (const auto& [sub, jj] : forced(k, idx, j)) {
        ids.push_back(k == 1 ? sys.shape(0, sub).id : variant_id(k - 1, sub, jj));
        centers.push_back(sys.enumeration(k - 1, sub).at(static_cast<std::size_t>(jj)));
      }
      level.shapes.push_back(recentered_shape(sys, k, idx, sys.enumeration(k, idx).at(static_cast<std::size_t>(j)),
                                              ids, centers, variant_id(k, idx, j)));
    }
    out.levels.push_back(std::move(level));
  }
  if (!check_odometric(OrderedTilingSystem(out)).odometric) {
    throw std::logic_error("odometrize produced a system violating the congruences");
  }
  return out;
}

}  // namespace asymp
