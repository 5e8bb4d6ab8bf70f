#include "asymp/ordered_tiling.hpp"

#include <algorithm>
#include <unordered_map>

#include "asymp/error.hpp"

namespace asymp {

namespace {

struct CentralEnumeration {
  std::vector<GroupPoint> cells;
  std::size_t anchor = 0;  // index of the identity
};

CentralEnumeration central_enumeration(const TilingInstance& inst, int depth) {
  if (depth < 0 || depth > inst.top_level()) {
    throw Error(Errc::WindowNotDominated, "depth " + std::to_string(depth) + " not represented by the instance");
  }
  const auto t = inst.central_tile(depth);
  if (!t) throw Error(Errc::WindowNotDominated, "no central tile at depth " + std::to_string(depth));
  CentralEnumeration ce{tile_enumeration(inst.system(), *t), 0};
  ce.anchor = static_cast<std::size_t>(
      std::find_if(ce.cells.begin(), ce.cells.end(), [](const GroupPoint& g) { return is_identity(g); }) -
      ce.cells.begin());
  return ce;
}

OrderWindow window_of(const CentralEnumeration& ce, std::int64_t radius, GroupKind kind) {
  const auto first = ce.cells.begin() + static_cast<std::ptrdiff_t>(ce.anchor) - radius;
  return OrderWindow(kind, radius, std::vector<GroupPoint>(first, first + (2 * radius + 1)));
}

}  // namespace

OrderWindow induced_order(const TilingInstance& inst, int depth, const FiniteSubset& window) {
  const auto ce = central_enumeration(inst, depth);
  std::unordered_map<GroupPoint, std::int64_t, GroupPointHash> pos;
  pos.reserve(ce.cells.size());
  for (std::size_t i = 0; i < ce.cells.size(); ++i)
    pos.emplace(ce.cells[i], static_cast<std::int64_t>(i) - static_cast<std::int64_t>(ce.anchor));

  std::int64_t radius = 0;
  for (const auto& g : window) {
    auto it = pos.find(g);
    if (it == pos.end()) {
      throw Error(Errc::WindowNotDominated, "central tile at depth " + std::to_string(depth) + " misses " + to_string(g));
    }
    radius = std::max<std::int64_t>(radius, std::llabs(it->second));
  }
  const auto anchor = static_cast<std::int64_t>(ce.anchor);
  if (anchor - radius < 0 || anchor + radius >= static_cast<std::int64_t>(ce.cells.size())) {
    throw Error(Errc::WindowNotDominated, "positions [-" + std::to_string(radius) + ", " + std::to_string(radius) +
                                              "] leave the central tile at depth " + std::to_string(depth));
  }
  return window_of(ce, radius, inst.kind());
}

OrderWindow induced_order_full(const TilingInstance& inst, int depth) {
  const auto ce = central_enumeration(inst, depth);
  const auto anchor = static_cast<std::int64_t>(ce.anchor);
  const std::int64_t radius = std::min(anchor, static_cast<std::int64_t>(ce.cells.size()) - 1 - anchor);
  return window_of(ce, radius, inst.kind());
}

std::string_view straightness_name(Straightness s) noexcept {
  switch (s) {
    case Straightness::StraightSoFar: return "StraightSoFar";
    case Straightness::PlusNTail: return "PlusNTail";
    case Straightness::MinusNTail: return "MinusNTail";
    case Straightness::NotGeneralPosition: return "NotGeneralPosition";
  }
  return "?";
}

StraightnessStatus straightness_status(const TilingInstance& inst, int depth, const std::optional<FiniteSubset>& window) {
  StraightnessStatus st;
  st.depth = depth;
  if (depth < 0 || depth > inst.top_level()) {
    st.kind = Straightness::NotGeneralPosition;
    return st;
  }
  std::vector<Tile> central;
  for (int k = 0; k <= depth; ++k) {
    auto t = inst.central_tile(k);
    if (!t) {
      st.kind = Straightness::NotGeneralPosition;
      return st;
    }
    central.push_back(*t);
  }
  const FiniteSubset& examined = window ? *window : inst.window();
  const FiniteSubset top_cells = tile_cells(inst.system(), central.back());
  if (!examined.is_subset_of(top_cells)) {
    st.kind = Straightness::NotGeneralPosition;
    return st;
  }

  for (int k = 1; k <= depth; ++k) {
    const auto subs = decompose(inst.system(), central[k]);
    const auto idx = static_cast<std::size_t>(std::find(subs.begin(), subs.end(), central[k - 1]) - subs.begin());
    st.central_index.emplace_back(idx, subs.size());
  }

  // The extremal suffix is non-empty iff the topmost informative level is extremal.
  for (auto it = st.central_index.rbegin(); it != st.central_index.rend(); ++it) {
    const auto [idx, count] = *it;
    if (count < 2) continue;
    if (idx == 0) st.kind = Straightness::PlusNTail;
    else if (idx + 1 == count) st.kind = Straightness::MinusNTail;
    break;
  }
  return st;
}

std::vector<GroupPoint> order_interval_elements(const TilingInstance& inst, const OrderIntervalRef& ref) {
  const auto owner = inst.tile_at(ref.tile.level, ref.tile.center);
  if (!owner || !(*owner == ref.tile)) throw Error(Errc::OutOfRange, "tile is not part of the instance");
  const auto en = tile_enumeration(inst.system(), ref.tile);
  if (ref.i < 1 || ref.i > ref.j || ref.j > en.size()) {
    throw Error(Errc::OutOfRange, "interval [" + std::to_string(ref.i) + ", " + std::to_string(ref.j) +
                                      "] in a tile of size " + std::to_string(en.size()));
  }
  return {en.begin() + static_cast<std::ptrdiff_t>(ref.i - 1), en.begin() + static_cast<std::ptrdiff_t>(ref.j)};
}

IntervalScan interval_invariance_scan(const OrderedTilingSystem& sys, const FiniteSubset& K, const Rational& eps,
                                      const ScanBudget& budget) {
  IntervalScan scan{K, eps, std::nullopt, {}, 0, 0, 0, 0};
  std::vector<std::size_t> worst;  // worst |KF symdiff F| per length, index = length
  std::vector<std::size_t> counts;

  const int top = std::min(budget.max_level, sys.depth());
  for (int k = 1; k <= top; ++k) {
    ++scan.levels_scanned;
    for (std::size_t s = 0; s < sys.shape_count(k); ++s) {
      const auto& en = sys.enumeration(k, s);
      const std::size_t n = en.size();
      if (n > budget.max_shape_size) {
        ++scan.shapes_skipped;
        continue;
      }
      ++scan.shapes_scanned;

      // Local ids for S and KS; nbr[f * |K| + t] is the id of K[t] * S[f].
      std::unordered_map<GroupPoint, std::uint32_t, GroupPointHash> id;
      for (const auto& g : en) id.emplace(g, static_cast<std::uint32_t>(id.size()));
      std::vector<std::uint32_t> nbr;
      nbr.reserve(n * K.size());
      for (const auto& f : en) {
        for (const auto& kk : K) {
          auto [it, _] = id.emplace(mul(kk, f), static_cast<std::uint32_t>(id.size()));
          nbr.push_back(it->second);
        }
      }
      if (worst.size() <= n) {
        worst.resize(n + 1, 0);
        counts.resize(n + 1, 0);
      }
      std::vector<std::uint32_t> cover(id.size());
      std::vector<std::uint8_t> in_f(id.size());
      for (std::size_t a = 0; a < n; ++a) {
        std::fill(cover.begin(), cover.end(), 0);
        std::fill(in_f.begin(), in_f.end(), 0);
        std::size_t kf_size = 0;
        std::size_t inter = 0;
        for (std::size_t b = a; b < n; ++b) {
          in_f[b] = 1;  // ids of S coincide with enumeration indices
          if (cover[b] > 0) ++inter;
          for (std::size_t t = 0; t < K.size(); ++t) {
            const std::uint32_t x = nbr[b * K.size() + t];
            if (cover[x]++ == 0) {
              ++kf_size;
              if (in_f[x]) ++inter;
            }
          }
          const std::size_t len = b - a + 1;
          const std::size_t symdiff = kf_size + len - 2 * inter;
          worst[len] = std::max(worst[len], symdiff);
          ++counts[len];
          ++scan.intervals_examined;
        }
      }
    }
  }

  for (std::size_t len = 1; len < worst.size(); ++len) {
    if (counts[len] == 0) continue;
    scan.buckets.push_back({len, Rational(static_cast<std::int64_t>(worst[len]), static_cast<std::int64_t>(len)),
                            counts[len]});
  }
  for (auto it = scan.buckets.rbegin(); it != scan.buckets.rend(); ++it) {
    if (!(it->worst_ratio < eps)) break;
    scan.l0 = it->length;
  }
  return scan;
}

}  // namespace asymp
