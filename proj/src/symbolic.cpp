#include "asymp/symbolic.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>
#include <unordered_map>
#include <unordered_set>

#include "asymp/error.hpp"

namespace asymp {

class CellIndex {
 public:
  explicit CellIndex(const FiniteSubset& w) {
    if (w.empty()) return;
    if (w.kind() == GroupKind::IntLine || w.kind() == GroupKind::IntPlane) {
      std::int64_t lo[2] = {std::numeric_limits<std::int64_t>::max(), std::numeric_limits<std::int64_t>::max()};
      std::int64_t hi[2] = {std::numeric_limits<std::int64_t>::min(), std::numeric_limits<std::int64_t>::min()};
      for (const auto& g : w) {
        for (int d = 0; d < 2; ++d) {
          lo[d] = std::min(lo[d], g.coords[d]);
          hi[d] = std::max(hi[d], g.coords[d]);
        }
      }
      const std::int64_t w0 = hi[0] - lo[0] + 1;
      const std::int64_t w1 = hi[1] - lo[1] + 1;
      if (static_cast<std::uint64_t>(w0) * static_cast<std::uint64_t>(w1) == w.size()) {
        box_ = true;
        lo0_ = lo[0];
        lo1_ = lo[1];
        w0_ = w0;
        w1_ = w1;
        table_.resize(w.size());
        for (std::size_t i = 0; i < w.size(); ++i) {
          table_[static_cast<std::size_t>((w[i].coords[0] - lo0_) + w0_ * (w[i].coords[1] - lo1_))] =
              static_cast<std::uint32_t>(i);
        }
        return;
      }
    }
    hash_.reserve(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) hash_.emplace(w[i], i);
  }

  std::optional<std::size_t> find(const GroupPoint& g) const {
    if (box_) {
      const std::int64_t a = g.coords[0] - lo0_;
      const std::int64_t b = g.coords[1] - lo1_;
      if (a < 0 || a >= w0_ || b < 0 || b >= w1_ || g.coords[2] != 0) return std::nullopt;
      return table_[static_cast<std::size_t>(a + w0_ * b)];
    }
    auto it = hash_.find(g);
    if (it == hash_.end()) return std::nullopt;
    return it->second;
  }

 private:
  bool box_ = false;
  std::int64_t lo0_ = 0, lo1_ = 0, w0_ = 0, w1_ = 0;
  std::vector<std::uint32_t> table_;
  std::unordered_map<GroupPoint, std::size_t, GroupPointHash> hash_;
};

// ---------------------------------------------------------------------------
// ArrayPoint
// ---------------------------------------------------------------------------

ArrayPoint::ArrayPoint(int floors, FiniteSubset window)
    : floors_(floors), window_(std::make_shared<const FiniteSubset>(std::move(window))) {
  if (floors_ < 1) throw Error(Errc::FloorsMismatch, "an array point needs at least one floor");
  index_ = std::make_shared<const CellIndex>(*window_);
  bits_.assign(static_cast<std::size_t>(floors_) * window_->size(), 0);
}

std::optional<std::size_t> ArrayPoint::index_of(const GroupPoint& g) const {
  if (g.kind != kind()) return std::nullopt;
  return index_->find(g);
}

std::optional<bool> ArrayPoint::get(int floor, const GroupPoint& g) const {
  if (floor < 1 || floor > floors_) throw Error(Errc::FloorsMismatch, "floor " + std::to_string(floor));
  const auto i = index_of(g);
  if (!i || !defined_at(floor, *i)) return std::nullopt;
  return bit_at(floor, *i);
}

void ArrayPoint::set(int floor, const GroupPoint& g, bool bit) {
  if (floor < 1 || floor > floors_) throw Error(Errc::FloorsMismatch, "floor " + std::to_string(floor));
  const auto i = index_of(g);
  if (!i) throw Error(Errc::OutOfWindow, "cell " + to_string(g) + " outside the point's window");
  set_at(floor, *i, bit);
}

void ArrayPoint::set_at(int floor, std::size_t i, bool bit) {
  bits_[slot(floor, i)] = bit ? 1 : 0;
  if (!undefined_.empty()) undefined_[slot(floor, i)] = 0;
}

void ArrayPoint::set_undefined_at(int floor, std::size_t i) {
  if (undefined_.empty()) undefined_.assign(bits_.size(), 0);
  undefined_[slot(floor, i)] = 1;
  bits_[slot(floor, i)] = 0;
}

bool ArrayPoint::has_undefined() const {
  return std::any_of(undefined_.begin(), undefined_.end(), [](std::uint8_t u) { return u != 0; });
}

bool operator==(const ArrayPoint& a, const ArrayPoint& b) {
  if (a.floors_ != b.floors_ || !(*a.window_ == *b.window_) || a.bits_ != b.bits_) return false;
  if (a.undefined_.empty() || b.undefined_.empty()) return !a.has_undefined() && !b.has_undefined();
  return a.undefined_ == b.undefined_;
}

ArrayPoint shift(const ArrayPoint& x, const GroupPoint& h) {
  ArrayPoint out(x.floors(), translate_right(x.window(), inverse(h)));
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::size_t j = *x.index_of(mul(out.window()[i], h));
    for (int f = 1; f <= x.floors(); ++f) {
      if (x.defined_at(f, j)) out.set_at(f, i, x.bit_at(f, j));
      else out.set_undefined_at(f, i);
    }
  }
  return out;
}

bool agree_on_common(const ArrayPoint& x, const ArrayPoint& y) {
  if (x.floors() != y.floors()) throw Error(Errc::FloorsMismatch, "points with different floor counts");
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto j = y.index_of(x.window()[i]);
    if (!j) continue;
    for (int f = 1; f <= x.floors(); ++f) {
      const bool dx = x.defined_at(f, i);
      if (dx != y.defined_at(f, *j)) return false;
      if (dx && x.bit_at(f, i) != y.bit_at(f, *j)) return false;
    }
  }
  return true;
}

ArrayPoint restrict_to(const ArrayPoint& x, const FiniteSubset& window) {
  ArrayPoint out(x.floors(), window);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto j = x.index_of(window[i]);
    if (!j) throw Error(Errc::OutOfWindow, "cell " + to_string(window[i]) + " outside the point's window");
    for (int f = 1; f <= x.floors(); ++f) {
      if (x.defined_at(f, *j)) out.set_at(f, i, x.bit_at(f, *j));
      else out.set_undefined_at(f, i);
    }
  }
  return out;
}

ArrayPoint stack_floors(const ArrayPoint& upper, const ArrayPoint& lower) {
  if (upper.kind() != lower.kind()) throw Error(Errc::GroupMismatch, "stacking points of different groups");
  std::vector<GroupPoint> common;
  for (const auto& g : upper.window())
    if (lower.contains(g)) common.push_back(g);
  ArrayPoint out(upper.floors() + lower.floors(), FiniteSubset(upper.kind(), std::move(common)));
  for (std::size_t i = 0; i < out.size(); ++i) {
    const GroupPoint& g = out.window()[i];
    const std::size_t a = *upper.index_of(g);
    const std::size_t b = *lower.index_of(g);
    for (int f = 1; f <= upper.floors(); ++f) {
      if (upper.defined_at(f, a)) out.set_at(f, i, upper.bit_at(f, a));
      else out.set_undefined_at(f, i);
    }
    for (int f = 1; f <= lower.floors(); ++f) {
      const int to = upper.floors() + f;
      if (lower.defined_at(f, b)) out.set_at(to, i, lower.bit_at(f, b));
      else out.set_undefined_at(to, i);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Blocks and censuses
// ---------------------------------------------------------------------------

std::vector<GroupPoint> normalized_domain(const std::vector<GroupPoint>& F) {
  if (F.empty()) throw Error(Errc::EmptySet, "block domain is empty");
  std::vector<GroupPoint> d = F;
  std::sort(d.begin(), d.end());
  d.erase(std::unique(d.begin(), d.end()), d.end());
  const GroupPoint f0_inv = inverse(d.front());
  for (auto& g : d) g = mul(g, f0_inv);
  return d;
}

std::optional<std::vector<std::uint8_t>> read_block(const ArrayPoint& x, int n, const std::vector<GroupPoint>& F) {
  if (n > x.floors()) throw Error(Errc::FloorsMismatch, "block needs " + std::to_string(n) + " floors");
  std::vector<GroupPoint> cells = F;
  std::sort(cells.begin(), cells.end());
  std::vector<std::size_t> idx;
  idx.reserve(cells.size());
  for (const auto& g : cells) {
    const auto i = x.index_of(g);
    if (!i) return std::nullopt;
    idx.push_back(*i);
  }
  std::vector<std::uint8_t> bits;
  bits.reserve(static_cast<std::size_t>(n) * idx.size());
  for (int f = 1; f <= n; ++f) {
    for (const std::size_t i : idx) {
      if (!x.defined_at(f, i)) return std::nullopt;
      bits.push_back(x.bit_at(f, i) ? 1 : 0);
    }
  }
  return bits;
}

SampleUniverse::SampleUniverse(std::string description, std::vector<ArrayPoint> points)
    : description_(std::move(description)), points_(std::move(points)) {
  if (points_.empty()) throw Error(Errc::BadRegion, "sample universe without points");
  for (const auto& p : points_) {
    if (p.kind() != points_.front().kind()) throw Error(Errc::GroupMismatch, "sample points of different groups");
    if (p.floors() != points_.front().floors()) throw Error(Errc::FloorsMismatch, "sample points of different floors");
  }
}

std::shared_ptr<const Census> SampleUniverse::census(int n, const std::vector<GroupPoint>& F) const {
  auto key = std::make_pair(n, normalized_domain(F));
  {
    std::lock_guard lock(mu_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  const std::vector<GroupPoint>& D = key.second;
  if (n < 1 || n > floors()) throw Error(Errc::FloorsMismatch, "census over " + std::to_string(n) + " floors");
  auto c = std::make_shared<Census>();
  c->floors = n;
  c->domain = D;
  std::unordered_set<std::string> seen;
  std::vector<std::size_t> idx(D.size());
  std::string bits(static_cast<std::size_t>(n) * D.size(), '\0');
  for (const auto& x : points_) {
    for (const auto& w : x.window()) {
      bool fits = true;
      for (std::size_t j = 0; j < D.size() && fits; ++j) {
        const auto i = x.index_of(mul(D[j], w));
        if (!i) fits = false;
        else idx[j] = *i;
      }
      for (int f = 1; f <= n && fits; ++f) {
        for (std::size_t j = 0; j < D.size(); ++j) {
          if (!x.defined_at(f, idx[j])) {
            fits = false;
            break;
          }
          bits[static_cast<std::size_t>(f - 1) * D.size() + j] = x.bit_at(f, idx[j]) ? 1 : 0;
        }
      }
      if (!fits) continue;
      ++c->translates;
      seen.insert(bits);
    }
  }
  if (c->translates == 0) {
    throw Error(Errc::RegionTooSmall, "no translate of a " + std::to_string(D.size()) + "-cell domain fits the sample");
  }
  c->blocks.reserve(seen.size());
  for (const auto& s : seen) c->blocks.emplace_back(s.begin(), s.end());
  std::sort(c->blocks.begin(), c->blocks.end());

  std::lock_guard lock(mu_);
  return cache_.emplace(std::move(key), std::move(c)).first->second;
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

std::string_view sample_name(SampleKind k) noexcept {
  switch (k) {
    case SampleKind::FullShift: return "FullShift";
    case SampleKind::ThueMorse: return "ThueMorse";
    case SampleKind::Z2Xor: return "Z2Xor";
    case SampleKind::ConstantZero: return "ConstantZero";
  }
  return "?";
}

SampleKind parse_sample(std::string_view name) {
  for (auto k : {SampleKind::FullShift, SampleKind::ThueMorse, SampleKind::Z2Xor, SampleKind::ConstantZero})
    if (sample_name(k) == name) return k;
  throw Error(Errc::ConfigError, "unknown generator '" + std::string(name) + "'");
}

FiniteSubset Region::cells() const {
  const int dim = dimension(kind);
  if (kind == GroupKind::Heisenberg3) throw Error(Errc::BadRegion, "sample regions exist only for Z and Z2");
  if (static_cast<int>(lo.size()) != dim || static_cast<int>(hi.size()) != dim) {
    throw Error(Errc::BadRegion, "region needs " + std::to_string(dim) + " coordinates per corner");
  }
  for (int d = 0; d < dim; ++d)
    if (hi[d] <= lo[d]) throw Error(Errc::BadRegion, "empty region");
  return box(kind, lo, hi);
}

bool thue_morse(std::int64_t n) noexcept {
  if (n < 0) n = -n - 1;
  return (std::popcount(static_cast<std::uint64_t>(n)) & 1) != 0;
}

namespace {

// Lyndon-word construction of the de Bruijn sequence B(k, n).
void de_bruijn(int k, int n, int t, int p, std::vector<int>& a, std::vector<int>& out) {
  if (t > n) {
    if (n % p == 0) out.insert(out.end(), a.begin() + 1, a.begin() + p + 1);
    return;
  }
  a[t] = a[t - p];
  de_bruijn(k, n, t + 1, p, a, out);
  for (int j = a[t - p] + 1; j < k; ++j) {
    a[t] = j;
    de_bruijn(k, n, t + 1, t, a, out);
  }
}

}  // namespace

ArrayPoint generate_point(const SampleParams& params) {
  FiniteSubset cells = params.region.cells();
  const GroupKind kind = params.region.kind;
  ArrayPoint x(params.floors, cells);
  switch (params.kind) {
    case SampleKind::ConstantZero:
      break;
    case SampleKind::ThueMorse:
      if (kind != GroupKind::IntLine) throw Error(Errc::BadRegion, "ThueMorse samples live on Z");
      for (std::size_t i = 0; i < x.size(); ++i)
        for (int f = 1; f <= x.floors(); ++f) x.set_at(f, i, thue_morse(cells[i].coords[0] + f - 1));
      break;
    case SampleKind::Z2Xor:
      if (kind != GroupKind::IntPlane) throw Error(Errc::BadRegion, "Z2Xor samples live on Z2");
      for (std::size_t i = 0; i < x.size(); ++i) {
        for (int f = 1; f <= x.floors(); ++f)
          x.set_at(f, i, thue_morse(cells[i].coords[0] + f - 1) != thue_morse(cells[i].coords[1]));
      }
      break;
    case SampleKind::FullShift: {
      // Symbols over the alphabet 2^floors laid along the region row by row:
      // a de Bruijn prefix (every word of the planted order occurs) and then
      // seeded random symbols.
      if (params.floors > 16) throw Error(Errc::BadRegion, "FullShift supports at most 16 floors");
      const int alphabet = 1 << params.floors;
      const int order = params.complete_order > 0 ? params.complete_order : std::max(1, 16 / params.floors);
      std::vector<int> seq;
      std::vector<int> a(static_cast<std::size_t>(order) + 1, 0);
      de_bruijn(alphabet, order, 1, 1, a, seq);
      const std::size_t cyc = seq.size();
      for (int i = 0; i + 1 < order; ++i) seq.push_back(seq[static_cast<std::size_t>(i) % cyc]);

      std::vector<std::size_t> linear(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) linear[i] = i;
      std::sort(linear.begin(), linear.end(), [&](std::size_t l, std::size_t r) {
        const auto& g = cells[l].coords;
        const auto& h = cells[r].coords;
        return std::tie(g[1], g[0]) < std::tie(h[1], h[0]);
      });
      std::mt19937_64 rng(params.seed);
      std::uniform_int_distribution<int> sym(0, alphabet - 1);
      for (std::size_t t = 0; t < linear.size(); ++t) {
        const int s = t < seq.size() ? seq[t] : sym(rng);
        for (int f = 1; f <= x.floors(); ++f) x.set_at(f, linear[t], ((s >> (f - 1)) & 1) != 0);
      }
      break;
    }
  }
  return x;
}

UniversePtr generate_sample(const SampleParams& params) {
  std::string desc = std::string(sample_name(params.kind)) + " seed=" + std::to_string(params.seed) +
                     " floors=" + std::to_string(params.floors);
  return std::make_shared<const SampleUniverse>(std::move(desc), std::vector<ArrayPoint>{generate_point(params)});
}

// ---------------------------------------------------------------------------
// Entropy bound
// ---------------------------------------------------------------------------

BoundReport entropy_bound_check(const SampleUniverse& sample, int n, const std::vector<BoundInterval>& intervals) {
  if (n < 1 || n > 62) throw Error(Errc::OutOfRange, "floor count " + std::to_string(n));
  BoundReport report;
  report.n = n;
  const std::int64_t denom = std::int64_t{1} << n;
  for (const auto& iv : intervals) {
    BoundEntry e;
    e.length = iv.cells.size();
    e.p = iv.p;
    e.count = sample.census(n, iv.cells)->count();
    e.exponent = static_cast<int>(iv.p / denom);
    e.pass = e.exponent >= 63 || e.count <= (std::uint64_t{1} << e.exponent);
    if (iv.p % denom == 0) {
      e.strict_pass = e.exponent >= 63 || e.count < (std::uint64_t{1} << e.exponent);
    } else {
      const long double cap = std::floor(std::exp2(static_cast<long double>(iv.p) / static_cast<long double>(denom)));
      e.strict_pass = static_cast<long double>(e.count) <= cap;
    }
    report.all_pass = report.all_pass && e.pass;
    report.entries.push_back(e);
  }
  return report;
}

BoundReport entropy_bound_check(const SampleUniverse& sample, int n, const TilingInstance& inst,
                                const std::vector<std::pair<OrderIntervalRef, std::int64_t>>& intervals) {
  std::vector<BoundInterval> resolved;
  for (const auto& [ref, p] : intervals) resolved.push_back({order_interval_elements(inst, ref), p});
  return entropy_bound_check(sample, n, resolved);
}

// ---------------------------------------------------------------------------
// Successor orbits
// ---------------------------------------------------------------------------

ArrayPoint successor_jump(const ArrayPoint& x, const OrderWindow& order, std::int64_t k) {
  return shift(x, order.at_position(k).value());
}

ArrayPoint successor_path(const ArrayPoint& x, const OrderWindow& order, std::int64_t k) {
  if (std::llabs(k) > order.radius()) {
    throw Error(Errc::OutOfWindow, "path of length " + std::to_string(k) + " beyond radius " +
                                       std::to_string(order.radius()));
  }
  ArrayPoint y = x;
  OrderWindow w = order;
  const std::int64_t step = k >= 0 ? 1 : -1;
  for (std::int64_t i = 0; i != k; i += step) {
    y = shift(y, w.at_position(step).value());
    w = (step > 0 ? successor_order(w) : predecessor_order(w)).value();
  }
  return y;
}

}  // namespace asymp
