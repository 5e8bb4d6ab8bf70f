#include "asymp/group.hpp"

#include <algorithm>
#include <cstdlib>
#include <mutex>
#include <unordered_map>
#include <unordered_set>

#include "asymp/error.hpp"

namespace asymp {

namespace {

void require_same(const GroupPoint& a, const GroupPoint& b) {
  if (a.kind != b.kind) {
    throw Error(Errc::MixedGroup, to_string(a) + " vs " + to_string(b));
  }
}

// Word balls of the Heisenberg group have no closed form; grow them by
// breadth-first search on demand and keep the result for the process lifetime.
class HeisenbergTable {
 public:
  static HeisenbergTable& instance() {
    static HeisenbergTable table;
    return table;
  }

  std::int64_t radius_of(const GroupPoint& g) {
    std::lock_guard lock(mu_);
    return radius_locked(g);
  }

  std::uint64_t index_of(const GroupPoint& g) {
    std::lock_guard lock(mu_);
    radius_locked(g);
    return index_.at(g);
  }

  GroupPoint at(std::uint64_t i) {
    std::lock_guard lock(mu_);
    while (elems_.size() <= i) grow();
    return elems_[i];
  }

  std::vector<GroupPoint> ball(std::int64_t r) {
    std::lock_guard lock(mu_);
    while (built_ < r) grow();
    return {elems_.begin(), elems_.begin() + static_cast<std::ptrdiff_t>(shell_end_[r])};
  }

 private:
  static constexpr std::int64_t kMaxRadius = 40;

  HeisenbergTable() {
    const GroupPoint e = h3(0, 0, 0);
    elems_.push_back(e);
    index_.emplace(e, 0);
    radius_.emplace(e, 0);
    shell_end_.push_back(1);
    frontier_ = {e};
  }

  std::int64_t radius_locked(const GroupPoint& g) {
    for (;;) {
      if (auto it = radius_.find(g); it != radius_.end()) return it->second;
      if (built_ >= kMaxRadius) {
        throw Error(Errc::OutOfRange, "Heisenberg word length exceeds table limit for " + to_string(g));
      }
      grow();
    }
  }

  void grow() {
    static const GroupPoint gens[] = {h3(1, 0, 0), h3(-1, 0, 0), h3(0, 1, 0), h3(0, -1, 0)};
    std::vector<GroupPoint> sphere;
    for (const auto& g : frontier_) {
      for (const auto& s : gens) {
        GroupPoint n = mul(g, s);
        if (radius_.find(n) == radius_.end()) {
          radius_.emplace(n, built_ + 1);
          sphere.push_back(n);
        }
      }
    }
    std::sort(sphere.begin(), sphere.end(),
              [](const GroupPoint& a, const GroupPoint& b) { return a.coords < b.coords; });
    for (const auto& g : sphere) {
      index_.emplace(g, elems_.size());
      elems_.push_back(g);
    }
    ++built_;
    shell_end_.push_back(elems_.size());
    frontier_ = std::move(sphere);
  }

  std::mutex mu_;
  std::vector<GroupPoint> elems_;
  std::unordered_map<GroupPoint, std::uint64_t, GroupPointHash> index_;
  std::unordered_map<GroupPoint, std::int64_t, GroupPointHash> radius_;
  std::vector<std::size_t> shell_end_;
  std::vector<GroupPoint> frontier_;
  std::int64_t built_ = 0;
};

std::uint64_t sq(std::int64_t x) { return static_cast<std::uint64_t>(x) * static_cast<std::uint64_t>(x); }

}  // namespace

std::string_view group_name(GroupKind kind) noexcept {
  switch (kind) {
    case GroupKind::IntLine: return "Z";
    case GroupKind::IntPlane: return "Z2";
    case GroupKind::Heisenberg3: return "H3";
  }
  return "?";
}

GroupKind parse_group(std::string_view name) {
  if (name == "Z") return GroupKind::IntLine;
  if (name == "Z2") return GroupKind::IntPlane;
  if (name == "H3") return GroupKind::Heisenberg3;
  throw Error(Errc::ConfigError, "unknown group '" + std::string(name) + "'");
}

int dimension(GroupKind kind) noexcept {
  switch (kind) {
    case GroupKind::IntLine: return 1;
    case GroupKind::IntPlane: return 2;
    case GroupKind::Heisenberg3: return 3;
  }
  return 0;
}

GroupPoint z(std::int64_t a) { return {GroupKind::IntLine, {a, 0, 0}}; }
GroupPoint z2(std::int64_t a, std::int64_t b) { return {GroupKind::IntPlane, {a, b, 0}}; }
GroupPoint h3(std::int64_t a, std::int64_t b, std::int64_t c) { return {GroupKind::Heisenberg3, {a, b, c}}; }

GroupPoint make_point(GroupKind kind, std::span<const std::int64_t> coords) {
  if (coords.size() != static_cast<std::size_t>(dimension(kind))) {
    throw Error(Errc::ConfigError, "expected " + std::to_string(dimension(kind)) + " coordinates for group " +
                                       std::string(group_name(kind)));
  }
  GroupPoint g{kind, {}};
  std::copy(coords.begin(), coords.end(), g.coords.begin());
  return g;
}

std::string to_string(const GroupPoint& g) {
  std::string s = "(";
  for (int i = 0; i < dimension(g.kind); ++i) {
    if (i) s += ",";
    s += std::to_string(g.coords[i]);
  }
  return s + ")";
}

GroupPoint identity(GroupKind kind) { return {kind, {0, 0, 0}}; }

bool is_identity(const GroupPoint& g) noexcept { return g.coords == std::array<std::int64_t, 3>{0, 0, 0}; }

GroupPoint mul(const GroupPoint& a, const GroupPoint& b) {
  require_same(a, b);
  GroupPoint r{a.kind, {a.coords[0] + b.coords[0], a.coords[1] + b.coords[1], a.coords[2] + b.coords[2]}};
  if (a.kind == GroupKind::Heisenberg3) r.coords[2] += a.coords[0] * b.coords[1];
  return r;
}

GroupPoint inverse(const GroupPoint& g) {
  GroupPoint r{g.kind, {-g.coords[0], -g.coords[1], -g.coords[2]}};
  if (g.kind == GroupKind::Heisenberg3) r.coords[2] = g.coords[0] * g.coords[1] - g.coords[2];
  return r;
}

std::int64_t radius(const GroupPoint& g) {
  switch (g.kind) {
    case GroupKind::IntLine: return std::llabs(g.coords[0]);
    case GroupKind::IntPlane: return std::max(std::llabs(g.coords[0]), std::llabs(g.coords[1]));
    case GroupKind::Heisenberg3: return HeisenbergTable::instance().radius_of(g);
  }
  return 0;
}

std::uint64_t canonical_index(const GroupPoint& g) {
  switch (g.kind) {
    case GroupKind::IntLine: {
      const std::int64_t a = g.coords[0];
      if (a == 0) return 0;
      return a < 0 ? static_cast<std::uint64_t>(-2 * a - 1) : static_cast<std::uint64_t>(2 * a);
    }
    case GroupKind::IntPlane: {
      const std::int64_t a = g.coords[0], b = g.coords[1];
      const std::int64_t r = std::max(std::llabs(a), std::llabs(b));
      if (r == 0) return 0;
      const std::uint64_t base = sq(2 * r - 1);
      const std::int64_t side = 2 * r + 1;
      std::int64_t rank;
      if (a == -r) {
        rank = b + r;
      } else if (a < r) {
        rank = side + 2 * (a + r - 1) + (b == r ? 1 : 0);
      } else {
        rank = side + 2 * (2 * r - 1) + (b + r);
      }
      return base + static_cast<std::uint64_t>(rank);
    }
    case GroupKind::Heisenberg3: return HeisenbergTable::instance().index_of(g);
  }
  return 0;
}

GroupPoint element_at(GroupKind kind, std::uint64_t index) {
  switch (kind) {
    case GroupKind::IntLine: {
      if (index == 0) return z(0);
      const auto half = static_cast<std::int64_t>((index + 1) / 2);
      return index % 2 == 1 ? z(-half) : z(half);
    }
    case GroupKind::IntPlane: {
      if (index == 0) return z2(0, 0);
      std::int64_t r = 1;
      while (sq(2 * r + 1) <= index) ++r;
      auto rank = static_cast<std::int64_t>(index - sq(2 * r - 1));
      const std::int64_t side = 2 * r + 1;
      if (rank < side) return z2(-r, rank - r);
      rank -= side;
      if (rank < 2 * (2 * r - 1)) return z2(-r + 1 + rank / 2, rank % 2 == 0 ? -r : r);
      rank -= 2 * (2 * r - 1);
      return z2(r, rank - r);
    }
    case GroupKind::Heisenberg3: return HeisenbergTable::instance().at(index);
  }
  return identity(kind);
}

std::size_t GroupPointHash::operator()(const GroupPoint& g) const noexcept {
  std::uint64_t h = static_cast<std::uint64_t>(g.kind) * 0x9E3779B97F4A7C15ull;
  for (auto c : g.coords) {
    h ^= static_cast<std::uint64_t>(c) + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

FiniteSubset::FiniteSubset(GroupKind kind, std::vector<GroupPoint> points) : kind_(kind) {
  std::vector<std::pair<std::uint64_t, GroupPoint>> keyed;
  keyed.reserve(points.size());
  for (const auto& p : points) {
    if (p.kind != kind) throw Error(Errc::MixedGroup, "point " + to_string(p) + " in set of another group");
    keyed.emplace_back(canonical_index(p), p);
  }
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  keyed.erase(std::unique(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first == b.first; }),
              keyed.end());
  elems_.reserve(keyed.size());
  keys_.reserve(keyed.size());
  for (auto& [k, p] : keyed) {
    keys_.push_back(k);
    elems_.push_back(p);
  }
}

bool FiniteSubset::contains(const GroupPoint& g) const {
  if (g.kind != kind_) return false;
  const std::uint64_t key = canonical_index(g);
  return std::binary_search(keys_.begin(), keys_.end(), key);
}

bool FiniteSubset::is_subset_of(const FiniteSubset& other) const {
  if (kind_ != other.kind_) return false;
  return std::includes(other.keys_.begin(), other.keys_.end(), keys_.begin(), keys_.end());
}

FiniteSubset ball(GroupKind kind, std::int64_t r) {
  if (r < 0) throw Error(Errc::OutOfRange, "negative ball radius");
  std::vector<GroupPoint> pts;
  switch (kind) {
    case GroupKind::IntLine:
      for (std::int64_t a = -r; a <= r; ++a) pts.push_back(z(a));
      break;
    case GroupKind::IntPlane:
      for (std::int64_t a = -r; a <= r; ++a)
        for (std::int64_t b = -r; b <= r; ++b) pts.push_back(z2(a, b));
      break;
    case GroupKind::Heisenberg3: pts = HeisenbergTable::instance().ball(r); break;
  }
  return FiniteSubset(kind, std::move(pts));
}

FiniteSubset box(GroupKind kind, std::span<const std::int64_t> lo, std::span<const std::int64_t> hi) {
  std::vector<GroupPoint> pts;
  if (kind == GroupKind::IntLine && lo.size() == 1 && hi.size() == 1) {
    for (std::int64_t a = lo[0]; a < hi[0]; ++a) pts.push_back(z(a));
  } else if (kind == GroupKind::IntPlane && lo.size() == 2 && hi.size() == 2) {
    for (std::int64_t a = lo[0]; a < hi[0]; ++a)
      for (std::int64_t b = lo[1]; b < hi[1]; ++b) pts.push_back(z2(a, b));
  } else {
    throw Error(Errc::BadRegion, "box needs Z or Z2 with matching bounds");
  }
  return FiniteSubset(kind, std::move(pts));
}

FiniteSubset product(const FiniteSubset& K, const FiniteSubset& F) {
  if (K.kind() != F.kind()) throw Error(Errc::MixedGroup, "product of sets from different groups");
  std::vector<GroupPoint> pts;
  pts.reserve(K.size() * F.size());
  for (const auto& k : K)
    for (const auto& f : F) pts.push_back(mul(k, f));
  return FiniteSubset(F.kind(), std::move(pts));
}

FiniteSubset translate_right(const FiniteSubset& F, const GroupPoint& h) {
  std::vector<GroupPoint> pts;
  pts.reserve(F.size());
  for (const auto& f : F) pts.push_back(mul(f, h));
  return FiniteSubset(F.kind(), std::move(pts));
}

FiniteSubset set_union(const FiniteSubset& a, const FiniteSubset& b) {
  if (a.kind() != b.kind()) throw Error(Errc::MixedGroup, "union of sets from different groups");
  std::vector<GroupPoint> pts(a.begin(), a.end());
  pts.insert(pts.end(), b.begin(), b.end());
  return FiniteSubset(a.kind(), std::move(pts));
}

std::size_t symmetric_difference_size(const FiniteSubset& a, const FiniteSubset& b) {
  if (a.kind() != b.kind()) throw Error(Errc::MixedGroup, "symmetric difference of sets from different groups");
  std::size_t common = 0;
  for (const auto& g : a)
    if (b.contains(g)) ++common;
  return a.size() + b.size() - 2 * common;
}

InvarianceResult check_invariance(const FiniteSubset& K, const Rational& eps, const FiniteSubset& F) {
  if (F.empty()) throw Error(Errc::EmptySet, "invariance ratio of an empty set");
  const FiniteSubset KF = product(K, F);
  const Rational ratio(static_cast<std::int64_t>(symmetric_difference_size(KF, F)), static_cast<std::int64_t>(F.size()));
  return {ratio, ratio < eps};
}

std::optional<std::size_t> folner_threshold(std::span<const FiniteSubset> seq, const FiniteSubset& K,
                                            const Rational& eps) {
  std::optional<std::size_t> threshold;
  for (std::size_t i = seq.size(); i-- > 0;) {
    if (!check_invariance(K, eps, seq[i]).invariant) break;
    threshold = i + 1;
  }
  return threshold;
}

}  // namespace asymp
