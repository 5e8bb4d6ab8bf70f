#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/rational.hpp>

namespace asymp {

using Rational = boost::rational<std::int64_t>;

enum class GroupKind : std::uint8_t { IntLine, IntPlane, Heisenberg3 };

/// Config spelling: "Z", "Z2", "H3".
std::string_view group_name(GroupKind kind) noexcept;
GroupKind parse_group(std::string_view name);
int dimension(GroupKind kind) noexcept;

/// Element of one of the built-in groups. Unused trailing coordinates are zero.
/// Heisenberg points are upper-triangular coordinates (a,b,c) of
/// [[1,a,c],[0,1,b],[0,0,1]].
struct GroupPoint {
  GroupKind kind = GroupKind::IntLine;
  std::array<std::int64_t, 3> coords{};

  friend bool operator==(const GroupPoint&, const GroupPoint&) = default;
  friend auto operator<=>(const GroupPoint&, const GroupPoint&) = default;
};

GroupPoint z(std::int64_t a);
GroupPoint z2(std::int64_t a, std::int64_t b);
GroupPoint h3(std::int64_t a, std::int64_t b, std::int64_t c);
GroupPoint make_point(GroupKind kind, std::span<const std::int64_t> coords);

std::string to_string(const GroupPoint& g);

GroupPoint identity(GroupKind kind);
bool is_identity(const GroupPoint& g) noexcept;

/// Group law; throws Error(MixedGroup) on mismatched kinds.
GroupPoint mul(const GroupPoint& a, const GroupPoint& b);
GroupPoint inverse(const GroupPoint& g);

inline GroupPoint operator*(const GroupPoint& a, const GroupPoint& b) { return mul(a, b); }

/// Radius used by the canonical enumeration: |a| on Z, max-norm on Z2, word
/// length over {(+-1,0,0),(0,+-1,0)} on H3.
std::int64_t radius(const GroupPoint& g);

/// Canonical enumeration: radius ascending, then lexicographic by coordinates.
std::uint64_t canonical_index(const GroupPoint& g);
GroupPoint element_at(GroupKind kind, std::uint64_t index);

struct GroupPointHash {
  std::size_t operator()(const GroupPoint& g) const noexcept;
};

/// Duplicate-free set of points of one group, kept in canonical order.
class FiniteSubset {
 public:
  explicit FiniteSubset(GroupKind kind = GroupKind::IntLine) : kind_(kind) {}
  FiniteSubset(GroupKind kind, std::vector<GroupPoint> points);

  GroupKind kind() const noexcept { return kind_; }
  std::size_t size() const noexcept { return elems_.size(); }
  bool empty() const noexcept { return elems_.empty(); }
  const std::vector<GroupPoint>& elements() const noexcept { return elems_; }
  auto begin() const noexcept { return elems_.begin(); }
  auto end() const noexcept { return elems_.end(); }
  const GroupPoint& operator[](std::size_t i) const { return elems_[i]; }

  bool contains(const GroupPoint& g) const;
  bool is_subset_of(const FiniteSubset& other) const;

  friend bool operator==(const FiniteSubset& a, const FiniteSubset& b) {
    return a.kind_ == b.kind_ && a.elems_ == b.elems_;
  }

 private:
  GroupKind kind_;
  std::vector<GroupPoint> elems_;
  std::vector<std::uint64_t> keys_;
};

/// Z: [-r, r]; Z2: max-norm square; H3: word ball.
FiniteSubset ball(GroupKind kind, std::int64_t r);

/// Integer box [lo, hi) per coordinate (Z and Z2 only).
FiniteSubset box(GroupKind kind, std::span<const std::int64_t> lo, std::span<const std::int64_t> hi);

/// The set KF = {k f}.
FiniteSubset product(const FiniteSubset& K, const FiniteSubset& F);
FiniteSubset translate_right(const FiniteSubset& F, const GroupPoint& h);
FiniteSubset set_union(const FiniteSubset& a, const FiniteSubset& b);
std::size_t symmetric_difference_size(const FiniteSubset& a, const FiniteSubset& b);

struct InvarianceResult {
  Rational ratio;
  bool invariant = false;
};

/// |KF symdiff F| / |F| exactly; invariant iff ratio < eps.
InvarianceResult check_invariance(const FiniteSubset& K, const Rational& eps, const FiniteSubset& F);

/// Smallest 1-based index n such that every set from position n to the end of
/// `seq` is (K, eps)-invariant; nullopt when the last set already fails.
std::optional<std::size_t> folner_threshold(std::span<const FiniteSubset> seq, const FiniteSubset& K,
                                            const Rational& eps);

}  // namespace asymp
