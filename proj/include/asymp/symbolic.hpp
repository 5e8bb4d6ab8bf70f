#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "asymp/group.hpp"
#include "asymp/order.hpp"
#include "asymp/ordered_tiling.hpp"

namespace asymp {

/// Cell -> local index map of a window. Contiguous Z intervals and Z2
/// rectangles use arithmetic lookup, everything else a hash table.
class CellIndex;

/// Binary array x = (x_{n,g}) on floors 1..n over a finite window, with an
/// optional per-(floor, cell) undefined mask.
class ArrayPoint {
 public:
  ArrayPoint(int floors, FiniteSubset window);

  GroupKind kind() const noexcept { return window_->kind(); }
  int floors() const noexcept { return floors_; }
  const FiniteSubset& window() const noexcept { return *window_; }
  std::size_t size() const noexcept { return window_->size(); }

  std::optional<std::size_t> index_of(const GroupPoint& g) const;
  bool contains(const GroupPoint& g) const { return index_of(g).has_value(); }

  /// Bit at (floor, g); empty outside the window or on undefined cells.
  /// Floors are 1-based.
  std::optional<bool> get(int floor, const GroupPoint& g) const;
  void set(int floor, const GroupPoint& g, bool bit);

  bool bit_at(int floor, std::size_t i) const { return bits_[slot(floor, i)] != 0; }
  bool defined_at(int floor, std::size_t i) const { return undefined_.empty() || undefined_[slot(floor, i)] == 0; }
  void set_at(int floor, std::size_t i, bool bit);
  void set_undefined_at(int floor, std::size_t i);
  bool has_undefined() const;

  /// Floor-major, cells in canonical window order.
  const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }
  const std::vector<std::uint8_t>& undefined_mask() const noexcept { return undefined_; }

  friend bool operator==(const ArrayPoint& a, const ArrayPoint& b);

 private:
  std::size_t slot(int floor, std::size_t i) const {
    return static_cast<std::size_t>(floor - 1) * window_->size() + i;
  }

  int floors_;
  std::shared_ptr<const FiniteSubset> window_;
  std::shared_ptr<const CellIndex> index_;
  std::vector<std::uint8_t> bits_;
  std::vector<std::uint8_t> undefined_;  // empty when everything is defined
};

/// (h x)_{n,g} = x_{n,gh}; the window becomes window(x) h^{-1}.
ArrayPoint shift(const ArrayPoint& x, const GroupPoint& h);

/// Same bits and masks on every cell both windows share (floors must match).
bool agree_on_common(const ArrayPoint& x, const ArrayPoint& y);

/// x restricted to a sub-window; throws OutOfWindow if a cell is missing.
ArrayPoint restrict_to(const ArrayPoint& x, const FiniteSubset& window);

/// Floors of `upper` followed by floors of `lower`, over the common window.
ArrayPoint stack_floors(const ArrayPoint& upper, const ArrayPoint& lower);

/// Domain of a block modulo right translation: F f0^{-1} with f0 the
/// lexicographically smallest cell, listed lexicographically. Right
/// translation preserves lexicographic order in all built-in groups, so the
/// bit order of a block does not depend on where it was read.
std::vector<GroupPoint> normalized_domain(const std::vector<GroupPoint>& F);

struct Block {
  int floors = 0;
  std::vector<GroupPoint> domain;  ///< normalized
  std::vector<std::uint8_t> bits;  ///< floor-major, cells in domain order

  friend bool operator==(const Block&, const Block&) = default;
};

/// Bits of x on floors [1, n] x F read in normalized-domain order. Empty when a
/// cell is outside the window or undefined.
std::optional<std::vector<std::uint8_t>> read_block(const ArrayPoint& x, int n, const std::vector<GroupPoint>& F);

enum class SampleKind { FullShift, ThueMorse, Z2Xor, ConstantZero };

std::string_view sample_name(SampleKind k) noexcept;
SampleKind parse_sample(std::string_view name);

/// Half-open integer box [lo, hi) per coordinate.
struct Region {
  GroupKind kind = GroupKind::IntLine;
  std::vector<std::int64_t> lo;
  std::vector<std::int64_t> hi;

  FiniteSubset cells() const;
};

struct Census {
  int floors = 0;
  std::vector<GroupPoint> domain;
  std::vector<std::vector<std::uint8_t>> blocks;  ///< distinct, lexicographically sorted
  std::uint64_t translates = 0;                   ///< fully defined placements seen

  std::size_t count() const noexcept { return blocks.size(); }
};

/// Observed points of a subshift. Censuses are memoized so that every
/// consumer (bound checks, code tables) sees the same block universe.
class SampleUniverse {
 public:
  SampleUniverse(std::string description, std::vector<ArrayPoint> points);

  const std::string& description() const noexcept { return description_; }
  const std::vector<ArrayPoint>& points() const noexcept { return points_; }
  GroupKind kind() const { return points_.front().kind(); }
  int floors() const { return points_.front().floors(); }

  /// B_n(F) over every translate of F that fits a point's defined cells.
  /// Throws RegionTooSmall when no translate fits.
  std::shared_ptr<const Census> census(int n, const std::vector<GroupPoint>& F) const;

 private:
  std::string description_;
  std::vector<ArrayPoint> points_;
  mutable std::mutex mu_;
  mutable std::map<std::pair<int, std::vector<GroupPoint>>, std::shared_ptr<const Census>> cache_;
};

using UniversePtr = std::shared_ptr<const SampleUniverse>;

struct SampleParams {
  SampleKind kind = SampleKind::ThueMorse;
  std::uint64_t seed = 0;
  Region region;
  int floors = 1;
  /// FullShift: order of the planted de Bruijn prefix (0 = floor(16 / floors)).
  int complete_order = 0;
};

/// Thue-Morse bit t(n), two-sided by t(-n-1) = t(n).
bool thue_morse(std::int64_t n) noexcept;

/// Deterministic sample point over the region. Floor f of ThueMorse and
/// Z2Xor carries the base sequence shifted by f - 1. Throws BadRegion.
ArrayPoint generate_point(const SampleParams& params);
UniversePtr generate_sample(const SampleParams& params);

struct BoundEntry {
  std::size_t length = 0;
  std::int64_t p = 0;
  std::size_t count = 0;
  int exponent = 0;  ///< floor(p / 2^n)
  bool pass = false;         ///< count <= 2^exponent
  bool strict_pass = false;  ///< count < 2^{p / 2^n}
};

struct BoundReport {
  int n = 0;
  std::vector<BoundEntry> entries;
  bool all_pass = true;
};

struct BoundInterval {
  std::vector<GroupPoint> cells;
  std::int64_t p = 0;
};

BoundReport entropy_bound_check(const SampleUniverse& sample, int n, const std::vector<BoundInterval>& intervals);

/// Same check with intervals given as order intervals of tiles.
BoundReport entropy_bound_check(const SampleUniverse& sample, int n, const TilingInstance& inst,
                                const std::vector<std::pair<OrderIntervalRef, std::int64_t>>& intervals);

/// k^<(x) = shift(x, k^<). Throws OutOfWindow when |k| exceeds the radius.
ArrayPoint successor_jump(const ArrayPoint& x, const OrderWindow& order, std::int64_t k);

/// |k| single steps x -> 1^<(x), re-deriving the order with successor_order
/// (or predecessor_order for k < 0) after every step.
ArrayPoint successor_path(const ArrayPoint& x, const OrderWindow& order, std::int64_t k);

}  // namespace asymp
