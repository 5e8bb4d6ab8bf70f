#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "asymp/group.hpp"
#include "asymp/order.hpp"
#include "asymp/tiling.hpp"

namespace asymp {

/// Window of the tiling order: the depth-k central tile's induced order,
/// re-indexed so that the identity sits at position 0. The radius is the
/// largest N with every window element at |position| <= N, and positions
/// [-N, N] must stay inside the central tile.
/// Throws WindowNotDominated otherwise.
OrderWindow induced_order(const TilingInstance& inst, int depth, const FiniteSubset& window);

/// Largest symmetric window the depth-k central tile determines.
OrderWindow induced_order_full(const TilingInstance& inst, int depth);

enum class Straightness { StraightSoFar, PlusNTail, MinusNTail, NotGeneralPosition };

std::string_view straightness_name(Straightness s) noexcept;

struct StraightnessStatus {
  Straightness kind = Straightness::StraightSoFar;
  int depth = 0;
  /// Per examined level: index of the central (k-1)-tile among the subtiles
  /// of the central k-tile, and the subtile count.
  std::vector<std::pair<std::size_t, std::size_t>> central_index;
};

/// Status at the examined depth only. The examined window defaults to the
/// instance window. PlusNTail (MinusNTail) means the central tile is first
/// (last) among its parent's subtiles at every informative level of a
/// non-empty suffix ending at `depth`; single-subtile levels carry no
/// information and are skipped.
StraightnessStatus straightness_status(const TilingInstance& inst, int depth,
                                       const std::optional<FiniteSubset>& window = std::nullopt);

/// [i, j] along the induced order of a tile, 1-based and inclusive.
struct OrderIntervalRef {
  Tile tile;
  std::size_t i = 1;
  std::size_t j = 1;
};

/// Elements i^{<_T}, ..., j^{<_T} in induced order. Throws OutOfRange on bad
/// bounds or a tile that is not part of the instance.
std::vector<GroupPoint> order_interval_elements(const TilingInstance& inst, const OrderIntervalRef& ref);

struct ScanBudget {
  int max_level = 6;
  std::size_t max_shape_size = 4096;  ///< larger shapes are skipped
};

struct LengthBucket {
  std::size_t length = 0;
  Rational worst_ratio{0};
  std::size_t count = 0;
};

struct IntervalScan {
  FiniteSubset K;
  Rational eps;
  std::optional<std::size_t> l0;
  std::vector<LengthBucket> buckets;  ///< one per interval length, ascending
  int levels_scanned = 0;
  std::size_t shapes_scanned = 0;
  std::size_t shapes_skipped = 0;
  std::uint64_t intervals_examined = 0;
};

/// Exhaustive (K, eps)-invariance over every order interval of every shape
/// within the budget. l0 is the smallest length from which on every examined
/// interval is invariant; empty when the longest examined length still fails.
IntervalScan interval_invariance_scan(const OrderedTilingSystem& sys, const FiniteSubset& K, const Rational& eps,
                                      const ScanBudget& budget = {});

}  // namespace asymp
