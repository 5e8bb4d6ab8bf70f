#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "asymp/group.hpp"
#include "asymp/order.hpp"
#include "asymp/symbolic.hpp"

namespace asymp {

/// 0 or 2^{-exponent}.
struct Dyadic {
  bool zero = true;
  int exponent = 0;

  static Dyadic nil() { return {}; }
  static Dyadic pow2(int e) { return {false, e}; }

  double value() const;
  std::string to_string() const;

  friend bool operator==(const Dyadic&, const Dyadic&) = default;
  friend bool operator<(const Dyadic& a, const Dyadic& b) {
    if (a.zero || b.zero) return a.zero && !b.zero;
    return a.exponent > b.exponent;
  }
  friend bool operator<=(const Dyadic& a, const Dyadic& b) { return !(b < a); }
  friend bool operator>=(const Dyadic& a, const Dyadic& b) { return !(a < b); }
};

/// 2^{-r} for the first radius r at which x and y disagree on floors
/// [1, min(n, r+1)] x sphere(r); a cell undefined in either point counts as a
/// disagreement. Radii are examined while the sphere stays inside both
/// windows (and up to `cap`); 0 if no disagreement shows up.
Dyadic array_distance(const ArrayPoint& x, const ArrayPoint& y, std::optional<int> cap = std::nullopt);

/// array_distance(shift(x, h), shift(y, h), cap) without building the shifted points.
Dyadic shifted_distance(const ArrayPoint& x, const ArrayPoint& y, const GroupPoint& h,
                        std::optional<int> cap = std::nullopt);

struct DetectorOptions {
  int exam_radius = 0;          ///< cap passed to the distance of shifted points
  int separation_exponent = 0;  ///< c: separation means d_k >= 2^{-c}
};

struct AgreeingTail {
  std::int64_t from = 0;
};
struct ConvergentToHorizon {
  std::int64_t horizon = 0;
  Dyadic final_distance;
};
struct SeparatedBeyond {
  std::int64_t k = 0;  ///< last witness
  Dyadic floor_distance;
  std::vector<std::int64_t> witnesses;  ///< positions in the second half with d_k >= 2^{-c}
};
struct Undecided {
  std::string reason;
};

struct AsymptoticVerdict {
  std::variant<AgreeingTail, ConvergentToHorizon, SeparatedBeyond, Undecided> value;
  std::int64_t k0 = 0;
  std::int64_t horizon = 0;
  std::vector<Dyadic> distances;  ///< d_k for k = k0..horizon

  std::string_view kind() const noexcept;
  template <class T>
  bool is() const noexcept {
    return std::holds_alternative<T>(value);
  }
};

/// Finite-horizon reading of lim d(k^<(x), k^<(y)) = 0 over k in [k0, horizon].
/// AgreeingTail(from): d_k = 0 on [from, horizon] and `from` lies in the first
/// half of the range. SeparatedBeyond: some d_k >= 2^{-c} in the second half.
/// ConvergentToHorizon: d_k non-increasing and still positive at the horizon.
/// Throws PairNotDistinct when x and y agree on their common window and
/// OutOfWindow when the range leaves the order window.
AsymptoticVerdict detect(const ArrayPoint& x, const ArrayPoint& y, const OrderWindow& order, std::int64_t k0,
                         std::int64_t horizon, const DetectorOptions& opts = {});

struct OrdersDiffer {
  std::int64_t position = 0;  ///< first position (by |k|) where the windows disagree
};

std::variant<AsymptoticVerdict, OrdersDiffer> phi_asymptotic_check(const ArrayPoint& x, const ArrayPoint& y,
                                                                   const OrderWindow& order_x,
                                                                   const OrderWindow& order_y, std::int64_t k0,
                                                                   std::int64_t horizon,
                                                                   const DetectorOptions& opts = {});

/// y = x except for floor 1 at `flip`, which must sit at an order position
/// below k0. Throws OutOfWindow otherwise.
ArrayPoint tail_pair(const ArrayPoint& x, const OrderWindow& order, std::int64_t k0, const GroupPoint& flip);

/// min over g in `shifts` of the distance between shift(x, g) and shift(y, g).
Dyadic distality_floor(const ArrayPoint& x, const ArrayPoint& y, const std::vector<GroupPoint>& shifts,
                       std::optional<int> cap = std::nullopt);

}  // namespace asymp
