#include "asymp/asymptotic.hpp"

#include <algorithm>
#include <cmath>

#include "asymp/error.hpp"

namespace asymp {

double Dyadic::value() const { return zero ? 0.0 : std::ldexp(1.0, -exponent); }

std::string Dyadic::to_string() const { return zero ? "0" : "2^-" + std::to_string(exponent); }

Dyadic shifted_distance(const ArrayPoint& x, const ArrayPoint& y, const GroupPoint& h, std::optional<int> cap) {
  if (x.floors() != y.floors()) throw Error(Errc::FloorsMismatch, "points with different floor counts");
  if (x.kind() != y.kind() || h.kind != x.kind()) throw Error(Errc::GroupMismatch, "points of different groups");
  if (!x.contains(h) || !y.contains(h)) throw Error(Errc::OutOfWindow, "windows do not share the anchor cell");
  const int n = x.floors();
  for (std::uint64_t i = 0;; ++i) {
    const GroupPoint g = element_at(x.kind(), i);
    const std::int64_t r = radius(g);
    if (cap && r > *cap) break;
    const GroupPoint cell = mul(g, h);
    const auto ix = x.index_of(cell);
    const auto iy = y.index_of(cell);
    if (!ix || !iy) break;
    const int top = static_cast<int>(std::min<std::int64_t>(n, r + 1));
    for (int f = 1; f <= top; ++f) {
      const bool dx = x.defined_at(f, *ix);
      const bool dy = y.defined_at(f, *iy);
      if (!dx || !dy || x.bit_at(f, *ix) != y.bit_at(f, *iy)) return Dyadic::pow2(static_cast<int>(r));
    }
  }
  return Dyadic::nil();
}

Dyadic array_distance(const ArrayPoint& x, const ArrayPoint& y, std::optional<int> cap) {
  return shifted_distance(x, y, identity(x.kind()), cap);
}

std::string_view AsymptoticVerdict::kind() const noexcept {
  switch (value.index()) {
    case 0: return "AgreeingTail";
    case 1: return "ConvergentToHorizon";
    case 2: return "SeparatedBeyond";
    default: return "Undecided";
  }
}

AsymptoticVerdict detect(const ArrayPoint& x, const ArrayPoint& y, const OrderWindow& order, std::int64_t k0,
                         std::int64_t horizon, const DetectorOptions& opts) {
  if (agree_on_common(x, y)) throw Error(Errc::PairNotDistinct, "points agree on their common window");
  if (horizon < k0) throw Error(Errc::OutOfRange, "horizon before k0");
  if (std::llabs(k0) > order.radius() || std::llabs(horizon) > order.radius()) {
    throw Error(Errc::OutOfWindow, "range [" + std::to_string(k0) + ", " + std::to_string(horizon) +
                                       "] exceeds order radius " + std::to_string(order.radius()));
  }
  AsymptoticVerdict v;
  v.k0 = k0;
  v.horizon = horizon;
  v.distances.reserve(static_cast<std::size_t>(horizon - k0 + 1));
  for (std::int64_t k = k0; k <= horizon; ++k) {
    v.distances.push_back(shifted_distance(x, y, *order.at_position(k), opts.exam_radius));
  }

  const std::int64_t span = horizon - k0;
  const std::int64_t first_half_end = k0 + span / 2;
  const std::int64_t second_half_start = k0 + (span + 1) / 2;
  auto d = [&](std::int64_t k) { return v.distances[static_cast<std::size_t>(k - k0)]; };

  std::int64_t from = horizon + 1;
  while (from > k0 && d(from - 1).zero) --from;
  if (from <= first_half_end) {
    v.value = AgreeingTail{from};
    return v;
  }

  const Dyadic threshold = Dyadic::pow2(opts.separation_exponent);
  SeparatedBeyond sep;
  for (std::int64_t k = second_half_start; k <= horizon; ++k) {
    if (d(k) >= threshold) {
      sep.witnesses.push_back(k);
      if (sep.witnesses.size() == 1 || d(k) < sep.floor_distance) sep.floor_distance = d(k);
      sep.k = k;
    }
  }
  if (!sep.witnesses.empty()) {
    v.value = std::move(sep);
    return v;
  }

  bool non_increasing = true;
  for (std::int64_t k = k0 + 1; k <= horizon && non_increasing; ++k) non_increasing = d(k) <= d(k - 1);
  if (non_increasing && !d(horizon).zero) {
    v.value = ConvergentToHorizon{horizon, d(horizon)};
    return v;
  }
  v.value = Undecided{"distances neither vanish on a tail nor stay separated near the horizon"};
  return v;
}

std::variant<AsymptoticVerdict, OrdersDiffer> phi_asymptotic_check(const ArrayPoint& x, const ArrayPoint& y,
                                                                   const OrderWindow& order_x,
                                                                   const OrderWindow& order_y, std::int64_t k0,
                                                                   std::int64_t horizon,
                                                                   const DetectorOptions& opts) {
  if (order_x.kind() != order_y.kind()) throw Error(Errc::GroupMismatch, "orders of different groups");
  const std::int64_t r = std::min(order_x.radius(), order_y.radius());
  for (std::int64_t a = 1; a <= r; ++a) {
    for (std::int64_t k : {a, -a}) {
      if (*order_x.at_position(k) != *order_y.at_position(k)) return OrdersDiffer{k};
    }
  }
  return detect(x, y, order_x.radius() <= order_y.radius() ? order_x : order_y, k0, horizon, opts);
}

ArrayPoint tail_pair(const ArrayPoint& x, const OrderWindow& order, std::int64_t k0, const GroupPoint& flip) {
  const auto pos = order.position_of(flip);
  if (!pos) throw Error(Errc::OutOfWindow, "flip cell " + to_string(flip) + " outside the order window");
  if (*pos >= k0) {
    throw Error(Errc::OutOfWindow, "flip cell sits at position " + std::to_string(*pos) + ", not below k0 = " +
                                       std::to_string(k0));
  }
  const auto i = x.index_of(flip);
  if (!i) throw Error(Errc::OutOfWindow, "flip cell " + to_string(flip) + " outside the point's window");
  ArrayPoint y = x;
  y.set_at(1, *i, !(x.defined_at(1, *i) && x.bit_at(1, *i)));
  return y;
}

Dyadic distality_floor(const ArrayPoint& x, const ArrayPoint& y, const std::vector<GroupPoint>& shifts,
                       std::optional<int> cap) {
  if (shifts.empty()) throw Error(Errc::EmptySet, "no shifts supplied");
  Dyadic best = shifted_distance(x, y, shifts.front(), cap);
  for (std::size_t i = 1; i < shifts.size(); ++i) best = std::min(best, shifted_distance(x, y, shifts[i], cap));
  return best;
}

}  // namespace asymp
