#include "asymp/order.hpp"

#include <cstdlib>
#include <string>

namespace asymp {

OrderWindow::OrderWindow(GroupKind kind, std::int64_t radius, std::vector<GroupPoint> positions)
    : kind_(kind), radius_(radius), positions_(std::move(positions)) {
  if (radius_ < 0 || positions_.size() != static_cast<std::size_t>(2 * radius_ + 1)) {
    throw Error(Errc::InvalidOrder, "window of radius " + std::to_string(radius_) + " needs " +
                                        std::to_string(2 * radius_ + 1) + " positions");
  }
  if (!is_identity(positions_[static_cast<std::size_t>(radius_)])) {
    throw Error(Errc::InvalidOrder, "window is not anchored at the identity");
  }
  index_.reserve(positions_.size());
  for (std::size_t i = 0; i < positions_.size(); ++i) {
    const auto& g = positions_[i];
    if (g.kind != kind_) throw Error(Errc::MixedGroup, "window element " + to_string(g));
    if (!index_.emplace(g, static_cast<std::int64_t>(i) - radius_).second) {
      throw Error(Errc::InvalidOrder, "element " + to_string(g) + " appears twice");
    }
  }
}

OrderVerdict<GroupPoint> OrderWindow::at_position(std::int64_t k) const {
  if (std::llabs(k) > radius_) return OrderFailure::OutOfWindow;
  return positions_[static_cast<std::size_t>(k + radius_)];
}

OrderVerdict<std::int64_t> OrderWindow::position_of(const GroupPoint& g) const {
  auto it = index_.find(g);
  if (it == index_.end()) return OrderFailure::OutOfWindow;
  return it->second;
}

OrderWindow OrderWindow::restricted(std::int64_t r) const {
  if (r < 0 || r > radius_) throw Error(Errc::OutOfRange, "cannot restrict window to radius " + std::to_string(r));
  auto first = positions_.begin() + (radius_ - r);
  return OrderWindow(kind_, r, std::vector<GroupPoint>(first, first + (2 * r + 1)));
}

Ordering compare(const OrderWindow& w, const GroupPoint& a, const GroupPoint& b) {
  const auto pa = w.position_of(a);
  const auto pb = w.position_of(b);
  if (!pa || !pb) return Ordering::OutOfWindow;
  if (*pa == *pb) return Ordering::Equal;
  return *pa < *pb ? Ordering::Less : Ordering::Greater;
}

OrderVerdict<OrderWindow> act(const GroupPoint& g, const OrderWindow& w) {
  if (g.kind != w.kind()) throw Error(Errc::MixedGroup, "acting element " + to_string(g));
  const auto k = w.position_of(g);
  if (!k) return OrderFailure::OutOfWindow;
  const std::int64_t r = w.radius() - std::llabs(*k);
  if (r < 0) return OrderFailure::EmptyResult;
  const GroupPoint g_inv = inverse(g);
  std::vector<GroupPoint> pos;
  pos.reserve(static_cast<std::size_t>(2 * r + 1));
  for (std::int64_t i = -r; i <= r; ++i) pos.push_back(mul(*w.at_position(i + *k), g_inv));
  return OrderWindow(w.kind(), r, std::move(pos));
}

OrderVerdict<OrderWindow> successor_order(const OrderWindow& w) {
  if (w.radius() < 1) return OrderFailure::EmptyResult;
  return act(*w.at_position(1), w);
}

OrderVerdict<OrderWindow> predecessor_order(const OrderWindow& w) {
  if (w.radius() < 1) return OrderFailure::EmptyResult;
  return act(*w.at_position(-1), w);
}

OrderWindow natural_order(std::int64_t radius) {
  std::vector<GroupPoint> pos;
  pos.reserve(static_cast<std::size_t>(2 * radius + 1));
  for (std::int64_t i = -radius; i <= radius; ++i) pos.push_back(z(i));
  return OrderWindow(GroupKind::IntLine, radius, std::move(pos));
}

OrderWindow enumeration_order(GroupKind kind, std::int64_t radius) {
  std::vector<GroupPoint> pos;
  pos.reserve(static_cast<std::size_t>(2 * radius + 1));
  for (std::int64_t i = -radius; i <= radius; ++i) {
    const std::uint64_t idx = i == 0 ? 0 : (i > 0 ? static_cast<std::uint64_t>(2 * i - 1) : static_cast<std::uint64_t>(-2 * i));
    pos.push_back(element_at(kind, idx));
  }
  return OrderWindow(kind, radius, std::move(pos));
}

}  // namespace asymp
