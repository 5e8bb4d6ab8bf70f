#pragma once

#include <cstdint>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "asymp/error.hpp"
#include "asymp/group.hpp"

namespace asymp {

enum class OrderFailure { OutOfWindow, EmptyResult };

/// Result of an order lookup on a finite window. A missing value is a normal
/// outcome near the window edge; `value()` turns it into an exception for
/// callers that have already established the precondition.
template <class T>
class OrderVerdict {
 public:
  OrderVerdict(T value) : v_(std::move(value)) {}  // NOLINT(google-explicit-constructor)
  OrderVerdict(OrderFailure failure) : v_(failure) {}  // NOLINT(google-explicit-constructor)

  bool defined() const noexcept { return std::holds_alternative<T>(v_); }
  explicit operator bool() const noexcept { return defined(); }
  OrderFailure failure() const { return std::get<OrderFailure>(v_); }

  const T& value() const {
    if (!defined()) {
      throw Error(failure() == OrderFailure::OutOfWindow ? Errc::OutOfWindow : Errc::EmptyResult,
                  "order verdict has no value");
    }
    return std::get<T>(v_);
  }
  const T& operator*() const { return value(); }
  const T* operator->() const { return &value(); }

 private:
  std::variant<T, OrderFailure> v_;
};

/// Positions [-N, N] of an anchored bijection Z -> G, i.e. the finite part of
/// an order of type Z that is actually known.
class OrderWindow {
 public:
  /// `positions[k + radius]` is the element at position k. Throws InvalidOrder
  /// unless the window is anchored and injective.
  OrderWindow(GroupKind kind, std::int64_t radius, std::vector<GroupPoint> positions);

  GroupKind kind() const noexcept { return kind_; }
  std::int64_t radius() const noexcept { return radius_; }
  const std::vector<GroupPoint>& positions() const noexcept { return positions_; }

  OrderVerdict<GroupPoint> at_position(std::int64_t k) const;
  OrderVerdict<std::int64_t> position_of(const GroupPoint& g) const;
  bool contains(const GroupPoint& g) const { return index_.count(g) != 0; }

  /// Same order with the radius cut down to `r` (r <= radius()).
  OrderWindow restricted(std::int64_t r) const;

  friend bool operator==(const OrderWindow& a, const OrderWindow& b) {
    return a.kind_ == b.kind_ && a.radius_ == b.radius_ && a.positions_ == b.positions_;
  }

 private:
  GroupKind kind_;
  std::int64_t radius_;
  std::vector<GroupPoint> positions_;
  std::unordered_map<GroupPoint, std::int64_t, GroupPointHash> index_;
};

enum class Ordering { Less, Equal, Greater, OutOfWindow };

Ordering compare(const OrderWindow& w, const GroupPoint& a, const GroupPoint& b);

/// The window of g(<) where a <' b iff ag < bg. With g at position k the new
/// window has radius N - |k| and i^{g(<)} = (i+k)^< g^{-1}.
OrderVerdict<OrderWindow> act(const GroupPoint& g, const OrderWindow& w);

/// S~(<) = 1^<(<); radius shrinks by one.
OrderVerdict<OrderWindow> successor_order(const OrderWindow& w);

/// Inverse step of successor_order: (-1)^<(<).
OrderVerdict<OrderWindow> predecessor_order(const OrderWindow& w);

/// Natural order on Z restricted to [-N, N].
OrderWindow natural_order(std::int64_t radius);

/// Anchored window visiting the canonical enumeration alternately on the
/// positive and negative side: 0 -> e, 1 -> #1, -1 -> #2, 2 -> #3, ...
OrderWindow enumeration_order(GroupKind kind, std::int64_t radius);

}  // namespace asymp
