#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace asymp {

/// Failure kinds raised across the library. Normal finite-window verdicts
/// (OutOfWindow from order lookups, NotFound from scans) are returned as
/// values instead; these codes are for contract violations.
enum class Errc {
  MixedGroup,
  EmptySet,
  OutOfWindow,
  EmptyResult,
  InvalidOrder,
  MalformedSpec,
  UnknownShape,
  UncoveredCell,
  BaseTooLarge,
  BaseNotDividing,
  WindowNotDominated,
  OutOfRange,
  RegionTooSmall,
  BadRegion,
  FloorsMismatch,
  PairNotDistinct,
  NotOdometric,
  NotStraight,
  AlignmentViolation,
  CodeOverflow,
  DivisibilityViolation,
  UnknownBlock,
  PairEqual,
  WindowTooSmall,
  GroupMismatch,
  TooManyUndefined,
  ConfigError,
};

std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace asymp
