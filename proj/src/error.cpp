#include "asymp/error.hpp"

namespace asymp {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::MixedGroup: return "MixedGroup";
    case Errc::EmptySet: return "EmptySet";
    case Errc::OutOfWindow: return "OutOfWindow";
    case Errc::EmptyResult: return "EmptyResult";
    case Errc::InvalidOrder: return "InvalidOrder";
    case Errc::MalformedSpec: return "MalformedSpec";
    case Errc::UnknownShape: return "UnknownShape";
    case Errc::UncoveredCell: return "UncoveredCell";
    case Errc::BaseTooLarge: return "BaseTooLarge";
    case Errc::BaseNotDividing: return "BaseNotDividing";
    case Errc::WindowNotDominated: return "WindowNotDominated";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::RegionTooSmall: return "RegionTooSmall";
    case Errc::BadRegion: return "BadRegion";
    case Errc::FloorsMismatch: return "FloorsMismatch";
    case Errc::PairNotDistinct: return "PairNotDistinct";
    case Errc::NotOdometric: return "NotOdometric";
    case Errc::NotStraight: return "NotStraight";
    case Errc::AlignmentViolation: return "AlignmentViolation";
    case Errc::CodeOverflow: return "CodeOverflow";
    case Errc::DivisibilityViolation: return "DivisibilityViolation";
    case Errc::UnknownBlock: return "UnknownBlock";
    case Errc::PairEqual: return "PairEqual";
    case Errc::WindowTooSmall: return "WindowTooSmall";
    case Errc::GroupMismatch: return "GroupMismatch";
    case Errc::TooManyUndefined: return "TooManyUndefined";
    case Errc::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace asymp
