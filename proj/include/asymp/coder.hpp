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
#include "asymp/symbolic.hpp"
#include "asymp/tiling.hpp"

namespace asymp {

/// Positions [lo, hi) of the order window. `complete` means the whole range
/// lies inside [-N, N].
struct PositionRange {
  std::int64_t index = 0;
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  bool complete = false;
};

struct IntervalPartition {
  int level = 0;  ///< tiling level the ranges are aligned to
  std::int64_t p = 0;
  std::int64_t offset = 0;  ///< start of range 0, in (-p, 0]
  std::int64_t radius = 0;
  std::vector<PositionRange> ranges;  ///< every range meeting [-N, N], ascending

  std::int64_t index_of_position(std::int64_t k) const;
  const PositionRange* range(std::int64_t index) const;
};

/// Ranges of length p_k starting at the positions of level-k tile centers.
/// Throws NotOdometric if the system lacks a base or breaks the congruences,
/// AlignmentViolation if a level-k center in the window is off a range start.
IntervalPartition partition_intervals(const OrderWindow& order, const TilingInstance& inst, int level);

/// Injective code of B_n(I): the i-th census block gets the L-bit big-endian
/// word of i, L = p / 2^n.
class CodeTable {
 public:
  CodeTable(int n, std::int64_t p, std::shared_ptr<const Census> census);

  int floors() const noexcept { return n_; }
  int length() const noexcept { return length_; }
  const Census& census() const noexcept { return *census_; }
  std::size_t size() const noexcept { return census_->count(); }

  std::optional<std::uint64_t> code_of(const std::vector<std::uint8_t>& block) const;
  std::vector<std::uint8_t> word(std::uint64_t code) const;

 private:
  int n_;
  int length_;
  std::shared_ptr<const Census> census_;
};

/// Throws DivisibilityViolation unless 2^n | p, CodeOverflow when the census
/// holds more than 2^{p/2^n} blocks.
CodeTable build_code_table(const SampleUniverse& sample, int n, const std::vector<GroupPoint>& interval, std::int64_t p);

enum class Fill { Zeros, Ones, Enumerate };

std::string_view fill_name(Fill f) noexcept;
Fill parse_fill(std::string_view name);

struct StepRecord {
  int step = 0;
  std::int64_t range = 0;  ///< source range index; the code goes to range + 1
  std::string block_hash;
  std::string code_word;
  std::vector<std::int64_t> positions;
};

struct SkipRecord {
  int step = 0;
  std::int64_t range = 0;
  std::string reason;
};

/// Coded row y_x over the positions of the order window.
struct CodedPoint {
  std::int64_t radius = 0;
  std::vector<GroupPoint> cells;  ///< cells[k + radius] sits at position k
  int depth = 0;
  Fill fill = Fill::Zeros;
  std::vector<std::vector<std::uint8_t>> masks;  ///< undefined flags after each step
  std::vector<std::uint8_t> row;                 ///< written bits, 0 where undefined
  std::vector<std::vector<std::uint8_t>> filled;  ///< Y_x restricted to the window
  std::vector<StepRecord> log;
  std::vector<SkipRecord> skipped;

  const std::vector<std::uint8_t>& undefined() const { return masks.back(); }

  /// One-floor point over the window cells carrying filled[variant].
  ArrayPoint as_point(std::size_t variant = 0) const;
};

/// Interval coder over one odometric, straight instance. Step n codes blocks
/// of n floors over level levels[n-1] ranges, with p_n the base entry there.
class Coder {
 public:
  Coder(TilingInstance inst, OrderWindow order, std::vector<int> levels, UniversePtr universe);

  const TilingInstance& instance() const noexcept { return inst_; }
  const OrderWindow& order() const noexcept { return order_; }
  const std::vector<int>& levels() const noexcept { return levels_; }
  const UniversePtr& universe() const noexcept { return universe_; }
  int max_depth() const noexcept { return static_cast<int>(levels_.size()); }
  std::int64_t p(int step) const { return partitions_.at(static_cast<std::size_t>(step - 1)).p; }
  const IntervalPartition& partition(int step) const { return partitions_.at(static_cast<std::size_t>(step - 1)); }

  std::vector<GroupPoint> range_cells(const PositionRange& r) const;

  /// Code table of the domain at the given step (memoized by domain shape).
  const CodeTable& table(int step, const std::vector<GroupPoint>& cells) const;

  /// Builds every table the window needs; surfaces CodeOverflow up front.
  void prepare_tables(int depth) const;

  CodedPoint encode(const ArrayPoint& x, int depth, Fill fill = Fill::Zeros) const;

  /// Same instance, order and levels over another block universe.
  Coder with_universe(UniversePtr universe) const;

 private:
  TilingInstance inst_;
  OrderWindow order_;
  std::vector<int> levels_;
  UniversePtr universe_;
  std::vector<IntervalPartition> partitions_;
  mutable std::mutex mu_;
  mutable std::map<std::pair<int, std::vector<GroupPoint>>, std::unique_ptr<CodeTable>> tables_;
};

struct MaskCheck {
  bool ok = true;
  std::size_t ranges_checked = 0;
  std::vector<std::string> failures;
};

/// After each step n, every range whose predecessor also lies in the window
/// must hold exactly p_n / 2^n undefined cells.
MaskCheck check_mask_exactness(const Coder& coder, const CodedPoint& y);

struct Witness {
  int step = 0;
  std::int64_t range = 0;  ///< I^n_{i0+1}
  std::int64_t position = 0;
  GroupPoint cell;
};

struct SeparationReport {
  int n0 = 0;
  GroupPoint g0;
  std::int64_t position0 = 0;
  std::vector<Witness> witnesses;
  std::vector<int> skipped_steps;  ///< successor range not complete in the window
  std::vector<int> missing_steps;  ///< a witness was expected but not found
  bool ok = false;
};

/// Throws PairEqual when x and x' agree on the coded floors of the window and
/// WindowTooSmall when no step has a complete range pair around the difference.
SeparationReport verify_separation(const Coder& coder, const ArrayPoint& x, const ArrayPoint& x2, const CodedPoint& y,
                                   const CodedPoint& y2);

/// Stage m + 1 codes the stage-m input with its coded row prepended as floor 1.
/// Later stages draw their block universe from their own input.
std::vector<CodedPoint> tower_compose(const Coder& coder, const ArrayPoint& x, const std::vector<int>& depths,
                                      Fill fill = Fill::Zeros);

/// Data floors of x followed by one center-indicator floor per (level, shape)
/// of the instance, over the cells both cover.
ArrayPoint product_point(const ArrayPoint& x, const TilingInstance& inst);

/// Coder over the product of the sample with the tiling. Throws GroupMismatch.
Coder product_pipeline(const SampleUniverse& sample, const TilingInstance& inst, const OrderWindow& order,
                       const std::vector<int>& levels);

}  // namespace asymp
