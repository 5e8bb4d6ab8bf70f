#include "asymp/coder.hpp"

#include <algorithm>

#include "asymp/digest.hpp"
#include "asymp/error.hpp"

namespace asymp {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t floor_mod(std::int64_t a, std::int64_t m) { return a - floor_div(a, m) * m; }

std::string bits_string(const std::vector<std::uint8_t>& bits) {
  std::string s;
  s.reserve(bits.size());
  for (auto b : bits) s.push_back(b ? '1' : '0');
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// Partitions
// ---------------------------------------------------------------------------

std::int64_t IntervalPartition::index_of_position(std::int64_t k) const { return floor_div(k - offset, p); }

const PositionRange* IntervalPartition::range(std::int64_t index) const {
  if (ranges.empty()) return nullptr;
  const std::int64_t i = index - ranges.front().index;
  if (i < 0 || i >= static_cast<std::int64_t>(ranges.size())) return nullptr;
  return &ranges[static_cast<std::size_t>(i)];
}

IntervalPartition partition_intervals(const OrderWindow& order, const TilingInstance& inst, int level) {
  const OrderedTilingSystem& sys = inst.system();
  if (level < 1 || level > inst.top_level()) {
    throw Error(Errc::OutOfRange, "partition level " + std::to_string(level) + " not represented");
  }
  for (int k = 1; k <= sys.depth(); ++k) {
    if (!sys.base(k)) throw Error(Errc::NotOdometric, "no base entry at level " + std::to_string(k));
  }
  const OdometricReport odo = check_odometric(sys);
  if (!odo.odometric) {
    const auto& v = odo.violations.front();
    throw Error(Errc::NotOdometric, "congruence fails at level " + std::to_string(v.level) + " shape " + v.shape);
  }

  IntervalPartition part;
  part.level = level;
  part.p = *sys.base(level);
  part.radius = order.radius();

  const auto central = inst.central_tile(level);
  if (!central) throw Error(Errc::WindowNotDominated, "no central tile at level " + std::to_string(level));
  const auto en = tile_enumeration(sys, *central);
  const auto at = [&](const GroupPoint& g) {
    return static_cast<std::int64_t>(std::find(en.begin(), en.end(), g) - en.begin());
  };
  const std::int64_t center_pos = at(central->center) - at(identity(sys.kind()));
  part.offset = floor_mod(center_pos, part.p);
  if (part.offset > 0) part.offset -= part.p;

  for (const auto& t : inst.tiles(level)) {
    const auto pos = order.position_of(t.center);
    if (pos && floor_mod(*pos - part.offset, part.p) != 0) {
      throw Error(Errc::AlignmentViolation, "level-" + std::to_string(level) + " center " + to_string(t.center) +
                                                " at position " + std::to_string(*pos) + " is not a range start");
    }
  }

  const std::int64_t N = order.radius();
  for (std::int64_t i = part.index_of_position(-N); i <= part.index_of_position(N); ++i) {
    const std::int64_t lo = part.offset + i * part.p;
    const std::int64_t hi = lo + part.p;
    part.ranges.push_back({i, lo, hi, lo >= -N && hi - 1 <= N});
  }
  return part;
}

// ---------------------------------------------------------------------------
// Code tables
// ---------------------------------------------------------------------------

CodeTable::CodeTable(int n, std::int64_t p, std::shared_ptr<const Census> census)
    : n_(n), length_(0), census_(std::move(census)) {
  if (n < 1 || n > 62 || p % (std::int64_t{1} << n) != 0) {
    throw Error(Errc::DivisibilityViolation, "2^" + std::to_string(n) + " does not divide p = " + std::to_string(p));
  }
  length_ = static_cast<int>(p >> n);
  if (length_ < 64 && census_->count() > (std::uint64_t{1} << length_)) {
    throw Error(Errc::CodeOverflow, std::to_string(census_->count()) + " blocks with " + std::to_string(n) +
                                        " floors on " + std::to_string(census_->domain.size()) +
                                        " cells exceed 2^" + std::to_string(length_) + " code words");
  }
}

std::optional<std::uint64_t> CodeTable::code_of(const std::vector<std::uint8_t>& block) const {
  const auto& blocks = census_->blocks;
  auto it = std::lower_bound(blocks.begin(), blocks.end(), block);
  if (it == blocks.end() || *it != block) return std::nullopt;
  return static_cast<std::uint64_t>(it - blocks.begin());
}

std::vector<std::uint8_t> CodeTable::word(std::uint64_t code) const {
  std::vector<std::uint8_t> w(static_cast<std::size_t>(length_), 0);
  for (int j = 0; j < length_; ++j) {
    const int shift = length_ - 1 - j;
    if (shift < 64) w[static_cast<std::size_t>(j)] = static_cast<std::uint8_t>((code >> shift) & 1);
  }
  return w;
}

CodeTable build_code_table(const SampleUniverse& sample, int n, const std::vector<GroupPoint>& interval,
                           std::int64_t p) {
  if (n < 1 || n > 62 || p % (std::int64_t{1} << n) != 0) {
    throw Error(Errc::DivisibilityViolation, "2^" + std::to_string(n) + " does not divide p = " + std::to_string(p));
  }
  return CodeTable(n, p, sample.census(n, interval));
}

std::string_view fill_name(Fill f) noexcept {
  switch (f) {
    case Fill::Zeros: return "zeros";
    case Fill::Ones: return "ones";
    case Fill::Enumerate: return "enumerate";
  }
  return "?";
}

Fill parse_fill(std::string_view name) {
  for (auto f : {Fill::Zeros, Fill::Ones, Fill::Enumerate})
    if (fill_name(f) == name) return f;
  throw Error(Errc::ConfigError, "unknown fill policy '" + std::string(name) + "'");
}

ArrayPoint CodedPoint::as_point(std::size_t variant) const {
  ArrayPoint out(1, FiniteSubset(cells.front().kind, cells));
  const auto& bits = filled.at(variant);
  for (std::size_t k = 0; k < cells.size(); ++k) out.set(1, cells[k], bits[k] != 0);
  return out;
}

// ---------------------------------------------------------------------------
// Coder
// ---------------------------------------------------------------------------

Coder::Coder(TilingInstance inst, OrderWindow order, std::vector<int> levels, UniversePtr universe)
    : inst_(std::move(inst)), order_(std::move(order)), levels_(std::move(levels)), universe_(std::move(universe)) {
  if (levels_.empty()) throw Error(Errc::ConfigError, "coder needs at least one level");
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    if (levels_[i] < 1 || levels_[i] > inst_.top_level() || (i > 0 && levels_[i] <= levels_[i - 1])) {
      throw Error(Errc::ConfigError, "coder levels must increase strictly within the instance depth");
    }
  }
  if (!universe_) throw Error(Errc::ConfigError, "coder needs a block universe");
  if (universe_->kind() != inst_.kind()) throw Error(Errc::GroupMismatch, "sample and tiling over different groups");

  FiniteSubset order_cells(order_.kind(), order_.positions());
  const auto st = straightness_status(inst_, inst_.top_level(), order_cells);
  if (st.kind != Straightness::StraightSoFar) {
    throw Error(Errc::NotStraight, "instance is " + std::string(straightness_name(st.kind)) + " at depth " +
                                       std::to_string(st.depth));
  }
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    partitions_.push_back(partition_intervals(order_, inst_, levels_[i]));
    const int n = static_cast<int>(i) + 1;
    if (partitions_.back().p % (std::int64_t{1} << n) != 0) {
      throw Error(Errc::DivisibilityViolation, "2^" + std::to_string(n) + " does not divide p_" +
                                                   std::to_string(n) + " = " + std::to_string(partitions_.back().p));
    }
  }
}

std::vector<GroupPoint> Coder::range_cells(const PositionRange& r) const {
  std::vector<GroupPoint> cells;
  cells.reserve(static_cast<std::size_t>(r.hi - r.lo));
  for (std::int64_t k = r.lo; k < r.hi; ++k) cells.push_back(order_.at_position(k).value());
  return cells;
}

const CodeTable& Coder::table(int step, const std::vector<GroupPoint>& cells) const {
  auto key = std::make_pair(step, normalized_domain(cells));
  std::lock_guard lock(mu_);
  auto it = tables_.find(key);
  if (it == tables_.end()) {
    auto t = std::make_unique<CodeTable>(build_code_table(*universe_, step, cells, p(step)));
    it = tables_.emplace(std::move(key), std::move(t)).first;
  }
  return *it->second;
}

void Coder::prepare_tables(int depth) const {
  for (int s = 1; s <= depth; ++s) {
    const auto& part = partition(s);
    for (const auto& r : part.ranges) {
      const auto* next = part.range(r.index + 1);
      if (r.complete && next && next->complete) table(s, range_cells(r));
    }
  }
}

Coder Coder::with_universe(UniversePtr universe) const { return Coder(inst_, order_, levels_, std::move(universe)); }

CodedPoint Coder::encode(const ArrayPoint& x, int depth, Fill fill) const {
  if (depth < 1 || depth > max_depth()) throw Error(Errc::OutOfRange, "coder depth " + std::to_string(depth));
  if (x.floors() < depth) {
    throw Error(Errc::FloorsMismatch, "step " + std::to_string(depth) + " needs " + std::to_string(depth) + " floors");
  }
  CodedPoint y;
  y.radius = order_.radius();
  y.cells = order_.positions();
  y.depth = depth;
  y.fill = fill;
  const std::int64_t N = y.radius;
  y.row.assign(y.cells.size(), 0);
  std::vector<std::uint8_t> undefined(y.cells.size(), 1);

  for (int s = 1; s <= depth; ++s) {
    const auto& part = partition(s);
    const std::int64_t L = part.p >> s;
    for (const auto& r : part.ranges) {
      const auto* target = part.range(r.index + 1);
      const bool target_ok = target && target->complete;
      if (!r.complete || !target_ok) {
        if (r.complete || target_ok) {
          y.skipped.push_back({s, r.index, r.complete ? "target range leaves the window" : "source range leaves the window"});
        }
        continue;
      }
      const auto cells = range_cells(r);
      const auto block = read_block(x, s, cells);
      if (!block) {
        throw Error(Errc::OutOfWindow, "x is not defined on step-" + std::to_string(s) + " range " +
                                           std::to_string(r.index));
      }
      const CodeTable& tab = table(s, cells);
      const auto code = tab.code_of(*block);
      if (!code) {
        throw Error(Errc::UnknownBlock, "step-" + std::to_string(s) + " block of range " + std::to_string(r.index) +
                                            " is missing from the census");
      }
      const auto word = tab.word(*code);

      StepRecord rec;
      rec.step = s;
      rec.range = r.index;
      std::string payload = "n=" + std::to_string(s) + ";";
      for (const auto& g : tab.census().domain) payload += to_string(g);
      payload += ";" + bits_string(*block);
      rec.block_hash = sha256_hex(payload);
      rec.code_word = bits_string(word);
      for (std::int64_t k = target->lo; k < target->hi && static_cast<std::int64_t>(rec.positions.size()) < L; ++k) {
        if (undefined[static_cast<std::size_t>(k + N)]) rec.positions.push_back(k);
      }
      if (static_cast<std::int64_t>(rec.positions.size()) < L) {
        throw Error(Errc::AlignmentViolation, "range " + std::to_string(target->index) + " has fewer than " +
                                                  std::to_string(L) + " undefined cells at step " + std::to_string(s));
      }
      for (std::size_t j = 0; j < rec.positions.size(); ++j) {
        const auto slot = static_cast<std::size_t>(rec.positions[j] + N);
        y.row[slot] = word[j];
        undefined[slot] = 0;
      }
      y.log.push_back(std::move(rec));
    }
    y.masks.push_back(undefined);
  }

  std::vector<std::size_t> open;
  for (std::size_t i = 0; i < undefined.size(); ++i)
    if (undefined[i]) open.push_back(i);
  if (fill == Fill::Enumerate) {
    if (open.size() > 16) {
      throw Error(Errc::TooManyUndefined, std::to_string(open.size()) + " undefined cells; enumeration limit is 16");
    }
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << open.size()); ++m) {
      auto row = y.row;
      for (std::size_t j = 0; j < open.size(); ++j) row[open[j]] = static_cast<std::uint8_t>((m >> (open.size() - 1 - j)) & 1);
      y.filled.push_back(std::move(row));
    }
  } else {
    auto row = y.row;
    for (auto i : open) row[i] = fill == Fill::Ones ? 1 : 0;
    y.filled.push_back(std::move(row));
  }
  return y;
}

MaskCheck check_mask_exactness(const Coder& coder, const CodedPoint& y) {
  MaskCheck mc;
  for (int s = 1; s <= y.depth; ++s) {
    const auto& part = coder.partition(s);
    const std::int64_t expect = part.p >> s;
    const auto& mask = y.masks[static_cast<std::size_t>(s - 1)];
    for (const auto& r : part.ranges) {
      const auto* prev = part.range(r.index - 1);
      if (!r.complete || !prev || !prev->complete) continue;
      std::int64_t count = 0;
      for (std::int64_t k = r.lo; k < r.hi; ++k) count += mask[static_cast<std::size_t>(k + y.radius)];
      ++mc.ranges_checked;
      if (count != expect) {
        mc.ok = false;
        mc.failures.push_back("step " + std::to_string(s) + " range " + std::to_string(r.index) + ": " +
                              std::to_string(count) + " undefined, expected " + std::to_string(expect));
      }
    }
  }
  return mc;
}

SeparationReport verify_separation(const Coder& coder, const ArrayPoint& x, const ArrayPoint& x2, const CodedPoint& y,
                                   const CodedPoint& y2) {
  if (x.floors() != x2.floors()) throw Error(Errc::FloorsMismatch, "pair with different floor counts");
  const OrderWindow& order = coder.order();
  const std::int64_t N = order.radius();
  const int depth = std::min(y.depth, y2.depth);
  const int top_floor = std::min(depth, x.floors());

  SeparationReport rep;
  bool found = false;
  for (int f = 1; f <= top_floor && !found; ++f) {
    for (std::int64_t k = -N; k <= N && !found; ++k) {
      const GroupPoint g = *order.at_position(k);
      if (x.get(f, g) != x2.get(f, g)) {
        rep.n0 = f;
        rep.g0 = g;
        rep.position0 = k;
        found = true;
      }
    }
  }
  if (!found) throw Error(Errc::PairEqual, "x and x' agree on the coded floors of the window");

  const auto& a = y.filled.front();
  const auto& b = y2.filled.front();
  for (int s = rep.n0; s <= depth; ++s) {
    const auto& part = coder.partition(s);
    const std::int64_t i0 = part.index_of_position(rep.position0);
    const auto* src = part.range(i0);
    const auto* dst = part.range(i0 + 1);
    if (!src || !src->complete || !dst || !dst->complete) {
      rep.skipped_steps.push_back(s);
      continue;
    }
    // Only cells written at step s count, so witnesses of different steps
    // never coincide.
    const auto& before = s > 1 ? y.masks[static_cast<std::size_t>(s - 2)] : std::vector<std::uint8_t>{};
    const auto& after = y.masks[static_cast<std::size_t>(s - 1)];
    bool hit = false;
    for (std::int64_t k = std::max(dst->lo, -N); k < std::min(dst->hi, N + 1); ++k) {
      const auto slot = static_cast<std::size_t>(k + N);
      const bool written = (before.empty() || before[slot]) && !after[slot];
      if (written && a[slot] != b[slot]) {
        rep.witnesses.push_back({s, dst->index, k, *order.at_position(k)});
        hit = true;
        break;
      }
    }
    if (!hit) rep.missing_steps.push_back(s);
  }
  if (rep.witnesses.empty() && rep.missing_steps.empty()) {
    throw Error(Errc::WindowTooSmall, "no step has complete source and successor ranges around " + to_string(rep.g0));
  }
  std::vector<std::int64_t> pos;
  for (const auto& w : rep.witnesses) pos.push_back(w.position);
  std::sort(pos.begin(), pos.end());
  const bool distinct = std::adjacent_find(pos.begin(), pos.end()) == pos.end();
  rep.ok = rep.missing_steps.empty() && distinct;
  return rep;
}

std::vector<CodedPoint> tower_compose(const Coder& coder, const ArrayPoint& x, const std::vector<int>& depths,
                                      Fill fill) {
  if (fill == Fill::Enumerate) throw Error(Errc::ConfigError, "tower stages need a single coded row");
  std::vector<CodedPoint> out;
  ArrayPoint input = restrict_to(x, FiniteSubset(coder.order().kind(), coder.order().positions()));
  std::unique_ptr<Coder> stage;
  for (std::size_t m = 0; m < depths.size(); ++m) {
    const Coder& c = m == 0 ? coder : *stage;
    out.push_back(c.encode(input, depths[m], fill));
    if (m + 1 == depths.size()) break;
    input = stack_floors(out.back().as_point(), input);
    auto u = std::make_shared<const SampleUniverse>("tower stage " + std::to_string(m + 2), std::vector<ArrayPoint>{input});
    stage = std::make_unique<Coder>(coder.instance(), coder.order(), coder.levels(), std::move(u));
  }
  return out;
}

ArrayPoint product_point(const ArrayPoint& x, const TilingInstance& inst) {
  if (x.kind() != inst.kind()) throw Error(Errc::GroupMismatch, "sample and tiling over different groups");
  std::vector<GroupPoint> common;
  for (const auto& g : x.window())
    if (inst.covers(g)) common.push_back(g);
  const OrderedTilingSystem& sys = inst.system();
  int extra = 0;
  for (int k = 1; k <= inst.top_level(); ++k) extra += static_cast<int>(sys.shape_count(k));
  ArrayPoint out(x.floors() + extra, FiniteSubset(x.kind(), std::move(common)));
  for (std::size_t i = 0; i < out.size(); ++i) {
    const GroupPoint& g = out.window()[i];
    const std::size_t j = *x.index_of(g);
    for (int f = 1; f <= x.floors(); ++f) {
      if (x.defined_at(f, j)) out.set_at(f, i, x.bit_at(f, j));
      else out.set_undefined_at(f, i);
    }
    int floor = x.floors();
    for (int k = 1; k <= inst.top_level(); ++k) {
      const auto t = inst.tile_at(k, g);
      for (std::size_t s = 0; s < sys.shape_count(k); ++s) {
        ++floor;
        out.set_at(floor, i, t && t->center == g && t->shape == s);
      }
    }
  }
  return out;
}

Coder product_pipeline(const SampleUniverse& sample, const TilingInstance& inst, const OrderWindow& order,
                       const std::vector<int>& levels) {
  if (sample.kind() != inst.kind()) throw Error(Errc::GroupMismatch, "sample and tiling over different groups");
  std::vector<ArrayPoint> points;
  for (const auto& x : sample.points()) points.push_back(product_point(x, inst));
  auto u = std::make_shared<const SampleUniverse>(sample.description() + " x tiling", std::move(points));
  return Coder(inst, order, levels, std::move(u));
}

}  // namespace asymp
