#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "asymp/group.hpp"

namespace asymp {

// ---------------------------------------------------------------------------
// Specification data (what a spec file holds)
// ---------------------------------------------------------------------------

struct DecompositionRow {
  std::string shape_id;             ///< shape of the previous level
  std::vector<GroupPoint> centers;  ///< C_{S'}(S), offsets relative to the shape's center

  friend bool operator==(const DecompositionRow&, const DecompositionRow&) = default;
};

/// A shape with its center at the identity. Level-0 shapes have no
/// decomposition and no subtile order.
struct ShapeSpec {
  std::string id;
  std::vector<GroupPoint> offsets;
  std::vector<GroupPoint> subtile_order;  ///< permutation of the union of all row centers
  std::vector<DecompositionRow> decomposition;

  friend bool operator==(const ShapeSpec&, const ShapeSpec&) = default;
};

struct LevelSpec {
  std::vector<ShapeSpec> shapes;
  std::optional<std::int64_t> p;  ///< base entry p_k, when the system is odometric

  friend bool operator==(const LevelSpec&, const LevelSpec&) = default;
};

struct TilingSpec {
  GroupKind group = GroupKind::IntLine;
  std::vector<LevelSpec> levels;  ///< levels[0] is the trivial singleton level

  int depth() const noexcept { return static_cast<int>(levels.size()) - 1; }

  friend bool operator==(const TilingSpec&, const TilingSpec&) = default;
};

/// Z odometer: level k is the single interval [0, p_k) centered at its left
/// end, split into p_k / p_{k-1} consecutive level-(k-1) intervals. Levels
/// listed in `reversed_levels` order their subtiles right to left.
TilingSpec z_odometer_spec(const std::vector<std::int64_t>& base, const std::vector<int>& reversed_levels = {});

/// Z2 dyadic squares [0, 2^k)^2 with quadrants in the order
/// (0,0), (h,0), (h,h), (0,h); base p_k = 4^k.
TilingSpec z2_dyadic_spec(int depth);

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

struct InvarianceProbe {
  FiniteSubset K;
  Rational eps;
};

struct ShapeReport {
  std::string id;
  std::size_t size = 0;
  std::vector<InvarianceResult> invariance;  ///< one entry per probe
};

struct LevelReport {
  int level = 0;
  bool deterministic = true;
  std::vector<std::string> violations;
  std::vector<ShapeReport> shapes;
};

struct ValidationReport {
  bool accepted = true;
  std::vector<LevelReport> levels;

  std::string first_violation() const;
};

/// Checks the exact-partition (determinism) identity and subtile orders at
/// every level and reports shape invariance for each probe. Structural defects
/// (unknown shape ids, missing rows, shapes without the unit) throw
/// Error(MalformedSpec); partition failures are reported, not thrown.
ValidationReport validate_system(const TilingSpec& spec, const std::vector<InvarianceProbe>& probes = {});

// ---------------------------------------------------------------------------
// Compiled ordered system
// ---------------------------------------------------------------------------

struct Subtile {
  std::size_t shape = 0;  ///< index into the previous level's shapes
  GroupPoint center;      ///< relative to the parent shape's center
};

/// Validated ordered tiling system with the induced order of every shape
/// (the recursive flattening of subtile orders) precomputed.
class OrderedTilingSystem {
 public:
  explicit OrderedTilingSystem(TilingSpec spec);

  const TilingSpec& spec() const noexcept { return spec_; }
  GroupKind kind() const noexcept { return spec_.group; }
  int depth() const noexcept { return spec_.depth(); }
  std::size_t shape_count(int level) const { return spec_.levels.at(level).shapes.size(); }
  const ShapeSpec& shape(int level, std::size_t idx) const { return spec_.levels.at(level).shapes.at(idx); }
  std::size_t shape_index(int level, const std::string& id) const;
  std::optional<std::int64_t> base(int level) const;

  /// Subtiles of a shape in the configured order.
  const std::vector<Subtile>& subtiles(int level, std::size_t idx) const { return subtiles_.at(level).at(idx); }

  /// Offsets of the shape listed along its induced order.
  const std::vector<GroupPoint>& enumeration(int level, std::size_t idx) const { return enums_.at(level).at(idx); }

  /// 0-based position of the identity (the center) along the shape's order.
  std::size_t center_position(int level, std::size_t idx) const { return center_pos_.at(level).at(idx); }

 private:
  TilingSpec spec_;
  std::vector<std::unordered_map<std::string, std::size_t>> ids_;
  std::vector<std::vector<std::vector<Subtile>>> subtiles_;
  std::vector<std::vector<std::vector<GroupPoint>>> enums_;
  std::vector<std::vector<std::size_t>> center_pos_;
};

using SystemPtr = std::shared_ptr<const OrderedTilingSystem>;

SystemPtr compile(TilingSpec spec);

// ---------------------------------------------------------------------------
// Tiles and instances
// ---------------------------------------------------------------------------

struct Tile {
  int level = 0;
  std::size_t shape = 0;
  GroupPoint center;

  friend bool operator==(const Tile&, const Tile&) = default;
};

/// Cells of T = S c in canonical order.
FiniteSubset tile_cells(const OrderedTilingSystem& sys, const Tile& t);

/// Cells of T listed along the induced order of T.
std::vector<GroupPoint> tile_enumeration(const OrderedTilingSystem& sys, const Tile& t);

/// Subtiles S'_i c_i c of T in the configured subtile order.
std::vector<Tile> decompose(const OrderedTilingSystem& sys, const Tile& t);

/// Windowed element of the system: top-level tiles and every lower level
/// derived from them through the decomposition tables.
class TilingInstance {
 public:
  /// `window` defaults to the union of the top tiles; it must be covered.
  TilingInstance(SystemPtr sys, int top_level, std::vector<Tile> top_tiles,
                 std::optional<FiniteSubset> window = std::nullopt);

  const OrderedTilingSystem& system() const noexcept { return *sys_; }
  const SystemPtr& system_ptr() const noexcept { return sys_; }
  GroupKind kind() const noexcept { return sys_->kind(); }
  int top_level() const noexcept { return top_level_; }
  const FiniteSubset& window() const noexcept { return window_; }
  const std::vector<Tile>& top_tiles() const noexcept { return levels_.at(top_level_).tiles; }

  const std::vector<Tile>& tiles(int level) const { return levels_.at(level).tiles; }
  std::optional<Tile> tile_at(int level, const GroupPoint& g) const;
  bool covers(const GroupPoint& g) const { return tile_at(0, g).has_value(); }

  /// The tile of the given level containing the identity.
  std::optional<Tile> central_tile(int level) const;

  /// g(T): every tile Sc becomes S c g^{-1}, the window becomes window g^{-1}.
  TilingInstance shifted(const GroupPoint& g) const;

  /// Same tiles, different window.
  TilingInstance with_window(FiniteSubset window) const;

 private:
  struct LevelTiles {
    std::vector<Tile> tiles;
    std::unordered_map<GroupPoint, std::uint32_t, GroupPointHash> owner;
  };

  SystemPtr sys_;
  int top_level_;
  FiniteSubset window_;
  std::vector<LevelTiles> levels_;
};

/// Single top tile S s^{-1}, placing the identity at offset `anchor` of S.
TilingInstance anchored_instance(SystemPtr sys, int level, std::size_t shape, const GroupPoint& anchor);

/// Anchored top tile plus its translates c v (v ranging over integer
/// combinations of `lattice` with coefficients in [-copies, copies]).
TilingInstance periodic_instance(SystemPtr sys, int level, std::size_t shape, const GroupPoint& anchor,
                                 const std::vector<GroupPoint>& lattice, int copies);

// ---------------------------------------------------------------------------
// Symbolic encoding
// ---------------------------------------------------------------------------

/// V-valued labeling of a window: label i means "center of a tile of shape
/// i", -1 stands for the symbol "0".
struct SymbolicTiling {
  int level = 0;
  std::vector<std::string> alphabet;  ///< shape ids of the level
  FiniteSubset window;
  std::vector<int> labels;  ///< parallel to window.elements()

  int label_at(const GroupPoint& g) const;
};

SymbolicTiling symbolic_encode(const TilingInstance& inst, int level, const FiniteSubset& window);

/// Tiles recovered from center labels.
std::vector<Tile> decode_centers(const OrderedTilingSystem& sys, const SymbolicTiling& sym);

// ---------------------------------------------------------------------------
// Centering and odometric systems
// ---------------------------------------------------------------------------

bool is_centered(const OrderedTilingSystem& sys);

/// Moves every center to the first element of its tile's induced order.
TilingSpec center_normalize(const TilingSpec& spec);

struct CongruenceViolation {
  int level = 0;
  std::string shape;
  GroupPoint subtile_center;
  std::int64_t subtile_position = 0;
  std::int64_t center_position = 0;
  std::int64_t modulus = 0;
};

struct OdometricReport {
  bool odometric = true;
  std::size_t rows_checked = 0;
  std::vector<CongruenceViolation> violations;
};

/// Exhaustive check of j_{T'} = j_T (mod p_{k-1}) over every decomposition
/// row of every level (p_0 = 1). Throws NotOdometric if the base is missing.
OdometricReport check_odometric(const OrderedTilingSystem& sys);

enum class CenterChoice { Deterministic, Enumerate };

/// Replaces each level-k shape by variants centered at one of its first p_k
/// ordered positions so that the congruences hold. `base` lists p_1..p_L.
TilingSpec odometrize(const TilingSpec& centered, const std::vector<std::int64_t>& base,
                      CenterChoice choice = CenterChoice::Deterministic);

}  // namespace asymp
