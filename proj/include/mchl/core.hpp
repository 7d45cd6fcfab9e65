#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mchl {

using CellId = std::int32_t;

/// Error categories raised across the library.
enum class Errc {
  SyntaxError,
  SemanticError,
  DuplicateId,
  InfeasibleSpec,
  EmptyPlacement,
  NoLegalRow,
  Exhausted,
  EmptyRegion,
  FallbackRequired,
  OutOfSegment,
  RailMismatch,
  InconsistentInsertion,
  SegmentOverflow,
  EmptyCurve,
  NoFeasiblePoint,
  SnapInfeasible,
  Unlegalizable,
  OracleMismatch,
};

std::string_view errcName(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errcName(code)) + ": " + what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Global positions live on a 1/65536-site lattice. Every breakpoint, offset
/// and displacement sum built from lattice values is exact in binary floating
/// point, which keeps the curve pipelines order-independent.
inline constexpr double kLatticeScale = 65536.0;

inline double snapToLattice(double v) { return std::nearbyint(v * kLatticeScale) / kLatticeScale; }

enum class Rail : std::uint8_t { P, G, Any };

std::string_view railName(Rail r);

struct Cell {
  CellId id = 0;
  std::string name;
  double gx = 0.0;  // global placement x, site units
  double gy = 0.0;  // global placement y, row units
  double cx = 0.0;  // current x, site units
  int cy = 0;       // current bottom row
  int w = 1;
  int h = 1;
  Rail rail = Rail::Any;
  bool fixed = false;
  bool legalized = false;

  double right() const { return cx + w; }
  int top() const { return cy + h; }
  long long area() const { return static_cast<long long>(w) * h; }

  bool operator==(const Cell&) const = default;
};

struct Blockage {
  int row = 0;
  int start = 0;  // first blocked site
  int end = 0;    // one past the last blocked site

  auto operator<=>(const Blockage&) const = default;
};

struct SiteRange {
  int lo = 0;
  int hi = 0;

  int length() const { return hi - lo; }
  auto operator<=>(const SiteRange&) const = default;
};

class SiteGrid {
 public:
  int numRows = 0;
  int numSites = 0;
  double rowHeight = 1.0;
  double siteWidth = 1.0;
  Rail firstRail = Rail::P;

  /// Rail at the bottom boundary of `row`; alternates starting from firstRail.
  Rail railOf(int row) const {
    if (row % 2 == 0) return firstRail;
    return firstRail == Rail::P ? Rail::G : Rail::P;
  }

  bool railCompatible(Rail cellRail, int bottomRow) const {
    return cellRail == Rail::Any || railOf(bottomRow) == cellRail;
  }

  /// siteWidth / rowHeight: converts a horizontal distance to row-height units.
  double unitRatio() const { return siteWidth / rowHeight; }

  /// Sets the blockage list, merging overlapping or touching ranges per row.
  /// Throws SemanticError on ranges outside the grid.
  void setBlockages(std::vector<Blockage> list);
  const std::vector<Blockage>& blockages() const { return blockages_; }
  const std::vector<SiteRange>& rowBlockages(int row) const;

  bool operator==(const SiteGrid& o) const {
    return numRows == o.numRows && numSites == o.numSites && rowHeight == o.rowHeight &&
           siteWidth == o.siteWidth && firstRail == o.firstRail && blockages_ == o.blockages_;
  }

 private:
  std::vector<Blockage> blockages_;
  std::vector<std::vector<SiteRange>> byRow_;
};

struct Placement {
  SiteGrid grid;
  std::vector<Cell> cells;  // cells[i].id == i

  /// Largest cell height (H).
  int maxHeight() const;
  int movableCount() const;

  bool operator==(const Placement&) const = default;
};

/// Per-row index of placed cells (fixed cells and legalized movable cells),
/// each row sorted by current x.
class RowIndex {
 public:
  RowIndex() = default;
  explicit RowIndex(const Placement& p);

  const std::vector<CellId>& row(int r) const { return rows_[static_cast<std::size_t>(r)]; }
  int numRows() const { return static_cast<int>(rows_.size()); }
  int maxWidth() const { return maxWidth_; }

  /// Inserts a placed cell into every row it spans.
  void insert(const Placement& p, CellId id);

  /// Ids of placed cells in `r` whose span intersects [lo, hi).
  void query(const Placement& p, int r, double lo, double hi, std::vector<CellId>& out) const;

 private:
  std::vector<std::vector<CellId>> rows_;
  int maxWidth_ = 1;
};

struct Displacement {
  std::map<CellId, double> perCell;    // delta_i, row-height units
  std::map<int, double> perHeight;     // mean delta per populated height class
  double sam = 0.0;
  double maxDisp = 0.0;
};

/// |cx - gx| * unitRatio + |cy - gy|, in row-height units.
double manhattanDisplacement(const Cell& c, double unitRatio);

/// Average displacement over height classes. Fixed cells are excluded; empty
/// height classes are skipped. Throws EmptyPlacement without movable cells.
Displacement averageDisplacement(const Placement& p);

enum class ViolationKind : std::uint8_t {
  Overlap,
  OutOfBounds,
  NonIntegerSite,
  RailMismatch,
  BlockageOverlap,
  Unplaced,
};

std::string_view violationName(ViolationKind k);

struct Violation {
  ViolationKind kind;
  CellId a = -1;
  CellId b = -1;  // second cell for Overlap, otherwise -1

  auto operator<=>(const Violation&) const = default;
};

/// Every legality violation, sorted. Overlaps are reported once per cell pair.
std::vector<Violation> checkLegal(const Placement& p);

/// True when two placed cells share area.
inline bool cellsOverlap(const Cell& a, const Cell& b) {
  return a.cx < b.cx + b.w && b.cx < a.cx + a.w && a.cy < b.cy + b.h && b.cy < a.cy + a.h;
}

}  // namespace mchl
