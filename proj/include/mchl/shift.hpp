#pragma once

#include <span>
#include <utility>
#include <vector>

#include "mchl/core.hpp"
#include "mchl/region.hpp"

namespace mchl {

/// Compact copy of a localRegion used by shifting and curve building. Rows are
/// indexed relative to `rowBase`; cells are referred to by local index.
struct ModelCell {
  CellId id = -1;
  double cur = 0.0;  // current x
  double gx = 0.0;
  int w = 1;
  int h = 1;
  int row = 0;        // bottom row, relative
  int slotBegin = 0;  // first entry in RegionModel::slots
  int rank = 0;       // position in C_sort
};

struct ModelRow {
  bool hasSegment = false;
  int lo = 0;
  int hi = 0;
  std::vector<int> cells;        // local indices by x
  std::vector<long long> prefixW;  // prefixW[g] = total width of cells[0..g)
};

struct RegionModel {
  int rowBase = 0;
  Rail firstRail = Rail::P;
  double verticalWeight = 1.0;  // rowHeight / siteWidth: one row expressed in sites
  std::vector<ModelRow> rows;
  std::vector<ModelCell> cells;
  std::vector<int> slots;  // slot of cell c in its k-th row at slots[c.slotBegin + k]
  std::vector<int> order;  // C_sort: by (cur, bottom row, id)

  int numRows() const { return static_cast<int>(rows.size()); }
  int slot(int c, int k) const { return slots[static_cast<std::size_t>(cells[static_cast<std::size_t>(c)].slotBegin + k)]; }
  const ModelRow& row(int rel) const { return rows[static_cast<std::size_t>(rel)]; }
  bool railCompatible(Rail rail, int absRow) const;
};

RegionModel buildRegionModel(const Placement& p, const LocalRegion& region);

struct InsertionInterval {
  int row = 0;  // absolute row
  double lo = 0.0;
  double hi = 0.0;
};

/// Target placement between cells[gaps[k] - 1] and cells[gaps[k]] of each
/// spanned row, with [xLo, xHi] the feasible range for its left edge.
struct InsertionPoint {
  int bottomRow = 0;  // absolute row
  std::vector<int> gaps;
  std::vector<InsertionInterval> intervals;
  double xLo = 0.0;
  double xHi = 0.0;
};

/// Cells that an insertion can push, with their push offsets. A left cell c
/// sits at min(cur, x - off) and a right cell at max(cur, x + off) when the
/// target's left edge is at x.
/// Reusable: entries of `side` and `off` are only valid for cells stamped
/// with the current epoch, so repeated analyses skip a full reset.
struct SideClosure {
  std::vector<int> prefix;  // per row: cells[0..prefix) are left cells
  std::vector<int> suffix;  // per row: cells[suffix..) are right cells
  std::vector<int> left;    // left cells, descending C_sort
  std::vector<int> right;   // right cells, ascending C_sort
  double xLo = 0.0;
  double xHi = 0.0;
  bool consistent = false;

  /// -1 left, +1 right, 0 unaffected.
  int sideOf(int c) const { return stamp[static_cast<std::size_t>(c)] == epoch ? side[static_cast<std::size_t>(c)] : 0; }
  double offsetOf(int c) const { return off[static_cast<std::size_t>(c)]; }

  std::vector<signed char> side;
  std::vector<double> off;
  std::vector<unsigned> stamp;
  unsigned epoch = 0;
  std::vector<int> work;
};

/// Fills `out` for the target at relative bottom row `bottomRel` and the given
/// gaps. Returns false when some cell would have to sit on both sides.
bool analyzeInsertion(const RegionModel& m, const Cell& target, int bottomRel, std::span<const int> gaps,
                      SideClosure& out);

struct WorkingCopy {
  const RegionModel* model = nullptr;
  Cell target;
  double xt = 0.0;
  int bottomRow = 0;  // absolute
  std::vector<int> gaps;
  SideClosure closure;
  std::vector<double> pos;  // per local cell

  int bottomRel() const { return bottomRow - model->rowBase; }
};

/// Scratch copy with the target at (xt, bottomRow) in the given gaps. The
/// model is not modified. Throws RailMismatch, OutOfSegment or
/// InconsistentInsertion.
WorkingCopy trialInsert(const RegionModel& m, const Cell& target, double xt, int bottomRow, std::span<const int> gaps);

/// As above with gaps chosen by comparing cell centres against the target's.
WorkingCopy trialInsert(const RegionModel& m, const Cell& target, double xt, int bottomRow);

enum class Direction { Left, Right };

struct SegmentCursor {
  std::vector<int> csp;   // next cell to process, per row
  std::vector<char> cse;  // row finished
};

struct ShiftResult {
  std::vector<std::pair<CellId, double>> positions;  // emission order
  std::vector<CellId> moved;                          // ascending
  int passCount = 0;
};

/// Single traversal of C_sort away from the target, pushing adjacent cells
/// through the per-row cursors. Throws SegmentOverflow.
ShiftResult sacsShift(WorkingCopy& copy, Direction dir);

/// Reference shifter: full row-by-row passes until one moves nothing.
/// passCount includes that final quiet pass. Throws SegmentOverflow.
ShiftResult multiPassShift(WorkingCopy& copy, Direction dir);

/// Both phases of sacsShift.
void shiftBoth(WorkingCopy& copy);

/// Displacement change of the region relative to current positions plus the
/// target's horizontal displacement, in sites.
double horizontalCost(const WorkingCopy& copy);

}  // namespace mchl
