#pragma once

#include <cstddef>
#include <vector>

#include "mchl/shift.hpp"

namespace mchl {

class ThreadPool;

/// Gap choices for every rail-compatible bottom row. A gap admits the target
/// where its footprint touches the gap's current whitespace and the row can
/// be chain-compressed around it; a combination's range is the intersection
/// over its rows and the side closure. Kept when the closure is consistent
/// and xLo <= xHi. Order: bottom row ascending, then gaps lexicographically
/// from the bottom row up.
std::vector<InsertionPoint> enumerateInsertionPoints(const RegionModel& m, const Cell& target);

/// analyzeInsertion for `ip`, with the range narrowed to [ip.xLo, ip.xHi].
bool analyzeInsertionPoint(const RegionModel& m, const Cell& target, const InsertionPoint& ip, SideClosure& out);

struct Breakpoint {
  double x = 0.0;
  double slopeL = 0.0;  // slope change applied to everything left of x
  double slopeR = 0.0;  // slope change applied to everything right of x
};

struct MergedBreakpoint {
  double x = 0.0;
  double slopeL = 0.0;
  double slopeR = 0.0;
  double slopesRPrefix = 0.0;  // sum of slopeR over indices <= i
  double slopesLSuffix = 0.0;  // sum of slopeL over indices >= i
  double value = 0.0;
};

/// One pushed cell: left cells sit at min(cur, x - off), right cells at
/// max(cur, x + off).
struct PushCurve {
  double cur = 0.0;
  double gx = 0.0;
  double off = 0.0;
  bool left = true;
};

struct DisplacementCurves {
  double xLo = 0.0;
  double xHi = 0.0;
  double targetGx = 0.0;
  std::vector<PushCurve> pushed;
  std::vector<Breakpoint> breakpoints;  // clamped into [xLo, xHi], endpoints excluded

  /// Target displacement plus the displacement change of every pushed cell.
  double evaluate(double x) const;
};

/// Breakpoints of one pushed cell, unclamped. Cells that never move inside
/// [xLo, xHi] contribute none.
void appendBreakpoints(const PushCurve& c, double xLo, double xHi, std::vector<Breakpoint>& out);

DisplacementCurves buildDisplacementCurves(const SideClosure& closure, const RegionModel& m, const Cell& target);
DisplacementCurves buildDisplacementCurves(const WorkingCopy& copy, const InsertionPoint& ip);

inline constexpr double kMergeEpsilon = 1e-9;

std::vector<Breakpoint> sortBreakpoints(std::vector<Breakpoint> bps);

/// Runs whose neighbouring x differ by at most kMergeEpsilon collapse onto
/// the run's smallest x with summed slopes.
std::vector<MergedBreakpoint> mergeBreakpoints(const std::vector<Breakpoint>& sorted);
void sumSlopesR(std::vector<MergedBreakpoint>& merged);
void sumSlopesL(std::vector<MergedBreakpoint>& merged);

struct Optimum {
  double xStar = 0.0;
  double vStar = 0.0;
};

/// Anchors at the first breakpoint by direct evaluation and propagates values
/// rightwards. Leftmost minimum wins. Throws EmptyCurve on an empty list.
Optimum calculateValue(std::vector<MergedBreakpoint>& merged, const DisplacementCurves& curves);

/// Curve breakpoints plus the two zero-slope endpoints, sorted.
std::vector<Breakpoint> pipelineInput(const DisplacementCurves& curves);

/// sort, merge, sumSlopesR, sumSlopesL, calculateValue.
Optimum sixOpPipeline(const DisplacementCurves& curves);

/// Forward pass (merge, right-slope prefix, vR) into a backward pass (merge,
/// left-slope suffix, vL, v) anchored at the last breakpoint.
Optimum fusedForwardBackward(const std::vector<Breakpoint>& sorted, const DisplacementCurves& curves);
Optimum fusedPipeline(const DisplacementCurves& curves);

struct OracleResult {
  double vStar = 0.0;
  std::vector<double> argmin;  // candidates within 1e-9 relative of vStar
  std::size_t candidates = 0;
};

/// Test-only: trial inserts at every point of a 0.25-site grid and every
/// breakpoint in [xLo, xHi], runs both shift phases and measures the cost.
OracleResult positionalOracle(const RegionModel& m, const Cell& target, const InsertionPoint& ip);

struct BestInsertion {
  InsertionPoint ip;
  std::size_t index = 0;  // enumeration index
  double xStar = 0.0;
  double vStar = 0.0;  // horizontal optimum plus the target's vertical displacement, in sites
};

/// Evaluates every insertion point with the fused pipeline. With a pool and
/// parallelism above one, contiguous chunks run concurrently and are reduced
/// in chunk order. Ties: smaller vStar, smaller xStar, lower bottom row,
/// enumeration index. Throws NoFeasiblePoint.
BestInsertion findOptimalPosition(const RegionModel& m, const Cell& target, int parallelism = 1,
                                  ThreadPool* pool = nullptr);

/// Vertical displacement of the target at `bottomRow`, in sites.
double verticalCost(const RegionModel& m, const Cell& target, int bottomRow);

}  // namespace mchl
