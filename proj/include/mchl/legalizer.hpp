#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "mchl/core.hpp"
#include "mchl/fop.hpp"
#include "mchl/region.hpp"

namespace mchl {

struct LegalizeConfig {
  RegionConfig region;
  int ws = 8;
  int parallelism = 1;
  std::uint64_t seed = 1;
  bool oracleCheck = false;
};

struct RunReport {
  double sam = 0.0;
  double maxDisp = 0.0;
  std::map<int, double> perHeightSam;
  long long cellsLegalized = 0;
  long long fallbacksUsed = 0;
  long long expansions = 0;
  long long violations = 0;
  double runtimeMs = 0.0;
};

/// JSON object with keys sam, maxDisp, perHeightSam, runtimeMs, violations,
/// cellsLegalized, fallbacksUsed, expansions. Keys are sorted.
std::string reportToJson(const RunReport& r, bool includeRuntime = true);

struct CommitResult {
  int x = 0;  // committed left edge of the target
  int bottomRow = 0;
  std::vector<CellId> moved;
};

/// Shifts the region around the target at an integer x next to xStar and
/// writes the result back to `p`. The floor or ceiling of xStar is chosen by
/// curve value, ties toward the target's gx and then the floor. The target
/// becomes legalized and is added to `index`.
CommitResult commitInsertion(Placement& p, RowIndex& index, const RegionModel& model, CellId target,
                             const InsertionPoint& ip, double xStar);

/// Nearest free slot by row distance, then site distance, scanning every row.
/// Returns false when no slot exists.
bool greedyFallback(Placement& p, RowIndex& index, CellId target);

struct LegalizeResult {
  Placement placement;
  RunReport report;
};

/// Full flow. Movable cells are re-legalized from their global positions.
/// Throws Unlegalizable when the fallback finds no slot for some cell.
LegalizeResult legalize(const Placement& input, const LegalizeConfig& cfg);

}  // namespace mchl
