#pragma once

#include <optional>
#include <vector>

#include "mchl/core.hpp"

namespace mchl {

struct RegionConfig {
  int windowRows = 10;   // row span around the target
  int windowSites = 100; // site span around the target
  int expandFactor = 2;
  int maxExpand = 4;
};

/// Rows [rowLo, rowHi] inclusive, sites [siteLo, siteHi) half-open.
struct Window {
  int rowLo = 0;
  int rowHi = 0;
  int siteLo = 0;
  int siteHi = 0;

  int centerRow = 0;
  int centerSite = 0;
  int spanRows = 0;
  int spanSites = 0;
  int expansions = 0;

  int numRows() const { return rowHi - rowLo + 1; }
  int numSites() const { return siteHi - siteLo; }
  bool containsRow(int r) const { return r >= rowLo && r <= rowHi; }
  bool overlaps(const Window& o) const {
    return rowLo <= o.rowHi && o.rowLo <= rowHi && siteLo < o.siteHi && o.siteLo < siteHi;
  }
};

/// Window of cfg.windowRows x cfg.windowSites centred on the target, grown to
/// cover the target's footprint and clipped to the grid.
Window buildWindow(const Cell& target, const SiteGrid& grid, const RegionConfig& cfg);

/// Both spans multiplied by cfg.expandFactor around the same centre.
/// Throws FallbackRequired once cfg.maxExpand expansions have been used.
Window expandWindow(const Window& w, const Cell& target, const SiteGrid& grid, const RegionConfig& cfg);

struct LocalSegment {
  int row = 0;
  int lo = 0;
  int hi = 0;
  std::vector<CellId> cellsLR;  // member cells by cx ascending

  int length() const { return hi - lo; }
};

struct LocalRegion {
  Window window;
  std::vector<LocalSegment> segments;  // by row, at most one per row
  std::vector<CellId> localCells;      // ascending id
  double density = 0.0;

  const LocalSegment* segmentOf(int row) const;
  LocalSegment* segmentOf(int row);
};

/// Longest free run of [lo, hi) after removing `obstacles` (any order, may
/// overlap). Ties go to the run nearest `center`, then the leftmost one.
std::optional<SiteRange> longestFreeRun(int lo, int hi, std::vector<SiteRange> obstacles, int center);

/// Only fixed and legalized cells take part: legalized movable cells wholly
/// inside the segments become localCells, while fixed cells, blockages and
/// cells crossing the window or their row's segment are obstacles.
/// Throws EmptyRegion when no row has a free run.
LocalRegion extractLocalRegion(const Placement& p, const RowIndex& index, const Window& w);
LocalRegion extractLocalRegion(const Placement& p, const Window& w);

}  // namespace mchl
