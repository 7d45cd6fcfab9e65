#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mchl/core.hpp"
#include "mchl/fop.hpp"
#include "mchl/region.hpp"
#include "mchl/shift.hpp"

// Reference implementations and fixtures shared by the unit tests and the
// acceptance runner. Oracles recompute from raw fields and never call the
// routine they check.
namespace mchl::support {

using Rng = std::mt19937_64;

// ---- oracles ---------------------------------------------------------

/// Quadratic scan over every cell and every cell pair.
std::vector<Violation> pairwiseViolations(const Placement& p);

/// S_am by explicit height grouping.
double groupingSam(const Placement& p);

/// Best row by checking every row of the grid; -1 when none fits.
int scanNearestRow(const Cell& c, const SiteGrid& grid);

/// Longest free run of [lo, hi) by marking sites one by one.
std::optional<SiteRange> scanLongestRun(int lo, int hi, const std::vector<SiteRange>& obstacles, int center);

struct NaiveShift {
  std::vector<double> pos;  // per local cell, after both phases
  bool overflow = false;
  bool conflict = false;    // some cell was pushed both ways
};

/// Both phases by repeated relaxation of every adjacency constraint in
/// every row until nothing changes. Uses only row order, not the side
/// closure.
NaiveShift naiveShift(const RegionModel& m, const Cell& target, double xt, int bottomRow, const std::vector<int>& gaps);

/// Left phase only (or right phase only when `left` is false).
NaiveShift naivePhase(const RegionModel& m, const Cell& target, double xt, int bottomRow, const std::vector<int>& gaps,
                      bool left);

// ---- fixtures --------------------------------------------------------

/// Placement with the target as an unlegalized cell, its whole-grid region
/// and model.
struct Instance {
  Placement p;
  CellId target = -1;
  LocalRegion region;
  RegionModel model;

  const Cell& targetCell() const { return p.cells[static_cast<std::size_t>(target)]; }
};

/// Window covering the whole grid.
Window wholeGrid(const SiteGrid& g);

/// Builds region and model over the whole grid.
void finishInstance(Instance& inst);

/// One row [0,20): A [4,7), B [8,11), target w=4 wanting x=6.
Instance abInstance();

/// Three rows [0,30): b (h3) [0,2), f [8,11), a [11,15) in row 0, e [5,8)
/// in row 1, c (h2) [8,12) in rows 1-2, d [12,15) in row 2; target h3 w4.
Instance fig5Instance();

struct RegionSpec {
  int minRows = 3, maxRows = 6;
  int minSites = 20, maxSites = 40;
  int maxHeight = 4;
  int maxWidth = 6;
  double minDensity = 0.2, maxDensity = 0.9;
  double blockageChance = 0.0;
};

/// Random legal placement with quarter-lattice global positions around the
/// legal ones and a random unlegalized target.
Instance randomInstance(Rng& rng, const RegionSpec& spec = {});

/// Random legal placement for check/metric tests; no target.
Placement randomLegalPlacement(Rng& rng, int rows, int sites, double density, int maxHeight);

/// Random curve set built from random pushed cells on the quarter lattice.
DisplacementCurves randomCurves(Rng& rng);

// ---- helpers ---------------------------------------------------------

double uniformReal(Rng& rng, double lo, double hi);
int uniformInt(Rng& rng, int lo, int hi);  // inclusive
double quarter(Rng& rng, double lo, double hi);  // multiple of 0.25 in [lo, hi]

}  // namespace mchl::support
