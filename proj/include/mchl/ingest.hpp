#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "mchl/core.hpp"

namespace mchl {

/// Parse error with a 1-based source location.
class ParseError : public Error {
 public:
  ParseError(Errc code, int line, int column, const std::string& what)
      : Error(code, "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

// Placement text format, whitespace separated, '#' starts a comment:
//
//   GRID numRows rowHeight siteWidth numSites firstRail
//   BLOCK row start end
//   CELL name gx gy w h rail fixed [x y]
//
// The optional trailing `x y` marks a movable cell as legalized at that
// position. Fixed cells sit at (gx, gy), which must be integral.
Placement parsePlacement(std::string_view text);
Placement readPlacementFile(const std::filesystem::path& path);

/// Deterministic serialization: GRID, then BLOCK lines, then CELL lines in id order.
std::string writePlacement(const Placement& p);
void writePlacementFile(const Placement& p, const std::filesystem::path& path);

/// Shortest text that parses back to the same double.
std::string formatReal(double v);

struct SyntheticSpec {
  int numCells = 1000;
  double density = 0.6;                        // total cell area / free area
  std::map<int, double> heightMix{{1, 1.0}};   // height -> probability
  int numRows = 0;                             // 0 derives a square-ish grid
  int numSites = 0;
  double blockageFraction = 0.0;               // fraction of sites covered by blockages
  double rowHeight = 2.0;
  double siteWidth = 0.2;
  double meanWidth = 4.0;                      // mean cell width in sites
  std::uint64_t seed = 1;
};

/// Deterministic synthetic benchmark. Cells start from a packed layout that is
/// spread to fill the grid and then perturbed, so overlaps stay local.
/// Throws InfeasibleSpec when the requested area does not fit.
Placement generateSynthetic(const SyntheticSpec& spec);

/// Total movable cell area divided by the unblocked grid area.
double measuredDensity(const Placement& p);

}  // namespace mchl
