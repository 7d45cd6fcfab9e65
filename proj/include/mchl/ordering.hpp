#pragma once

#include <functional>
#include <vector>

#include "mchl/core.hpp"

namespace mchl {

/// Nearest rail-compatible bottom row with cy + h <= numRows; ties go to the
/// lower row. Throws NoLegalRow.
int nearestLegalRow(const Cell& c, const SiteGrid& grid);

/// Snaps every movable cell to its nearest legal row and resets cx to gx.
/// Overlaps are allowed. Only cy and cx change.
Placement preMove(Placement p);

struct OrderState {
  std::vector<CellId> S;  // remaining order; S[curIdx] is C_cur
  int Ws = 8;
  std::size_t curIdx = 0;
  CellId nextFixed = -1;  // C_next after the last emission

  bool done() const { return curIdx >= S.size(); }
};

/// Movable cells by area descending, then height descending, then id.
OrderState initialOrder(const Placement& p, int ws = 8);

/// Emits C_cur, keeps the following entry as C_next, stably reorders the
/// remaining Ws - 2 window entries by density descending and slides the
/// window by one. Throws Exhausted when nothing remains.
CellId nextTarget(OrderState& state, const std::function<double(CellId)>& densityOf);

}  // namespace mchl
