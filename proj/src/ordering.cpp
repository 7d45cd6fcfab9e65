#include "mchl/ordering.hpp"

#include <algorithm>
#include <cmath>

namespace mchl {

int nearestLegalRow(const Cell& c, const SiteGrid& grid) {
  const int maxRow = grid.numRows - c.h;
  if (maxRow < 0) throw Error(Errc::NoLegalRow, "cell " + c.name + " is taller than the grid");
  const int start = std::clamp(static_cast<int>(std::floor(c.gy)), 0, maxRow);
  // Step outwards from the floor row; the lower candidate of a tie comes first.
  int best = -1;
  double bestDist = 0.0;
  for (int d = 0; d <= grid.numRows; ++d) {
    for (int r : {start - d, start + d + 1}) {
      if (r < 0 || r > maxRow || !grid.railCompatible(c.rail, r)) continue;
      const double dist = std::abs(r - c.gy);
      if (best < 0 || dist < bestDist || (dist == bestDist && r < best)) {
        best = r;
        bestDist = dist;
      }
    }
    if (best >= 0 && bestDist <= d) break;
  }
  if (best < 0) throw Error(Errc::NoLegalRow, "no row matches rail " + std::string(railName(c.rail)) + " for " + c.name);
  return best;
}

Placement preMove(Placement p) {
  for (auto& c : p.cells) {
    if (c.fixed) continue;
    c.cy = nearestLegalRow(c, p.grid);
    c.cx = c.gx;
  }
  return p;
}

OrderState initialOrder(const Placement& p, int ws) {
  OrderState st;
  st.Ws = std::max(ws, 2);
  for (const auto& c : p.cells) {
    if (!c.fixed) st.S.push_back(c.id);
  }
  std::sort(st.S.begin(), st.S.end(), [&](CellId a, CellId b) {
    const auto& ca = p.cells[static_cast<std::size_t>(a)];
    const auto& cb = p.cells[static_cast<std::size_t>(b)];
    if (ca.area() != cb.area()) return ca.area() > cb.area();
    if (ca.h != cb.h) return ca.h > cb.h;
    return a < b;
  });
  return st;
}

CellId nextTarget(OrderState& st, const std::function<double(CellId)>& densityOf) {
  if (st.done()) throw Error(Errc::Exhausted, "no cells left to order");
  const CellId cur = st.S[st.curIdx];
  const std::size_t first = st.curIdx + 2;
  const std::size_t last = std::min(st.S.size(), st.curIdx + static_cast<std::size_t>(st.Ws));
  st.nextFixed = st.curIdx + 1 < st.S.size() ? st.S[st.curIdx + 1] : -1;
  if (first + 1 < last) {
    std::vector<std::pair<double, CellId>> keyed;
    keyed.reserve(last - first);
    for (std::size_t i = first; i < last; ++i) keyed.emplace_back(densityOf(st.S[i]), st.S[i]);
    std::stable_sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t i = first; i < last; ++i) st.S[i] = keyed[i - first].second;
  }
  ++st.curIdx;
  return cur;
}

}  // namespace mchl
