#include "mchl/shift.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mchl {

bool RegionModel::railCompatible(Rail rail, int absRow) const {
  if (rail == Rail::Any) return true;
  const Rail other = firstRail == Rail::P ? Rail::G : Rail::P;
  return (absRow % 2 == 0 ? firstRail : other) == rail;
}

RegionModel buildRegionModel(const Placement& p, const LocalRegion& region) {
  RegionModel m;
  m.rowBase = region.window.rowLo;
  m.firstRail = p.grid.firstRail;
  m.verticalWeight = p.grid.rowHeight / p.grid.siteWidth;
  m.rows.resize(static_cast<std::size_t>(region.window.numRows()));

  m.cells.reserve(region.localCells.size());
  int slotTotal = 0;
  for (CellId id : region.localCells) {
    const auto& c = p.cells[static_cast<std::size_t>(id)];
    ModelCell mc;
    mc.id = id;
    mc.cur = c.cx;
    mc.gx = c.gx;
    mc.w = c.w;
    mc.h = c.h;
    mc.row = c.cy - m.rowBase;
    mc.slotBegin = slotTotal;
    slotTotal += c.h;
    m.cells.push_back(mc);
  }
  m.slots.assign(static_cast<std::size_t>(slotTotal), 0);

  auto localOf = [&](CellId id) {
    auto it = std::lower_bound(region.localCells.begin(), region.localCells.end(), id);
    return static_cast<int>(it - region.localCells.begin());
  };
  for (const auto& s : region.segments) {
    auto& row = m.rows[static_cast<std::size_t>(s.row - m.rowBase)];
    row.hasSegment = true;
    row.lo = s.lo;
    row.hi = s.hi;
    row.cells.reserve(s.cellsLR.size());
    row.prefixW.assign(s.cellsLR.size() + 1, 0);
    for (std::size_t i = 0; i < s.cellsLR.size(); ++i) {
      const int c = localOf(s.cellsLR[i]);
      auto& mc = m.cells[static_cast<std::size_t>(c)];
      m.slots[static_cast<std::size_t>(mc.slotBegin + (s.row - m.rowBase - mc.row))] = static_cast<int>(i);
      row.cells.push_back(c);
      row.prefixW[i + 1] = row.prefixW[i] + mc.w;
    }
  }

  m.order.resize(m.cells.size());
  for (std::size_t i = 0; i < m.order.size(); ++i) m.order[i] = static_cast<int>(i);
  std::sort(m.order.begin(), m.order.end(), [&](int a, int b) {
    const auto& ca = m.cells[static_cast<std::size_t>(a)];
    const auto& cb = m.cells[static_cast<std::size_t>(b)];
    if (ca.cur != cb.cur) return ca.cur < cb.cur;
    if (ca.row != cb.row) return ca.row < cb.row;
    return ca.id < cb.id;
  });
  for (std::size_t i = 0; i < m.order.size(); ++i) m.cells[static_cast<std::size_t>(m.order[i])].rank = static_cast<int>(i);
  return m;
}

bool analyzeInsertion(const RegionModel& m, const Cell& target, int b, std::span<const int> gaps, SideClosure& s) {
  const int nr = m.numRows();
  const auto nc = m.cells.size();
  if (s.stamp.size() != nc) {
    s.stamp.assign(nc, 0);
    s.side.assign(nc, 0);
    s.off.assign(nc, 0.0);
    s.epoch = 0;
  }
  if (++s.epoch == 0) {
    std::fill(s.stamp.begin(), s.stamp.end(), 0u);
    s.epoch = 1;
  }
  s.prefix.assign(static_cast<std::size_t>(nr), 0);
  s.suffix.resize(static_cast<std::size_t>(nr));
  for (int r = 0; r < nr; ++r) s.suffix[static_cast<std::size_t>(r)] = static_cast<int>(m.row(r).cells.size());
  s.left.clear();
  s.right.clear();
  s.work.clear();
  s.consistent = false;
  if (b < 0 || b + target.h > nr || static_cast<int>(gaps.size()) != target.h) return false;

  double xLo = -std::numeric_limits<double>::infinity();
  double xHi = std::numeric_limits<double>::infinity();
  for (int k = 0; k < target.h; ++k) {
    const auto& row = m.row(b + k);
    if (!row.hasSegment || gaps[static_cast<std::size_t>(k)] < 0 ||
        gaps[static_cast<std::size_t>(k)] > static_cast<int>(row.cells.size())) {
      return false;
    }
    xLo = std::max(xLo, static_cast<double>(row.lo));
    xHi = std::min(xHi, static_cast<double>(row.hi - target.w));
  }

  bool ok = true;
  // Marks c with side v; a cell already marked with the other side is a conflict.
  auto mark = [&](int c, signed char v) {
    const auto i = static_cast<std::size_t>(c);
    if (s.stamp[i] != s.epoch) {
      s.stamp[i] = s.epoch;
      s.side[i] = v;
      s.work.push_back(c);
      (v < 0 ? s.left : s.right).push_back(c);
    } else if (s.side[i] != v) {
      ok = false;
    }
  };
  auto extendLeft = [&](int r, int upto) {
    auto& p = s.prefix[static_cast<std::size_t>(r)];
    const auto& cells = m.row(r).cells;
    for (; p < upto; ++p) mark(cells[static_cast<std::size_t>(p)], -1);
  };
  auto extendRight = [&](int r, int from) {
    auto& q = s.suffix[static_cast<std::size_t>(r)];
    const auto& cells = m.row(r).cells;
    while (q > from && ok) mark(cells[static_cast<std::size_t>(--q)], +1);
  };

  for (int k = 0; k < target.h; ++k) extendLeft(b + k, gaps[static_cast<std::size_t>(k)]);
  while (!s.work.empty()) {
    const int c = s.work.back();
    s.work.pop_back();
    const auto& mc = m.cells[static_cast<std::size_t>(c)];
    for (int k = 0; k < mc.h; ++k) extendLeft(mc.row + k, m.slot(c, k) + 1);
  }
  for (int k = 0; k < target.h && ok; ++k) extendRight(b + k, gaps[static_cast<std::size_t>(k)]);
  while (!s.work.empty() && ok) {
    const int c = s.work.back();
    s.work.pop_back();
    const auto& mc = m.cells[static_cast<std::size_t>(c)];
    for (int k = 0; k < mc.h && ok; ++k) extendRight(mc.row + k, m.slot(c, k));
  }
  if (!ok) return false;
  for (int r = 0; r < nr; ++r) {
    if (s.prefix[static_cast<std::size_t>(r)] > s.suffix[static_cast<std::size_t>(r)]) return false;
  }

  auto rankOf = [&](int c) { return m.cells[static_cast<std::size_t>(c)].rank; };
  std::sort(s.left.begin(), s.left.end(), [&](int a, int c) { return rankOf(a) > rankOf(c); });
  std::sort(s.right.begin(), s.right.end(), [&](int a, int c) { return rankOf(a) < rankOf(c); });

  auto isTargetRow = [&](int r) { return r >= b && r < b + target.h; };
  for (int c : s.left) {
    const auto& mc = m.cells[static_cast<std::size_t>(c)];
    double best = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < mc.h; ++k) {
      const int r = mc.row + k;
      const int sl = m.slot(c, k);
      if (isTargetRow(r) && sl + 1 == gaps[static_cast<std::size_t>(r - b)]) {
        best = std::max(best, 0.0);
      } else if (sl + 1 < s.prefix[static_cast<std::size_t>(r)]) {
        best = std::max(best, s.off[static_cast<std::size_t>(m.row(r).cells[static_cast<std::size_t>(sl + 1)])]);
      }
    }
    const double off = mc.w + best;
    s.off[static_cast<std::size_t>(c)] = off;
    for (int k = 0; k < mc.h; ++k) xLo = std::max(xLo, m.row(mc.row + k).lo + off);
  }
  for (int c : s.right) {
    const auto& mc = m.cells[static_cast<std::size_t>(c)];
    double best = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < mc.h; ++k) {
      const int r = mc.row + k;
      const int sl = m.slot(c, k);
      if (isTargetRow(r) && sl == gaps[static_cast<std::size_t>(r - b)]) {
        best = std::max(best, static_cast<double>(target.w));
      } else if (sl - 1 >= s.suffix[static_cast<std::size_t>(r)]) {
        const int e = m.row(r).cells[static_cast<std::size_t>(sl - 1)];
        best = std::max(best, s.off[static_cast<std::size_t>(e)] + m.cells[static_cast<std::size_t>(e)].w);
      }
    }
    s.off[static_cast<std::size_t>(c)] = best;
    for (int k = 0; k < mc.h; ++k) xHi = std::min(xHi, m.row(mc.row + k).hi - mc.w - best);
  }
  s.xLo = xLo;
  s.xHi = xHi;
  s.consistent = true;
  return true;
}

namespace {

void checkPlacementRows(const RegionModel& m, const Cell& target, double xt, int bottomRow) {
  if (!m.railCompatible(target.rail, bottomRow)) {
    throw Error(Errc::RailMismatch, "row " + std::to_string(bottomRow) + " does not match rail " +
                                        std::string(railName(target.rail)));
  }
  const int b = bottomRow - m.rowBase;
  if (b < 0 || b + target.h > m.numRows()) {
    throw Error(Errc::OutOfSegment, "rows outside the region at row " + std::to_string(bottomRow));
  }
  for (int k = 0; k < target.h; ++k) {
    const auto& row = m.row(b + k);
    if (!row.hasSegment || xt < row.lo || xt + target.w > row.hi) {
      throw Error(Errc::OutOfSegment, "target leaves the segment of row " + std::to_string(bottomRow + k));
    }
  }
}

}  // namespace

WorkingCopy trialInsert(const RegionModel& m, const Cell& target, double xt, int bottomRow, std::span<const int> gaps) {
  checkPlacementRows(m, target, xt, bottomRow);
  WorkingCopy copy;
  copy.model = &m;
  copy.target = target;
  copy.xt = xt;
  copy.bottomRow = bottomRow;
  copy.gaps.assign(gaps.begin(), gaps.end());
  if (!analyzeInsertion(m, target, bottomRow - m.rowBase, gaps, copy.closure)) {
    throw Error(Errc::InconsistentInsertion, "gaps put a cell on both sides of the target");
  }
  copy.pos.resize(m.cells.size());
  for (std::size_t i = 0; i < m.cells.size(); ++i) copy.pos[i] = m.cells[i].cur;
  return copy;
}

WorkingCopy trialInsert(const RegionModel& m, const Cell& target, double xt, int bottomRow) {
  checkPlacementRows(m, target, xt, bottomRow);
  const double centre = xt + target.w / 2.0;
  std::vector<int> gaps;
  for (int k = 0; k < target.h; ++k) {
    const auto& row = m.row(bottomRow - m.rowBase + k);
    int g = 0;
    for (int c : row.cells) {
      const auto& mc = m.cells[static_cast<std::size_t>(c)];
      if (mc.cur + mc.w / 2.0 < centre) ++g;
    }
    gaps.push_back(g);
  }
  return trialInsert(m, target, xt, bottomRow, gaps);
}

namespace {

[[noreturn]] void overflow(const ModelCell& c, int absRow) {
  throw Error(Errc::SegmentOverflow, "cell " + std::to_string(c.id) + " pushed out of row " + std::to_string(absRow));
}

void collectMoved(const WorkingCopy& copy, ShiftResult& out) {
  const auto& m = *copy.model;
  for (std::size_t i = 0; i < m.cells.size(); ++i) {
    if (copy.pos[i] != m.cells[i].cur) out.moved.push_back(m.cells[i].id);
  }
  std::sort(out.moved.begin(), out.moved.end());
}

}  // namespace

ShiftResult sacsShift(WorkingCopy& copy, Direction dir) {
  const auto& m = *copy.model;
  const auto& s = copy.closure;
  auto& pos = copy.pos;
  const int b = copy.bottomRel();
  const auto& t = copy.target;
  const int nr = m.numRows();
  ShiftResult res;
  res.passCount = 1;

  SegmentCursor cursor;
  cursor.csp.resize(static_cast<std::size_t>(nr));
  cursor.cse.resize(static_cast<std::size_t>(nr));

  if (dir == Direction::Left) {
    for (int r = 0; r < nr; ++r) {
      cursor.csp[static_cast<std::size_t>(r)] = s.prefix[static_cast<std::size_t>(r)] - 1;
      cursor.cse[static_cast<std::size_t>(r)] = cursor.csp[static_cast<std::size_t>(r)] < 0;
    }
    for (int k = 0; k < t.h; ++k) {
      const int g = copy.gaps[static_cast<std::size_t>(k)];
      if (g == 0) continue;
      const int c = m.row(b + k).cells[static_cast<std::size_t>(g - 1)];
      const double limit = copy.xt - m.cells[static_cast<std::size_t>(c)].w;
      if (pos[static_cast<std::size_t>(c)] > limit) pos[static_cast<std::size_t>(c)] = limit;
    }
    for (int c : s.left) {
      const auto& mc = m.cells[static_cast<std::size_t>(c)];
      const double pc = pos[static_cast<std::size_t>(c)];
      res.positions.emplace_back(mc.id, pc);
      const bool moved = pc < mc.cur;
      for (int k = 0; k < mc.h; ++k) {
        const int r = mc.row + k;
        if (pc < m.row(r).lo) overflow(mc, m.rowBase + r);
        auto& csp = cursor.csp[static_cast<std::size_t>(r)];
        if (moved && csp > 0) {
          const int l = m.row(r).cells[static_cast<std::size_t>(csp - 1)];
          const double limit = pc - m.cells[static_cast<std::size_t>(l)].w;
          if (pos[static_cast<std::size_t>(l)] > limit) pos[static_cast<std::size_t>(l)] = limit;
        }
        if (--csp < 0) cursor.cse[static_cast<std::size_t>(r)] = 1;
      }
    }
  } else {
    for (int r = 0; r < nr; ++r) {
      cursor.csp[static_cast<std::size_t>(r)] = s.suffix[static_cast<std::size_t>(r)];
      cursor.cse[static_cast<std::size_t>(r)] =
          cursor.csp[static_cast<std::size_t>(r)] >= static_cast<int>(m.row(r).cells.size());
    }
    for (int k = 0; k < t.h; ++k) {
      const auto& cells = m.row(b + k).cells;
      const int g = copy.gaps[static_cast<std::size_t>(k)];
      if (g == static_cast<int>(cells.size())) continue;
      const int c = cells[static_cast<std::size_t>(g)];
      const double limit = copy.xt + t.w;
      if (pos[static_cast<std::size_t>(c)] < limit) pos[static_cast<std::size_t>(c)] = limit;
    }
    for (int c : s.right) {
      const auto& mc = m.cells[static_cast<std::size_t>(c)];
      const double pc = pos[static_cast<std::size_t>(c)];
      res.positions.emplace_back(mc.id, pc);
      const bool moved = pc > mc.cur;
      for (int k = 0; k < mc.h; ++k) {
        const int r = mc.row + k;
        const auto& cells = m.row(r).cells;
        if (pc + mc.w > m.row(r).hi) overflow(mc, m.rowBase + r);
        auto& csp = cursor.csp[static_cast<std::size_t>(r)];
        if (moved && csp + 1 < static_cast<int>(cells.size())) {
          const int n = cells[static_cast<std::size_t>(csp + 1)];
          const double limit = pc + mc.w;
          if (pos[static_cast<std::size_t>(n)] < limit) pos[static_cast<std::size_t>(n)] = limit;
        }
        if (++csp >= static_cast<int>(cells.size())) cursor.cse[static_cast<std::size_t>(r)] = 1;
      }
    }
  }
  collectMoved(copy, res);
  return res;
}

ShiftResult multiPassShift(WorkingCopy& copy, Direction dir) {
  const auto& m = *copy.model;
  const auto& s = copy.closure;
  auto& pos = copy.pos;
  const int b = copy.bottomRel();
  const auto& t = copy.target;
  const int nr = m.numRows();
  auto isTargetRow = [&](int r) { return r >= b && r < b + t.h; };
  ShiftResult res;

  for (bool changed = true; changed;) {
    changed = false;
    ++res.passCount;
    for (int r = 0; r < nr; ++r) {
      const auto& cells = m.row(r).cells;
      if (dir == Direction::Left) {
        const int p = s.prefix[static_cast<std::size_t>(r)];
        for (int i = p - 1; i >= 0; --i) {
          double pusher;
          if (i == p - 1) {
            if (!isTargetRow(r)) continue;
            pusher = copy.xt;
          } else {
            pusher = pos[static_cast<std::size_t>(cells[static_cast<std::size_t>(i + 1)])];
          }
          const int c = cells[static_cast<std::size_t>(i)];
          const double limit = pusher - m.cells[static_cast<std::size_t>(c)].w;
          if (pos[static_cast<std::size_t>(c)] > limit) {
            pos[static_cast<std::size_t>(c)] = limit;
            changed = true;
          }
        }
      } else {
        const int q = s.suffix[static_cast<std::size_t>(r)];
        for (int i = q; i < static_cast<int>(cells.size()); ++i) {
          double limit;
          if (i == q) {
            if (!isTargetRow(r)) continue;
            limit = copy.xt + t.w;
          } else {
            const int e = cells[static_cast<std::size_t>(i - 1)];
            limit = pos[static_cast<std::size_t>(e)] + m.cells[static_cast<std::size_t>(e)].w;
          }
          const int c = cells[static_cast<std::size_t>(i)];
          if (pos[static_cast<std::size_t>(c)] < limit) {
            pos[static_cast<std::size_t>(c)] = limit;
            changed = true;
          }
        }
      }
    }
  }

  const auto& list = dir == Direction::Left ? s.left : s.right;
  for (int c : list) {
    const auto& mc = m.cells[static_cast<std::size_t>(c)];
    const double pc = pos[static_cast<std::size_t>(c)];
    for (int k = 0; k < mc.h; ++k) {
      const auto& row = m.row(mc.row + k);
      if (pc < row.lo || pc + mc.w > row.hi) overflow(mc, m.rowBase + mc.row + k);
    }
    res.positions.emplace_back(mc.id, pc);
  }
  collectMoved(copy, res);
  return res;
}

void shiftBoth(WorkingCopy& copy) {
  sacsShift(copy, Direction::Left);
  sacsShift(copy, Direction::Right);
}

double horizontalCost(const WorkingCopy& copy) {
  const auto& m = *copy.model;
  double v = std::abs(copy.xt - copy.target.gx);
  for (std::size_t i = 0; i < m.cells.size(); ++i) {
    const auto& c = m.cells[i];
    if (copy.pos[i] != c.cur) v += std::abs(copy.pos[i] - c.gx) - std::abs(c.cur - c.gx);
  }
  return v;
}

}  // namespace mchl
