#include "mchl/core.hpp"

#include <algorithm>
#include <set>

namespace mchl {

std::string_view errcName(Errc code) {
  switch (code) {
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::SemanticError: return "SemanticError";
    case Errc::DuplicateId: return "DuplicateId";
    case Errc::InfeasibleSpec: return "InfeasibleSpec";
    case Errc::EmptyPlacement: return "EmptyPlacement";
    case Errc::NoLegalRow: return "NoLegalRow";
    case Errc::Exhausted: return "Exhausted";
    case Errc::EmptyRegion: return "EmptyRegion";
    case Errc::FallbackRequired: return "FallbackRequired";
    case Errc::OutOfSegment: return "OutOfSegment";
    case Errc::RailMismatch: return "RailMismatch";
    case Errc::InconsistentInsertion: return "InconsistentInsertion";
    case Errc::SegmentOverflow: return "SegmentOverflow";
    case Errc::EmptyCurve: return "EmptyCurve";
    case Errc::NoFeasiblePoint: return "NoFeasiblePoint";
    case Errc::SnapInfeasible: return "SnapInfeasible";
    case Errc::Unlegalizable: return "Unlegalizable";
    case Errc::OracleMismatch: return "OracleMismatch";
  }
  return "Unknown";
}

std::string_view railName(Rail r) {
  switch (r) {
    case Rail::P: return "P";
    case Rail::G: return "G";
    case Rail::Any: return "ANY";
  }
  return "?";
}

std::string_view violationName(ViolationKind k) {
  switch (k) {
    case ViolationKind::Overlap: return "overlap";
    case ViolationKind::OutOfBounds: return "out-of-bounds";
    case ViolationKind::NonIntegerSite: return "non-integer-site";
    case ViolationKind::RailMismatch: return "rail-mismatch";
    case ViolationKind::BlockageOverlap: return "blockage-overlap";
    case ViolationKind::Unplaced: return "unplaced";
  }
  return "?";
}

void SiteGrid::setBlockages(std::vector<Blockage> list) {
  for (const auto& b : list) {
    if (b.row < 0 || b.row >= numRows || b.start < 0 || b.end > numSites || b.start >= b.end) {
      throw Error(Errc::SemanticError, "blockage out of range: row " + std::to_string(b.row) + " [" +
                                           std::to_string(b.start) + "," + std::to_string(b.end) + ")");
    }
  }
  std::sort(list.begin(), list.end());
  blockages_.clear();
  for (const auto& b : list) {
    if (!blockages_.empty() && blockages_.back().row == b.row && b.start <= blockages_.back().end) {
      blockages_.back().end = std::max(blockages_.back().end, b.end);
    } else {
      blockages_.push_back(b);
    }
  }
  byRow_.assign(static_cast<std::size_t>(std::max(numRows, 0)), {});
  for (const auto& b : blockages_) byRow_[static_cast<std::size_t>(b.row)].push_back({b.start, b.end});
}

const std::vector<SiteRange>& SiteGrid::rowBlockages(int row) const {
  static const std::vector<SiteRange> kNone;
  if (row < 0 || static_cast<std::size_t>(row) >= byRow_.size()) return kNone;
  return byRow_[static_cast<std::size_t>(row)];
}

int Placement::maxHeight() const {
  int h = 0;
  for (const auto& c : cells) h = std::max(h, c.h);
  return h;
}

int Placement::movableCount() const {
  return static_cast<int>(std::count_if(cells.begin(), cells.end(), [](const Cell& c) { return !c.fixed; }));
}

RowIndex::RowIndex(const Placement& p) : rows_(static_cast<std::size_t>(p.grid.numRows)) {
  for (const auto& c : p.cells) {
    if (!(c.fixed || c.legalized)) continue;
    maxWidth_ = std::max(maxWidth_, c.w);
    for (int r = std::max(c.cy, 0); r < std::min(c.top(), p.grid.numRows); ++r) {
      rows_[static_cast<std::size_t>(r)].push_back(c.id);
    }
  }
  for (auto& row : rows_) {
    std::sort(row.begin(), row.end(), [&](CellId a, CellId b) {
      const auto& ca = p.cells[static_cast<std::size_t>(a)];
      const auto& cb = p.cells[static_cast<std::size_t>(b)];
      if (ca.cx != cb.cx) return ca.cx < cb.cx;
      return a < b;
    });
  }
}

void RowIndex::insert(const Placement& p, CellId id) {
  const auto& c = p.cells[static_cast<std::size_t>(id)];
  maxWidth_ = std::max(maxWidth_, c.w);
  for (int r = std::max(c.cy, 0); r < std::min(c.top(), static_cast<int>(rows_.size())); ++r) {
    auto& row = rows_[static_cast<std::size_t>(r)];
    auto it = std::lower_bound(row.begin(), row.end(), id, [&](CellId a, CellId) {
      const auto& ca = p.cells[static_cast<std::size_t>(a)];
      return ca.cx < c.cx || (ca.cx == c.cx && a < id);
    });
    row.insert(it, id);
  }
}

void RowIndex::query(const Placement& p, int r, double lo, double hi, std::vector<CellId>& out) const {
  if (r < 0 || r >= numRows()) return;
  const auto& row = rows_[static_cast<std::size_t>(r)];
  const double from = lo - maxWidth_;
  auto it = std::lower_bound(row.begin(), row.end(), from, [&](CellId a, double x) {
    return p.cells[static_cast<std::size_t>(a)].cx < x;
  });
  for (; it != row.end(); ++it) {
    const auto& c = p.cells[static_cast<std::size_t>(*it)];
    if (c.cx >= hi) break;
    if (c.right() > lo) out.push_back(*it);
  }
}

double manhattanDisplacement(const Cell& c, double unitRatio) {
  return std::abs(c.cx - c.gx) * unitRatio + std::abs(static_cast<double>(c.cy) - c.gy);
}

Displacement averageDisplacement(const Placement& p) {
  Displacement d;
  std::map<int, std::pair<double, int>> classes;
  int maxH = 0;
  const double ratio = p.grid.unitRatio();
  for (const auto& c : p.cells) {
    if (c.fixed) continue;
    const double delta = manhattanDisplacement(c, ratio);
    d.perCell[c.id] = delta;
    d.maxDisp = std::max(d.maxDisp, delta);
    auto& cls = classes[c.h];
    cls.first += delta;
    cls.second += 1;
    maxH = std::max(maxH, c.h);
  }
  if (classes.empty()) throw Error(Errc::EmptyPlacement, "no movable cells");
  double sum = 0.0;
  for (const auto& [h, cls] : classes) {
    const double mean = cls.first / cls.second;
    d.perHeight[h] = mean;
    sum += mean;
  }
  d.sam = sum / maxH;
  return d;
}

namespace {

bool isIntegral(double v) { return std::floor(v) == v; }

}  // namespace

std::vector<Violation> checkLegal(const Placement& p) {
  const auto& g = p.grid;
  std::set<Violation> found;
  std::vector<std::vector<CellId>> rows(static_cast<std::size_t>(std::max(g.numRows, 0)));

  for (const auto& c : p.cells) {
    if (!c.fixed && !c.legalized) {
      found.insert({ViolationKind::Unplaced, c.id, -1});
      continue;
    }
    if (c.cx < 0 || c.right() > g.numSites || c.cy < 0 || c.top() > g.numRows) {
      found.insert({ViolationKind::OutOfBounds, c.id, -1});
    }
    if (!isIntegral(c.cx)) found.insert({ViolationKind::NonIntegerSite, c.id, -1});
    if (!c.fixed && !g.railCompatible(c.rail, c.cy)) found.insert({ViolationKind::RailMismatch, c.id, -1});
    for (int r = std::max(c.cy, 0); r < std::min(c.top(), g.numRows); ++r) {
      rows[static_cast<std::size_t>(r)].push_back(c.id);
      for (const auto& b : g.rowBlockages(r)) {
        if (c.cx < b.hi && b.lo < c.right()) {
          found.insert({ViolationKind::BlockageOverlap, c.id, -1});
          break;
        }
      }
    }
  }

  // Row sweep: after sorting by left edge, every still-active span overlaps
  // the incoming one.
  std::vector<CellId> active;
  for (auto& row : rows) {
    std::sort(row.begin(), row.end(), [&](CellId a, CellId b) {
      const auto& ca = p.cells[static_cast<std::size_t>(a)];
      const auto& cb = p.cells[static_cast<std::size_t>(b)];
      if (ca.cx != cb.cx) return ca.cx < cb.cx;
      return a < b;
    });
    active.clear();
    for (CellId id : row) {
      const auto& c = p.cells[static_cast<std::size_t>(id)];
      std::erase_if(active, [&](CellId o) { return p.cells[static_cast<std::size_t>(o)].right() <= c.cx; });
      for (CellId o : active) found.insert({ViolationKind::Overlap, std::min(o, id), std::max(o, id)});
      active.push_back(id);
    }
  }
  return {found.begin(), found.end()};
}

}  // namespace mchl
