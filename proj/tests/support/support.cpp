#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace mchl::support {

double uniformReal(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

int uniformInt(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

double quarter(Rng& rng, double lo, double hi) {
  const auto a = static_cast<long long>(std::ceil(lo * 4));
  const auto b = static_cast<long long>(std::floor(hi * 4));
  return static_cast<double>(std::uniform_int_distribution<long long>(a, std::max(a, b))(rng)) / 4.0;
}

std::vector<Violation> pairwiseViolations(const Placement& p) {
  const auto& g = p.grid;
  std::set<Violation> out;
  auto placed = [](const Cell& c) { return c.fixed || c.legalized; };
  for (const auto& c : p.cells) {
    if (!placed(c)) {
      out.insert({ViolationKind::Unplaced, c.id, -1});
      continue;
    }
    const double x0 = c.cx;
    const double x1 = c.cx + c.w;
    if (x0 < 0 || x1 > g.numSites || c.cy < 0 || c.cy + c.h > g.numRows) out.insert({ViolationKind::OutOfBounds, c.id, -1});
    if (x0 != std::round(x0)) out.insert({ViolationKind::NonIntegerSite, c.id, -1});
    if (!c.fixed && c.rail != Rail::Any) {
      const bool even = c.cy % 2 == 0;
      const Rail rowRail = even ? g.firstRail : (g.firstRail == Rail::P ? Rail::G : Rail::P);
      if (rowRail != c.rail) out.insert({ViolationKind::RailMismatch, c.id, -1});
    }
    for (const auto& b : g.blockages()) {
      if (b.row >= c.cy && b.row < c.cy + c.h && x0 < b.end && b.start < x1) {
        out.insert({ViolationKind::BlockageOverlap, c.id, -1});
      }
    }
  }
  for (std::size_t i = 0; i < p.cells.size(); ++i) {
    const auto& a = p.cells[i];
    if (!placed(a)) continue;
    for (std::size_t j = i + 1; j < p.cells.size(); ++j) {
      const auto& b = p.cells[j];
      if (!placed(b)) continue;
      const bool xs = a.cx < b.cx + b.w && b.cx < a.cx + a.w;
      const int r0 = std::max({a.cy, b.cy, 0});
      const int r1 = std::min({a.cy + a.h, b.cy + b.h, g.numRows});
      if (xs && r0 < r1) out.insert({ViolationKind::Overlap, a.id, b.id});
    }
  }
  return {out.begin(), out.end()};
}

double groupingSam(const Placement& p) {
  std::map<int, std::vector<double>> groups;
  int maxH = 0;
  for (const auto& c : p.cells) {
    if (c.fixed) continue;
    const double dx = std::abs(c.cx - c.gx) * p.grid.siteWidth / p.grid.rowHeight;
    const double dy = std::abs(c.cy - c.gy);
    groups[c.h].push_back(dx + dy);
    maxH = std::max(maxH, c.h);
  }
  double total = 0.0;
  for (const auto& [h, ds] : groups) {
    double s = 0.0;
    for (double d : ds) s += d;
    total += s / static_cast<double>(ds.size());
  }
  return maxH == 0 ? 0.0 : total / maxH;
}

int scanNearestRow(const Cell& c, const SiteGrid& grid) {
  int best = -1;
  double bestDist = 0.0;
  for (int r = 0; r + c.h <= grid.numRows; ++r) {
    if (c.rail != Rail::Any && grid.railOf(r) != c.rail) continue;
    const double d = std::abs(r - c.gy);
    if (best < 0 || d < bestDist) {
      best = r;
      bestDist = d;
    }
  }
  return best;
}

std::optional<SiteRange> scanLongestRun(int lo, int hi, const std::vector<SiteRange>& obstacles, int center) {
  std::vector<char> blocked(static_cast<std::size_t>(std::max(hi - lo, 0)), 0);
  for (const auto& o : obstacles) {
    for (int s = std::max(o.lo, lo); s < std::min(o.hi, hi); ++s) blocked[static_cast<std::size_t>(s - lo)] = 1;
  }
  std::vector<SiteRange> runs;
  for (int s = lo; s < hi;) {
    if (blocked[static_cast<std::size_t>(s - lo)]) {
      ++s;
      continue;
    }
    int e = s;
    while (e < hi && !blocked[static_cast<std::size_t>(e - lo)]) ++e;
    runs.push_back({s, e});
    s = e;
  }
  if (runs.empty()) return std::nullopt;
  auto dist = [&](const SiteRange& r) {
    if (center < r.lo) return r.lo - center;
    if (center >= r.hi) return center - r.hi + 1;
    return 0;
  };
  SiteRange best = runs.front();
  for (const auto& r : runs) {
    if (r.length() > best.length() || (r.length() == best.length() && dist(r) < dist(best))) best = r;
  }
  return best;
}

namespace {

constexpr int kTarget = -1;

// Per-row left-to-right sequence with the target spliced into its gaps.
std::vector<std::vector<int>> sequences(const RegionModel& m, const Cell& t, int bottomRow, const std::vector<int>& gaps) {
  std::vector<std::vector<int>> seq(static_cast<std::size_t>(m.numRows()));
  const int b = bottomRow - m.rowBase;
  for (int r = 0; r < m.numRows(); ++r) {
    const auto& cells = m.row(r).cells;
    auto& s = seq[static_cast<std::size_t>(r)];
    const bool targetRow = r >= b && r < b + t.h;
    const int g = targetRow ? gaps[static_cast<std::size_t>(r - b)] : -1;
    for (int i = 0; i <= static_cast<int>(cells.size()); ++i) {
      if (i == g) s.push_back(kTarget);
      if (i < static_cast<int>(cells.size())) s.push_back(cells[static_cast<std::size_t>(i)]);
    }
  }
  return seq;
}

void relax(const RegionModel& m, const Cell& t, double xt, const std::vector<std::vector<int>>& seq,
           std::vector<double>& pos, bool left) {
  auto at = [&](int c) { return c == kTarget ? xt : pos[static_cast<std::size_t>(c)]; };
  auto width = [&](int c) { return c == kTarget ? t.w : m.cells[static_cast<std::size_t>(c)].w; };
  for (int guard = 0; guard < 100000; ++guard) {
    bool changed = false;
    for (const auto& s : seq) {
      for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        const int u = s[i];
        const int v = s[i + 1];
        if (at(u) + width(u) <= at(v)) continue;
        if (left && u != kTarget) {
          pos[static_cast<std::size_t>(u)] = at(v) - width(u);
          changed = true;
        } else if (!left && v != kTarget) {
          pos[static_cast<std::size_t>(v)] = at(u) + width(u);
          changed = true;
        }
      }
    }
    if (!changed) return;
  }
}

void finishNaive(const RegionModel& m, const Cell& t, double xt, const std::vector<std::vector<int>>& seq,
                 NaiveShift& out, bool checkAll) {
  for (std::size_t c = 0; c < m.cells.size(); ++c) {
    const auto& mc = m.cells[c];
    for (int k = 0; k < mc.h; ++k) {
      const auto& row = m.row(mc.row + k);
      if (out.pos[c] < row.lo || out.pos[c] + mc.w > row.hi) out.overflow = true;
    }
  }
  if (!checkAll) return;
  for (const auto& s : seq) {
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
      const double pu = s[i] == kTarget ? xt : out.pos[static_cast<std::size_t>(s[i])];
      const double pv = s[i + 1] == kTarget ? xt : out.pos[static_cast<std::size_t>(s[i + 1])];
      const int wu = s[i] == kTarget ? t.w : m.cells[static_cast<std::size_t>(s[i])].w;
      if (pu + wu > pv) out.conflict = true;
    }
  }
}

}  // namespace

NaiveShift naivePhase(const RegionModel& m, const Cell& target, double xt, int bottomRow, const std::vector<int>& gaps,
                      bool left) {
  const auto seq = sequences(m, target, bottomRow, gaps);
  NaiveShift out;
  out.pos.resize(m.cells.size());
  for (std::size_t i = 0; i < m.cells.size(); ++i) out.pos[i] = m.cells[i].cur;
  relax(m, target, xt, seq, out.pos, left);
  finishNaive(m, target, xt, seq, out, false);
  return out;
}

NaiveShift naiveShift(const RegionModel& m, const Cell& target, double xt, int bottomRow, const std::vector<int>& gaps) {
  const auto seq = sequences(m, target, bottomRow, gaps);
  NaiveShift out;
  out.pos.resize(m.cells.size());
  for (std::size_t i = 0; i < m.cells.size(); ++i) out.pos[i] = m.cells[i].cur;
  relax(m, target, xt, seq, out.pos, true);
  const auto afterLeft = out.pos;
  relax(m, target, xt, seq, out.pos, false);
  for (std::size_t i = 0; i < m.cells.size(); ++i) {
    if (afterLeft[i] < m.cells[i].cur && out.pos[i] > afterLeft[i]) out.conflict = true;
  }
  finishNaive(m, target, xt, seq, out, true);
  return out;
}

Window wholeGrid(const SiteGrid& g) {
  Window w;
  w.rowLo = 0;
  w.rowHi = g.numRows - 1;
  w.siteLo = 0;
  w.siteHi = g.numSites;
  w.centerRow = g.numRows / 2;
  w.centerSite = g.numSites / 2;
  w.spanRows = g.numRows;
  w.spanSites = g.numSites;
  return w;
}

void finishInstance(Instance& inst) {
  inst.region = extractLocalRegion(inst.p, wholeGrid(inst.p.grid));
  inst.model = buildRegionModel(inst.p, inst.region);
}

namespace {

Cell makeCell(CellId id, std::string name, double x, int row, int w, int h, Rail rail = Rail::Any) {
  Cell c;
  c.id = id;
  c.name = std::move(name);
  c.gx = x;
  c.gy = row;
  c.cx = x;
  c.cy = row;
  c.w = w;
  c.h = h;
  c.rail = rail;
  c.legalized = true;
  return c;
}

Cell makeTarget(CellId id, double gx, double gy, int w, int h, Rail rail = Rail::Any) {
  Cell t = makeCell(id, "t", gx, static_cast<int>(std::floor(gy)), w, h, rail);
  t.gy = gy;
  t.legalized = false;
  return t;
}

SiteGrid unitGrid(int rows, int sites) {
  SiteGrid g;
  g.numRows = rows;
  g.numSites = sites;
  g.rowHeight = 1.0;
  g.siteWidth = 1.0;
  g.firstRail = Rail::P;
  return g;
}

}  // namespace

Instance abInstance() {
  Instance inst;
  inst.p.grid = unitGrid(1, 20);
  inst.p.cells.push_back(makeCell(0, "A", 4, 0, 3, 1));
  inst.p.cells.push_back(makeCell(1, "B", 8, 0, 3, 1));
  inst.p.cells.push_back(makeTarget(2, 6, 0, 4, 1));
  inst.target = 2;
  finishInstance(inst);
  return inst;
}

Instance fig5Instance() {
  Instance inst;
  inst.p.grid = unitGrid(3, 30);
  auto& cs = inst.p.cells;
  cs.push_back(makeCell(0, "a", 11, 0, 4, 1));
  cs.push_back(makeCell(1, "b", 0, 0, 2, 3));
  cs.push_back(makeCell(2, "c", 8, 1, 4, 2, Rail::G));
  cs.push_back(makeCell(3, "d", 12, 2, 3, 1));
  cs.push_back(makeCell(4, "e", 5, 1, 3, 1));
  cs.push_back(makeCell(5, "f", 8, 0, 3, 1));
  cs.push_back(makeTarget(6, 14, 0, 4, 3));
  inst.target = 6;
  finishInstance(inst);
  return inst;
}

namespace {

// Free-slot test against cells and blockages already placed.
bool fits(const Placement& p, int x, int row, int w, int h) {
  for (const auto& b : p.grid.blockages()) {
    if (b.row >= row && b.row < row + h && x < b.end && b.start < x + w) return false;
  }
  for (const auto& c : p.cells) {
    if (x < c.cx + c.w && c.cx < x + w && row < c.cy + c.h && c.cy < row + h) return false;
  }
  return true;
}

// Packs random cells until their area reaches `density` of the grid.
void packCells(Rng& rng, Placement& p, double density, int maxHeight, int maxWidth, double fixedChance) {
  const auto& g = p.grid;
  const double goal = density * g.numRows * g.numSites;
  double area = 0.0;
  for (int attempt = 0; attempt < 4000 && area < goal; ++attempt) {
    const int h = uniformInt(rng, 1, std::min(maxHeight, g.numRows));
    const int w = uniformInt(rng, 1, std::min(maxWidth, g.numSites));
    const int row = uniformInt(rng, 0, g.numRows - h);
    const int x = uniformInt(rng, 0, g.numSites - w);
    if (!fits(p, x, row, w, h)) continue;
    Rail rail = Rail::Any;
    if (h % 2 == 0 || uniformReal(rng, 0, 1) < 0.3) rail = g.railOf(row);
    const auto id = static_cast<CellId>(p.cells.size());
    Cell c = makeCell(id, "c" + std::to_string(id), x, row, w, h, rail);
    if (uniformReal(rng, 0, 1) < fixedChance) {
      c.fixed = true;
      c.legalized = false;
    } else {
      c.gx = x + quarter(rng, -3.0, 3.0);
      c.gy = row + quarter(rng, -0.75, 0.75);
    }
    p.cells.push_back(std::move(c));
    area += w * h;
  }
}

}  // namespace

Instance randomInstance(Rng& rng, const RegionSpec& spec) {
  Instance inst;
  auto& g = inst.p.grid;
  g.numRows = uniformInt(rng, spec.minRows, spec.maxRows);
  g.numSites = uniformInt(rng, spec.minSites, spec.maxSites);
  g.rowHeight = 2.0;
  g.siteWidth = 0.5;
  g.firstRail = uniformInt(rng, 0, 1) == 0 ? Rail::P : Rail::G;
  if (uniformReal(rng, 0, 1) < spec.blockageChance) {
    const int row = uniformInt(rng, 0, g.numRows - 1);
    const int start = uniformInt(rng, 0, g.numSites - 2);
    g.setBlockages({{row, start, std::min(g.numSites, start + uniformInt(rng, 1, 4))}});
  }
  const double density = uniformReal(rng, spec.minDensity, spec.maxDensity);
  packCells(rng, inst.p, density, spec.maxHeight, spec.maxWidth, 0.0);

  const int h = uniformInt(rng, 1, std::min(spec.maxHeight, g.numRows));
  const int w = uniformInt(rng, 1, std::min(spec.maxWidth, g.numSites));
  Rail rail = Rail::Any;
  if (h % 2 == 0 || uniformReal(rng, 0, 1) < 0.3) rail = uniformInt(rng, 0, 1) == 0 ? Rail::P : Rail::G;
  const auto id = static_cast<CellId>(inst.p.cells.size());
  inst.p.cells.push_back(makeTarget(id, quarter(rng, 0, g.numSites - w), quarter(rng, 0, g.numRows - h), w, h, rail));
  inst.target = id;
  finishInstance(inst);
  return inst;
}

Placement randomLegalPlacement(Rng& rng, int rows, int sites, double density, int maxHeight) {
  Placement p;
  p.grid = unitGrid(rows, sites);
  p.grid.rowHeight = 2.0;
  p.grid.siteWidth = 0.25;
  packCells(rng, p, density, maxHeight, 8, 0.1);
  for (auto& c : p.cells) {
    if (c.fixed) c.legalized = false;
  }
  return p;
}

DisplacementCurves randomCurves(Rng& rng) {
  DisplacementCurves dc;
  dc.xLo = quarter(rng, 0, 20);
  dc.xHi = dc.xLo + quarter(rng, 0, 20);
  dc.targetGx = quarter(rng, dc.xLo - 5, dc.xHi + 5);
  auto clamp = [&](double x) { return std::min(std::max(x, dc.xLo), dc.xHi); };
  dc.breakpoints.push_back({clamp(dc.targetGx), -1.0, 1.0});
  const int n = uniformInt(rng, 0, 12);
  for (int i = 0; i < n; ++i) {
    PushCurve pc;
    pc.left = uniformInt(rng, 0, 1) == 0;
    pc.cur = quarter(rng, dc.xLo - 10, dc.xHi + 10);
    pc.gx = pc.cur + quarter(rng, -6, 6);
    pc.off = uniformInt(rng, 1, 8) + (uniformInt(rng, 0, 3) == 0 ? quarter(rng, 0, 0.75) : 0.0);
    const double t = pc.left ? pc.cur + pc.off : pc.cur - pc.off;
    if (pc.left ? t <= dc.xLo : t >= dc.xHi) continue;
    dc.pushed.push_back(pc);
    const auto first = dc.breakpoints.size();
    appendBreakpoints(pc, dc.xLo, dc.xHi, dc.breakpoints);
    for (auto j = first; j < dc.breakpoints.size(); ++j) dc.breakpoints[j].x = clamp(dc.breakpoints[j].x);
  }
  return dc;
}

}  // namespace mchl::support
