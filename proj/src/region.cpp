#include "mchl/region.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace mchl {

namespace {

Window makeWindow(const Cell& t, const SiteGrid& g, int spanRows, int spanSites) {
  Window w;
  w.centerRow = t.cy;
  w.centerSite = static_cast<int>(std::floor(t.cx));
  w.spanRows = spanRows;
  w.spanSites = spanSites;
  w.rowLo = w.centerRow - spanRows / 2;
  w.rowHi = w.rowLo + spanRows;
  w.siteLo = w.centerSite - spanSites / 2;
  w.siteHi = w.siteLo + spanSites;
  w.rowLo = std::min(w.rowLo, t.cy);
  w.rowHi = std::max(w.rowHi, t.cy + t.h - 1);
  w.siteLo = std::min(w.siteLo, static_cast<int>(std::floor(t.cx)));
  w.siteHi = std::max(w.siteHi, static_cast<int>(std::ceil(t.cx + t.w)));
  w.rowLo = std::max(w.rowLo, 0);
  w.rowHi = std::min(w.rowHi, g.numRows - 1);
  w.siteLo = std::max(w.siteLo, 0);
  w.siteHi = std::min(w.siteHi, g.numSites);
  return w;
}

}  // namespace

Window buildWindow(const Cell& target, const SiteGrid& grid, const RegionConfig& cfg) {
  return makeWindow(target, grid, cfg.windowRows, cfg.windowSites);
}

Window expandWindow(const Window& w, const Cell& target, const SiteGrid& grid, const RegionConfig& cfg) {
  if (w.expansions >= cfg.maxExpand) {
    throw Error(Errc::FallbackRequired, "window expanded " + std::to_string(w.expansions) + " times");
  }
  const long long rows = std::min<long long>(static_cast<long long>(w.spanRows) * cfg.expandFactor, 2LL * grid.numRows);
  const long long sites =
      std::min<long long>(static_cast<long long>(w.spanSites) * cfg.expandFactor, 2LL * grid.numSites);
  Window out = makeWindow(target, grid, static_cast<int>(rows), static_cast<int>(sites));
  out.expansions = w.expansions + 1;
  return out;
}

const LocalSegment* LocalRegion::segmentOf(int row) const {
  auto it = std::lower_bound(segments.begin(), segments.end(), row,
                             [](const LocalSegment& s, int r) { return s.row < r; });
  return it != segments.end() && it->row == row ? &*it : nullptr;
}

LocalSegment* LocalRegion::segmentOf(int row) {
  return const_cast<LocalSegment*>(std::as_const(*this).segmentOf(row));
}

std::optional<SiteRange> longestFreeRun(int lo, int hi, std::vector<SiteRange> obstacles, int center) {
  std::sort(obstacles.begin(), obstacles.end());
  std::optional<SiteRange> best;
  int bestDist = 0;
  auto consider = [&](int a, int b) {
    if (b <= a) return;
    const int dist = center < a ? a - center : (center >= b ? center - b + 1 : 0);
    if (!best || b - a > best->length() || (b - a == best->length() && dist < bestDist)) {
      best = SiteRange{a, b};
      bestDist = dist;
    }
  };
  int cursor = lo;
  for (const auto& o : obstacles) {
    if (o.hi <= cursor) continue;
    if (o.lo >= hi) break;
    consider(cursor, std::min(o.lo, hi));
    cursor = std::max(cursor, o.hi);
    if (cursor >= hi) break;
  }
  consider(cursor, hi);
  return best;
}

LocalRegion extractLocalRegion(const Placement& p, const RowIndex& index, const Window& w) {
  const auto& g = p.grid;
  const int nRows = w.numRows();
  LocalRegion region;
  region.window = w;

  std::vector<std::vector<SiteRange>> obstacles(static_cast<std::size_t>(nRows));
  std::vector<CellId> candidates;
  std::vector<CellId> hits;
  for (int r = w.rowLo; r <= w.rowHi; ++r) {
    auto& obs = obstacles[static_cast<std::size_t>(r - w.rowLo)];
    for (const auto& b : g.rowBlockages(r)) {
      if (b.hi > w.siteLo && b.lo < w.siteHi) obs.push_back(b);
    }
    hits.clear();
    index.query(p, r, w.siteLo, w.siteHi, hits);
    for (CellId id : hits) {
      const auto& c = p.cells[static_cast<std::size_t>(id)];
      const bool inside = !c.fixed && c.cx >= w.siteLo && c.right() <= w.siteHi && c.cy >= w.rowLo &&
                          c.top() - 1 <= w.rowHi;
      if (inside) {
        if (r == std::max(c.cy, w.rowLo)) candidates.push_back(id);
      } else {
        obs.push_back({static_cast<int>(std::floor(c.cx)), static_cast<int>(std::ceil(c.right()))});
      }
    }
  }
  std::sort(candidates.begin(), candidates.end());

  // Candidates that miss the segment of any of their rows turn into obstacles,
  // which can shorten other segments; repeat until nothing changes.
  std::vector<std::optional<SiteRange>> seg(static_cast<std::size_t>(nRows));
  std::vector<char> demoted(candidates.size(), 0);
  for (bool changed = true; changed;) {
    changed = false;
    for (int k = 0; k < nRows; ++k) {
      seg[static_cast<std::size_t>(k)] =
          longestFreeRun(w.siteLo, w.siteHi, obstacles[static_cast<std::size_t>(k)], w.centerSite);
    }
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (demoted[i]) continue;
      const auto& c = p.cells[static_cast<std::size_t>(candidates[i])];
      bool contained = true;
      for (int r = c.cy; r < c.top() && contained; ++r) {
        const auto& s = seg[static_cast<std::size_t>(r - w.rowLo)];
        contained = s && s->lo <= c.cx && c.right() <= s->hi;
      }
      if (contained) continue;
      demoted[i] = 1;
      changed = true;
      for (int r = c.cy; r < c.top(); ++r) {
        obstacles[static_cast<std::size_t>(r - w.rowLo)].push_back(
            {static_cast<int>(std::floor(c.cx)), static_cast<int>(std::ceil(c.right()))});
      }
    }
  }

  long long segArea = 0;
  for (int k = 0; k < nRows; ++k) {
    const auto& s = seg[static_cast<std::size_t>(k)];
    if (!s) continue;
    region.segments.push_back({w.rowLo + k, s->lo, s->hi, {}});
    segArea += s->length();
  }
  if (region.segments.empty()) throw Error(Errc::EmptyRegion, "window has no free sites");

  long long cellArea = 0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (demoted[i]) continue;
    const CellId id = candidates[i];
    const auto& c = p.cells[static_cast<std::size_t>(id)];
    region.localCells.push_back(id);
    cellArea += c.area();
    for (int r = c.cy; r < c.top(); ++r) {
      region.segmentOf(r)->cellsLR.push_back(id);
    }
  }
  for (auto& s : region.segments) {
    std::sort(s.cellsLR.begin(), s.cellsLR.end(), [&](CellId a, CellId b) {
      const auto& ca = p.cells[static_cast<std::size_t>(a)];
      const auto& cb = p.cells[static_cast<std::size_t>(b)];
      return ca.cx != cb.cx ? ca.cx < cb.cx : a < b;
    });
  }
  region.density = static_cast<double>(cellArea) / static_cast<double>(segArea);
  return region;
}

LocalRegion extractLocalRegion(const Placement& p, const Window& w) {
  return extractLocalRegion(p, RowIndex(p), w);
}

}  // namespace mchl
