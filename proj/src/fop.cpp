#include "mchl/fop.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mchl/thread_pool.hpp"

namespace mchl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Enumerator {
  const RegionModel& m;
  const Cell& t;
  std::vector<InsertionPoint>& out;
  SideClosure scratch;
  std::vector<int> gaps;
  int bottom = 0;

  void dfs(int k, double lo, double hi) {
    if (k == t.h) {
      if (!analyzeInsertion(m, t, bottom, gaps, scratch)) return;
      const double xLo = std::max(scratch.xLo, lo);
      const double xHi = std::min(scratch.xHi, hi);
      if (xLo > xHi) return;
      InsertionPoint ip;
      ip.bottomRow = m.rowBase + bottom;
      ip.gaps = gaps;
      ip.xLo = xLo;
      ip.xHi = xHi;
      for (int j = 0; j < t.h; ++j) {
        const auto& row = m.row(bottom + j);
        const int g = gaps[static_cast<std::size_t>(j)];
        const int n = static_cast<int>(row.cells.size());
        InsertionInterval iv;
        iv.row = ip.bottomRow + j;
        if (g > 0) {
          const auto& c = m.cells[static_cast<std::size_t>(row.cells[static_cast<std::size_t>(g - 1)])];
          iv.lo = c.cur + c.w;
        } else {
          iv.lo = row.lo;
        }
        iv.hi = g < n ? m.cells[static_cast<std::size_t>(row.cells[static_cast<std::size_t>(g)])].cur : row.hi;
        ip.intervals.push_back(iv);
      }
      out.push_back(std::move(ip));
      return;
    }
    const auto& row = m.row(bottom + k);
    const auto& cells = row.cells;
    const int n = static_cast<int>(cells.size());
    const long long total = row.prefixW[static_cast<std::size_t>(n)];
    auto cellAt = [&](int g) -> const ModelCell& { return m.cells[static_cast<std::size_t>(cells[static_cast<std::size_t>(g)])]; };
    // Gap g is reachable only while the target footprint touches its current
    // whitespace [end of cells[g - 1], start of cells[g]].
    const auto first = std::partition_point(cells.begin(), cells.end(), [&](int c) {
      return m.cells[static_cast<std::size_t>(c)].cur < lo;
    });
    for (int g = static_cast<int>(first - cells.begin()); g <= n; ++g) {
      const double gapLo = g > 0 ? cellAt(g - 1).cur + cellAt(g - 1).w : row.lo;
      const double gapHi = g < n ? cellAt(g).cur : row.hi;
      if (gapLo - t.w > hi) break;
      // Chain-compressed bounds within this row alone.
      const double rlo = row.lo + static_cast<double>(row.prefixW[static_cast<std::size_t>(g)]);
      const double rhi = row.hi - t.w - static_cast<double>(total - row.prefixW[static_cast<std::size_t>(g)]);
      if (rlo > rhi) break;  // rhi - rlo is the same for every gap
      const double nlo = std::max({lo, rlo, gapLo - t.w});
      const double nhi = std::min({hi, rhi, gapHi});
      if (nlo > nhi) continue;
      gaps[static_cast<std::size_t>(k)] = g;
      dfs(k + 1, nlo, nhi);
    }
  }
};

double clampTo(double x, double lo, double hi) { return std::min(std::max(x, lo), hi); }

}  // namespace

bool analyzeInsertionPoint(const RegionModel& m, const Cell& target, const InsertionPoint& ip, SideClosure& out) {
  if (!analyzeInsertion(m, target, ip.bottomRow - m.rowBase, ip.gaps, out)) return false;
  out.xLo = ip.xLo;
  out.xHi = ip.xHi;
  return true;
}

std::vector<InsertionPoint> enumerateInsertionPoints(const RegionModel& m, const Cell& target) {
  std::vector<InsertionPoint> out;
  Enumerator e{m, target, out, {}, std::vector<int>(static_cast<std::size_t>(target.h), 0), 0};
  for (int b = 0; b + target.h <= m.numRows(); ++b) {
    if (!m.railCompatible(target.rail, m.rowBase + b)) continue;
    bool rowsOk = true;
    for (int k = 0; k < target.h && rowsOk; ++k) rowsOk = m.row(b + k).hasSegment;
    if (!rowsOk) continue;
    e.bottom = b;
    e.dfs(0, -kInf, kInf);
  }
  return out;
}

double DisplacementCurves::evaluate(double x) const {
  double v = std::abs(x - targetGx);
  for (const auto& c : pushed) {
    const double p = c.left ? std::min(c.cur, x - c.off) : std::max(c.cur, x + c.off);
    v += std::abs(p - c.gx) - std::abs(c.cur - c.gx);
  }
  return v;
}

void appendBreakpoints(const PushCurve& c, double xLo, double xHi, std::vector<Breakpoint>& out) {
  if (c.left) {
    const double t = c.cur + c.off;  // pushed for x < t
    const double k = c.gx + c.off;   // pushed position reaches gx at x = k
    if (t <= xLo) return;
    if (k >= t) {
      out.push_back({t, -1.0, 0.0});
    } else {
      out.push_back({k, -1.0, 1.0});
      out.push_back({t, 0.0, -1.0});
    }
  } else {
    const double t = c.cur - c.off;  // pushed for x > t
    const double k = c.gx - c.off;
    if (t >= xHi) return;
    if (k <= t) {
      out.push_back({t, 0.0, 1.0});
    } else {
      out.push_back({t, 1.0, 0.0});
      out.push_back({k, -1.0, 1.0});
    }
  }
}

namespace {

void buildCurvesInto(const SideClosure& s, const RegionModel& m, const Cell& target, DisplacementCurves& dc) {
  dc.pushed.clear();
  dc.breakpoints.clear();
  dc.xLo = s.xLo;
  dc.xHi = s.xHi;
  dc.targetGx = target.gx;
  dc.breakpoints.push_back({clampTo(target.gx, s.xLo, s.xHi), -1.0, 1.0});
  auto add = [&](int c, bool left) {
    const auto& mc = m.cells[static_cast<std::size_t>(c)];
    PushCurve pc{mc.cur, mc.gx, s.off[static_cast<std::size_t>(c)], left};
    const double t = left ? pc.cur + pc.off : pc.cur - pc.off;
    if (left ? t <= s.xLo : t >= s.xHi) return;
    dc.pushed.push_back(pc);
    const auto first = dc.breakpoints.size();
    appendBreakpoints(pc, s.xLo, s.xHi, dc.breakpoints);
    for (auto i = first; i < dc.breakpoints.size(); ++i) {
      dc.breakpoints[i].x = clampTo(dc.breakpoints[i].x, s.xLo, s.xHi);
    }
  };
  for (int c : s.left) add(c, true);
  for (int c : s.right) add(c, false);
}

}  // namespace

DisplacementCurves buildDisplacementCurves(const SideClosure& s, const RegionModel& m, const Cell& target) {
  DisplacementCurves dc;
  buildCurvesInto(s, m, target, dc);
  return dc;
}

DisplacementCurves buildDisplacementCurves(const WorkingCopy& copy, const InsertionPoint& ip) {
  (void)ip;
  return buildDisplacementCurves(copy.closure, *copy.model, copy.target);
}

std::vector<Breakpoint> sortBreakpoints(std::vector<Breakpoint> bps) {
  std::stable_sort(bps.begin(), bps.end(), [](const Breakpoint& a, const Breakpoint& b) { return a.x < b.x; });
  return bps;
}

std::vector<MergedBreakpoint> mergeBreakpoints(const std::vector<Breakpoint>& sorted) {
  std::vector<MergedBreakpoint> out;
  double prev = 0.0;
  for (const auto& b : sorted) {
    if (!out.empty() && b.x - prev <= kMergeEpsilon) {
      out.back().slopeL += b.slopeL;
      out.back().slopeR += b.slopeR;
    } else {
      MergedBreakpoint mb;
      mb.x = b.x;
      mb.slopeL = b.slopeL;
      mb.slopeR = b.slopeR;
      out.push_back(mb);
    }
    prev = b.x;
  }
  return out;
}

void sumSlopesR(std::vector<MergedBreakpoint>& merged) {
  double acc = 0.0;
  for (auto& mb : merged) {
    acc += mb.slopeR;
    mb.slopesRPrefix = acc;
  }
}

void sumSlopesL(std::vector<MergedBreakpoint>& merged) {
  double acc = 0.0;
  for (auto it = merged.rbegin(); it != merged.rend(); ++it) {
    acc += it->slopeL;
    it->slopesLSuffix = acc;
  }
}

Optimum calculateValue(std::vector<MergedBreakpoint>& merged, const DisplacementCurves& curves) {
  if (merged.empty()) throw Error(Errc::EmptyCurve, "no breakpoints to evaluate");
  merged[0].value = curves.evaluate(merged[0].x);
  Optimum best{merged[0].x, merged[0].value};
  for (std::size_t i = 0; i + 1 < merged.size(); ++i) {
    const double slope = merged[i].slopesRPrefix + merged[i + 1].slopesLSuffix;
    merged[i + 1].value = merged[i].value + slope * (merged[i + 1].x - merged[i].x);
    if (merged[i + 1].value < best.vStar) best = {merged[i + 1].x, merged[i + 1].value};
  }
  return best;
}

namespace {

void pipelineInputInto(const DisplacementCurves& curves, std::vector<Breakpoint>& bps) {
  bps.clear();
  bps.push_back({curves.xLo, 0.0, 0.0});
  bps.insert(bps.end(), curves.breakpoints.begin(), curves.breakpoints.end());
  bps.push_back({curves.xHi, 0.0, 0.0});
  std::stable_sort(bps.begin(), bps.end(), [](const Breakpoint& a, const Breakpoint& b) { return a.x < b.x; });
}

struct Forward {
  double x;
  double rPrefix;
  double vR;
};

Optimum fusedInto(const std::vector<Breakpoint>& sorted, const DisplacementCurves& curves, std::vector<Forward>& fwd) {
  if (sorted.empty()) throw Error(Errc::EmptyCurve, "no breakpoints to evaluate");

  // fwdtraverse: merge, right-slope prefix and vR in one sweep.
  fwd.clear();
  double prev = 0.0;
  for (const auto& b : sorted) {
    if (!fwd.empty() && b.x - prev <= kMergeEpsilon) {
      fwd.back().rPrefix += b.slopeR;
    } else if (fwd.empty()) {
      fwd.push_back({b.x, b.slopeR, 0.0});
    } else {
      const auto& f = fwd.back();
      fwd.push_back({b.x, f.rPrefix + b.slopeR, f.vR + f.rPrefix * (b.x - f.x)});
    }
    prev = b.x;
  }

  // bwdtraverse: merge again from the right, left-slope suffix, vL and v.
  const double vLast = curves.evaluate(fwd.back().x);
  const double vRLast = fwd.back().vR;
  Optimum best{0.0, kInf};
  std::size_t j = fwd.size();
  double lSuffix = 0.0;  // suffix sum through the group to the right
  double vL = 0.0;
  double groupL = 0.0;
  double nextX = 0.0;
  auto closeGroup = [&]() {
    --j;
    const auto& f = fwd[j];
    if (j + 1 < fwd.size()) vL += lSuffix * (nextX - f.x);
    lSuffix += groupL;
    const double v = vLast - (vRLast - f.vR) - vL;
    if (v <= best.vStar) best = {f.x, v};
    nextX = f.x;
    groupL = 0.0;
  };
  for (std::size_t i = sorted.size(); i-- > 0;) {
    groupL += sorted[i].slopeL;
    const bool groupEnds = i == 0 || sorted[i].x - sorted[i - 1].x > kMergeEpsilon;
    if (groupEnds) closeGroup();
  }
  return best;
}

}  // namespace

std::vector<Breakpoint> pipelineInput(const DisplacementCurves& curves) {
  std::vector<Breakpoint> bps;
  bps.reserve(curves.breakpoints.size() + 2);
  pipelineInputInto(curves, bps);
  return bps;
}

Optimum sixOpPipeline(const DisplacementCurves& curves) {
  auto merged = mergeBreakpoints(pipelineInput(curves));
  sumSlopesR(merged);
  sumSlopesL(merged);
  return calculateValue(merged, curves);
}

Optimum fusedForwardBackward(const std::vector<Breakpoint>& sorted, const DisplacementCurves& curves) {
  std::vector<Forward> fwd;
  fwd.reserve(sorted.size());
  return fusedInto(sorted, curves, fwd);
}

Optimum fusedPipeline(const DisplacementCurves& curves) { return fusedForwardBackward(pipelineInput(curves), curves); }

OracleResult positionalOracle(const RegionModel& m, const Cell& target, const InsertionPoint& ip) {
  SideClosure sc;
  if (!analyzeInsertionPoint(m, target, ip, sc)) {
    throw Error(Errc::InconsistentInsertion, "oracle given an inconsistent insertion point");
  }
  const auto curves = buildDisplacementCurves(sc, m, target);
  std::vector<double> xs;
  for (double x = ip.xLo; x <= ip.xHi; x += 0.25) xs.push_back(x);
  xs.push_back(ip.xHi);
  for (const auto& b : curves.breakpoints) xs.push_back(b.x);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  std::vector<double> values;
  values.reserve(xs.size());
  for (double x : xs) {
    auto copy = trialInsert(m, target, x, ip.bottomRow, ip.gaps);
    shiftBoth(copy);
    values.push_back(horizontalCost(copy));
  }
  OracleResult res;
  res.candidates = xs.size();
  res.vStar = *std::min_element(values.begin(), values.end());
  const double tol = 1e-9 * std::max(1.0, std::abs(res.vStar));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (values[i] - res.vStar <= tol) res.argmin.push_back(xs[i]);
  }
  return res;
}

double verticalCost(const RegionModel& m, const Cell& target, int bottomRow) {
  return std::abs(static_cast<double>(bottomRow) - target.gy) * m.verticalWeight;
}

namespace {

struct Candidate {
  double vStar = kInf;
  double xStar = 0.0;
  int bottomRow = 0;
  std::size_t index = 0;
  bool valid = false;
};

bool better(const Candidate& a, const Candidate& b) {
  if (!b.valid) return a.valid;
  if (!a.valid) return false;
  if (a.vStar != b.vStar) return a.vStar < b.vStar;
  if (a.xStar != b.xStar) return a.xStar < b.xStar;
  if (a.bottomRow != b.bottomRow) return a.bottomRow < b.bottomRow;
  return a.index < b.index;
}

Candidate evaluateRange(const RegionModel& m, const Cell& target, const std::vector<InsertionPoint>& ips,
                        std::size_t begin, std::size_t end) {
  Candidate best;
  SideClosure sc;
  DisplacementCurves curves;
  std::vector<Breakpoint> sorted;
  std::vector<Forward> fwd;
  for (std::size_t i = begin; i < end; ++i) {
    const auto& ip = ips[i];
    analyzeInsertionPoint(m, target, ip, sc);
    buildCurvesInto(sc, m, target, curves);
    pipelineInputInto(curves, sorted);
    const auto opt = fusedInto(sorted, curves, fwd);
    Candidate c{opt.vStar + verticalCost(m, target, ip.bottomRow), opt.xStar, ip.bottomRow, i, true};
    if (better(c, best)) best = c;
  }
  return best;
}

}  // namespace

BestInsertion findOptimalPosition(const RegionModel& m, const Cell& target, int parallelism, ThreadPool* pool) {
  auto ips = enumerateInsertionPoints(m, target);
  if (ips.empty()) throw Error(Errc::NoFeasiblePoint, "no feasible insertion point for cell " + std::to_string(target.id));

  Candidate best;
  const std::size_t n = ips.size();
  const auto workers = static_cast<std::size_t>(std::max(1, parallelism));
  if (pool != nullptr && workers > 1 && n >= 2 * workers) {
    const std::size_t chunks = std::min(n, workers * 4);
    std::vector<Candidate> partial(chunks);
    pool->run(chunks, [&](std::size_t c) {
      partial[c] = evaluateRange(m, target, ips, n * c / chunks, n * (c + 1) / chunks);
    });
    for (const auto& c : partial) {
      if (better(c, best)) best = c;
    }
  } else {
    best = evaluateRange(m, target, ips, 0, n);
  }
  BestInsertion out;
  out.ip = std::move(ips[best.index]);
  out.index = best.index;
  out.xStar = best.xStar;
  out.vStar = best.vStar;
  return out;
}

}  // namespace mchl
