#include "mchl/legalizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <optional>
#include <unordered_map>

#include <json.hpp>

#include "mchl/ordering.hpp"
#include "mchl/thread_pool.hpp"

namespace mchl {

std::string reportToJson(const RunReport& r, bool includeRuntime) {
  nlohmann::json j;
  j["sam"] = r.sam;
  j["maxDisp"] = r.maxDisp;
  nlohmann::json per = nlohmann::json::object();
  for (const auto& [h, v] : r.perHeightSam) per[std::to_string(h)] = v;
  j["perHeightSam"] = per;
  j["runtimeMs"] = includeRuntime ? r.runtimeMs : 0.0;
  j["violations"] = r.violations;
  j["cellsLegalized"] = r.cellsLegalized;
  j["fallbacksUsed"] = r.fallbacksUsed;
  j["expansions"] = r.expansions;
  return j.dump(2) + "\n";
}

CommitResult commitInsertion(Placement& p, RowIndex& index, const RegionModel& model, CellId target,
                             const InsertionPoint& ip, double xStar) {
  const Cell t = p.cells[static_cast<std::size_t>(target)];
  SideClosure sc;
  if (!analyzeInsertionPoint(model, t, ip, sc)) {
    throw Error(Errc::InconsistentInsertion, "commit given an inconsistent insertion point");
  }
  const auto curves = buildDisplacementCurves(sc, model, t);

  // xLo and xHi are integral, so at least one neighbour of xStar is in range.
  const double lo = std::ceil(sc.xLo);
  const double hi = std::floor(sc.xHi);
  if (lo > hi) throw Error(Errc::SnapInfeasible, "no integer site in [xLo, xHi]");
  double xi = std::clamp(std::floor(xStar), lo, hi);
  const double up = std::clamp(std::ceil(xStar), lo, hi);
  if (up != xi) {
    const double vf = curves.evaluate(xi);
    const double vc = curves.evaluate(up);
    if (vc < vf || (vc == vf && std::abs(up - t.gx) < std::abs(xi - t.gx))) xi = up;
  }

  auto copy = trialInsert(model, t, xi, ip.bottomRow, ip.gaps);
  shiftBoth(copy);
  CommitResult res;
  res.x = static_cast<int>(xi);
  res.bottomRow = ip.bottomRow;
  for (std::size_t i = 0; i < model.cells.size(); ++i) {
    const double x = copy.pos[i];
    if (x == model.cells[i].cur) continue;
    if (std::floor(x) != x) throw Error(Errc::SnapInfeasible, "shifted cell left the site grid");
    p.cells[static_cast<std::size_t>(model.cells[i].id)].cx = x;
    res.moved.push_back(model.cells[i].id);
  }
  auto& c = p.cells[static_cast<std::size_t>(target)];
  c.cx = xi;
  c.cy = ip.bottomRow;
  c.legalized = true;
  index.insert(p, target);
  return res;
}

namespace {

std::vector<SiteRange> occupied(const Placement& p, const RowIndex& index, int row) {
  std::vector<SiteRange> out(p.grid.rowBlockages(row).begin(), p.grid.rowBlockages(row).end());
  for (CellId id : index.row(row)) {
    const auto& c = p.cells[static_cast<std::size_t>(id)];
    out.push_back({static_cast<int>(std::floor(c.cx)), static_cast<int>(std::ceil(c.right()))});
  }
  return out;
}

}  // namespace

bool greedyFallback(Placement& p, RowIndex& index, CellId target) {
  const auto& g = p.grid;
  auto& t = p.cells[static_cast<std::size_t>(target)];
  std::vector<int> rows;
  for (int r = 0; r + t.h <= g.numRows; ++r) {
    if (g.railCompatible(t.rail, r)) rows.push_back(r);
  }
  std::stable_sort(rows.begin(), rows.end(), [&](int a, int b) { return std::abs(a - t.gy) < std::abs(b - t.gy); });

  for (int r : rows) {
    std::vector<SiteRange> obs;
    for (int k = 0; k < t.h; ++k) {
      auto more = occupied(p, index, r + k);
      obs.insert(obs.end(), more.begin(), more.end());
    }
    std::sort(obs.begin(), obs.end());
    std::optional<int> best;
    auto consider = [&](int a, int b) {
      if (b - a < t.w) return;
      for (double cand : {std::floor(t.gx), std::ceil(t.gx)}) {
        const int x = std::clamp(static_cast<int>(cand), a, b - t.w);
        if (!best || std::abs(x - t.gx) < std::abs(*best - t.gx) ||
            (std::abs(x - t.gx) == std::abs(*best - t.gx) && x < *best)) {
          best = x;
        }
      }
    };
    int cursor = 0;
    for (const auto& o : obs) {
      if (o.lo > cursor) consider(cursor, o.lo);
      cursor = std::max(cursor, o.hi);
    }
    consider(cursor, g.numSites);
    if (best) {
      t.cx = *best;
      t.cy = r;
      t.legalized = true;
      index.insert(p, target);
      return true;
    }
  }
  return false;
}

LegalizeResult legalize(const Placement& input, const LegalizeConfig& cfg) {
  const auto started = std::chrono::steady_clock::now();
  Placement p = input;
  for (auto& c : p.cells) {
    if (!c.fixed) c.legalized = false;
  }
  p = preMove(std::move(p));
  RowIndex index(p);
  OrderState order = initialOrder(p, cfg.ws);
  std::unique_ptr<ThreadPool> pool;
  if (cfg.parallelism > 1) pool = std::make_unique<ThreadPool>(cfg.parallelism);

  struct CachedDensity {
    Window window;
    double density;
  };
  std::unordered_map<CellId, CachedDensity> cache;
  auto densityOf = [&](CellId id) {
    auto it = cache.find(id);
    if (it != cache.end()) return it->second.density;
    const Window w = buildWindow(p.cells[static_cast<std::size_t>(id)], p.grid, cfg.region);
    double d = 0.0;
    try {
      d = extractLocalRegion(p, index, w).density;
    } catch (const Error& e) {
      if (e.code() != Errc::EmptyRegion) throw;
    }
    cache.emplace(id, CachedDensity{w, d});
    return d;
  };

  RunReport report;
  while (!order.done()) {
    const CellId id = nextTarget(order, densityOf);
    cache.erase(id);
    const Cell target = p.cells[static_cast<std::size_t>(id)];
    Window w = buildWindow(target, p.grid, cfg.region);
    bool placed = false;
    for (;;) {
      try {
        const auto region = extractLocalRegion(p, index, w);
        const auto model = buildRegionModel(p, region);
        const auto best = findOptimalPosition(model, target, cfg.parallelism, pool.get());
        if (cfg.oracleCheck) {
          const auto oracle = positionalOracle(model, target, best.ip);
          const double expect = oracle.vStar + verticalCost(model, target, best.ip.bottomRow);
          const bool inArgmin = std::find(oracle.argmin.begin(), oracle.argmin.end(), best.xStar) != oracle.argmin.end();
          if (std::abs(expect - best.vStar) > 1e-9 * std::max(1.0, std::abs(expect)) || !inArgmin) {
            throw Error(Errc::OracleMismatch, "curve optimum disagrees with the positional oracle for cell " +
                                                  std::to_string(id));
          }
        }
        commitInsertion(p, index, model, id, best.ip, best.xStar);
        placed = true;
        break;
      } catch (const Error& e) {
        if (e.code() != Errc::EmptyRegion && e.code() != Errc::NoFeasiblePoint) throw;
      }
      try {
        w = expandWindow(w, target, p.grid, cfg.region);
        ++report.expansions;
      } catch (const Error& e) {
        if (e.code() != Errc::FallbackRequired) throw;
        break;
      }
    }
    if (!placed) {
      if (!greedyFallback(p, index, id)) {
        throw Error(Errc::Unlegalizable, "no free slot for cell " + target.name);
      }
      ++report.fallbacksUsed;
      cache.clear();
      continue;
    }
    std::erase_if(cache, [&](const auto& kv) { return kv.second.window.overlaps(w); });
  }

  if (p.movableCount() > 0) {
    const auto disp = averageDisplacement(p);
    report.sam = disp.sam;
    report.maxDisp = disp.maxDisp;
    report.perHeightSam = disp.perHeight;
  }
  report.violations = static_cast<long long>(checkLegal(p).size());
  for (const auto& c : p.cells) {
    if (!c.fixed && c.legalized) ++report.cellsLegalized;
  }
  report.runtimeMs =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  return {std::move(p), report};
}

}  // namespace mchl
