#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "mchl/ingest.hpp"

namespace mchl {

namespace {

void validate(const SyntheticSpec& s) {
  if (s.numCells < 0) throw Error(Errc::InfeasibleSpec, "numCells must be non-negative");
  if (!(s.density > 0.0 && s.density < 1.0)) throw Error(Errc::InfeasibleSpec, "density must lie in (0, 1)");
  if (!(s.blockageFraction >= 0.0 && s.blockageFraction < 0.9)) {
    throw Error(Errc::InfeasibleSpec, "blockageFraction must lie in [0, 0.9)");
  }
  double total = 0.0;
  for (const auto& [h, prob] : s.heightMix) {
    if (h < 1 || prob < 0.0) throw Error(Errc::InfeasibleSpec, "invalid height mix entry");
    total += prob;
  }
  if (s.heightMix.empty() || std::abs(total - 1.0) > 1e-9) {
    throw Error(Errc::InfeasibleSpec, "height mix probabilities must sum to 1");
  }
  if (s.meanWidth < 1.0) throw Error(Errc::InfeasibleSpec, "meanWidth must be at least 1");
  if ((s.numRows == 0) != (s.numSites == 0)) {
    throw Error(Errc::InfeasibleSpec, "numRows and numSites must be given together");
  }
}

long long blockedSites(const SiteGrid& g) {
  long long n = 0;
  for (const auto& b : g.blockages()) n += b.end - b.start;
  return n;
}

// Macro-like rectangles until the requested fraction of sites is covered.
std::vector<Blockage> placeBlockages(const SyntheticSpec& s, int rows, int sites, std::mt19937_64& rng) {
  std::vector<Blockage> out;
  if (s.blockageFraction <= 0.0) return out;
  const long long want = static_cast<long long>(s.blockageFraction * rows * sites);
  std::vector<std::vector<char>> used(static_cast<std::size_t>(rows), std::vector<char>(static_cast<std::size_t>(sites), 0));
  long long covered = 0;
  const int maxRectRows = std::max(1, std::min(8, rows / 4));
  const int maxRectSites = std::max(1, std::min(60, sites / 4));
  for (int attempt = 0; covered < want && attempt < 100000; ++attempt) {
    const int rh = std::uniform_int_distribution<int>(1, maxRectRows)(rng);
    const int rw = std::uniform_int_distribution<int>(1, maxRectSites)(rng);
    const int r0 = std::uniform_int_distribution<int>(0, rows - rh)(rng);
    const int s0 = std::uniform_int_distribution<int>(0, sites - rw)(rng);
    for (int r = r0; r < r0 + rh; ++r) {
      out.push_back({r, s0, s0 + rw});
      for (int x = s0; x < s0 + rw; ++x) {
        auto& u = used[static_cast<std::size_t>(r)][static_cast<std::size_t>(x)];
        if (!u) {
          u = 1;
          ++covered;
        }
      }
    }
  }
  return out;
}

}  // namespace

Placement generateSynthetic(const SyntheticSpec& s) {
  validate(s);
  std::mt19937_64 rng(s.seed);
  Placement p;
  p.grid.rowHeight = s.rowHeight;
  p.grid.siteWidth = s.siteWidth;
  p.grid.firstRail = Rail::P;

  std::vector<int> heightValue;
  std::vector<double> heightProb;
  for (const auto& [h, prob] : s.heightMix) {
    heightValue.push_back(h);
    heightProb.push_back(prob);
  }
  std::discrete_distribution<int> pickHeight(heightProb.begin(), heightProb.end());
  const int maxH = *std::max_element(heightValue.begin(), heightValue.end());

  const int wLo = std::max(1, static_cast<int>(std::lround(s.meanWidth * 0.5)));
  const int wHi = std::max(wLo, static_cast<int>(std::lround(s.meanWidth * 1.5)));
  std::uniform_int_distribution<int> pickWidth(wLo, wHi);

  p.cells.resize(static_cast<std::size_t>(s.numCells));
  long long area = 0;
  long long minArea = 0;
  for (int i = 0; i < s.numCells; ++i) {
    auto& c = p.cells[static_cast<std::size_t>(i)];
    c.id = i;
    c.name = "c" + std::to_string(i);
    c.h = heightValue[static_cast<std::size_t>(pickHeight(rng))];
    c.w = pickWidth(rng);
    // Odd-height cells can flip to match either rail; even-height ones cannot.
    c.rail = c.h % 2 == 1 ? Rail::Any : (std::uniform_int_distribution<int>(0, 1)(rng) ? Rail::P : Rail::G);
    area += c.area();
    minArea += c.h;
  }

  int rows = s.numRows;
  int sites = s.numSites;
  if (rows == 0) {
    const double gridArea = std::max(1.0, static_cast<double>(area) / s.density / (1.0 - s.blockageFraction));
    const double aspect = s.rowHeight / s.siteWidth;  // sites per row height
    rows = std::max(2 * maxH, static_cast<int>(std::lround(std::sqrt(gridArea / aspect))));
    sites = std::max(4 * wHi, static_cast<int>(std::ceil(gridArea / rows)));
  }
  if (rows < maxH) throw Error(Errc::InfeasibleSpec, "grid has fewer rows than the tallest cell");
  p.grid.numRows = rows;
  p.grid.numSites = sites;
  p.grid.setBlockages(placeBlockages(s, rows, sites, rng));

  const long long freeArea = static_cast<long long>(rows) * sites - blockedSites(p.grid);
  const long long want = static_cast<long long>(std::llround(s.density * static_cast<double>(freeArea)));
  if (s.numCells > 0 && (minArea > want || want > freeArea)) {
    throw Error(Errc::InfeasibleSpec, "requested cell area does not fit the free area");
  }

  // Rescale widths, then nudge single cells until the area hits the target.
  if (s.numCells > 0 && area != want) {
    const double scale = static_cast<double>(want) / static_cast<double>(area);
    const int wCap = std::max(1, sites / 4);
    area = 0;
    for (auto& c : p.cells) {
      c.w = std::clamp(static_cast<int>(std::lround(c.w * scale)), 1, wCap);
      area += c.area();
    }
    std::uniform_int_distribution<int> pickCell(0, s.numCells - 1);
    for (int guard = 0; area != want && guard < 50 * s.numCells + 1000; ++guard) {
      auto& c = p.cells[static_cast<std::size_t>(pickCell(rng))];
      if (area < want && area + c.h <= want && c.w < wCap) {
        ++c.w;
        area += c.h;
      } else if (area > want && c.w > 1) {
        --c.w;
        area -= c.h;
      } else if (area < want && want - area < maxH) {
        bool anyFits = false;
        for (auto& d : p.cells) {
          if (d.h <= want - area && d.w < wCap) {
            ++d.w;
            area += d.h;
            anyFits = true;
            break;
          }
        }
        if (!anyFits) break;
      }
    }
  }

  // Skyline packing: each cell goes to the lowest of a few sampled rail-legal rows.
  std::vector<double> fill(static_cast<std::size_t>(rows), 0.0);
  std::vector<int> order(static_cast<std::size_t>(s.numCells));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return p.cells[static_cast<std::size_t>(a)].h > p.cells[static_cast<std::size_t>(b)].h;
  });
  std::vector<double> packX(static_cast<std::size_t>(s.numCells), 0.0);
  std::vector<int> packY(static_cast<std::size_t>(s.numCells), 0);
  for (int id : order) {
    const auto& c = p.cells[static_cast<std::size_t>(id)];
    std::vector<int> candidates;
    for (int r = 0; r + c.h <= rows; ++r) {
      if (p.grid.railCompatible(c.rail, r)) candidates.push_back(r);
    }
    if (candidates.empty()) throw Error(Errc::InfeasibleSpec, "no rail-compatible row for height " + std::to_string(c.h));
    std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
    int bestRow = -1;
    double bestX = 0.0;
    for (int k = 0; k < 6; ++k) {
      const int r = candidates[pick(rng)];
      double x = 0.0;
      for (int j = r; j < r + c.h; ++j) x = std::max(x, fill[static_cast<std::size_t>(j)]);
      if (bestRow < 0 || x < bestX) {
        bestRow = r;
        bestX = x;
      }
    }
    for (int j = bestRow; j < bestRow + c.h; ++j) fill[static_cast<std::size_t>(j)] = bestX + c.w;
    packX[static_cast<std::size_t>(id)] = bestX;
    packY[static_cast<std::size_t>(id)] = bestRow;
  }

  const double packedWidth = std::max(1.0, *std::max_element(fill.begin(), fill.end()));
  const double spread = static_cast<double>(sites) / packedWidth;
  std::normal_distribution<double> noiseX(0.0, 1.5);
  std::normal_distribution<double> noiseY(0.0, 0.3);
  for (auto& c : p.cells) {
    const auto i = static_cast<std::size_t>(c.id);
    const double x = packX[i] * spread + noiseX(rng);
    const double y = packY[i] + noiseY(rng);
    c.gx = snapToLattice(std::clamp(x, 0.0, static_cast<double>(sites - c.w)));
    c.gy = snapToLattice(std::clamp(y, 0.0, static_cast<double>(rows - c.h)));
    c.cx = c.gx;
    c.cy = static_cast<int>(std::floor(c.gy));
  }
  return p;
}

}  // namespace mchl
