#include <doctest.h>

#include "mchl/ingest.hpp"
#include "support.hpp"

using namespace mchl;
namespace sp = mchl::support;

TEST_CASE("minimal file parses to one movable cell") {
  const auto p = parsePlacement("GRID 4 1.0 1.0 20 P\nCELL a 3.2 1.4 2 1 ANY 0\n");
  CHECK(p.grid.numRows == 4);
  CHECK(p.grid.numSites == 20);
  REQUIRE(p.cells.size() == 1);
  CHECK(p.movableCount() == 1);
  CHECK(p.cells[0].name == "a");
  CHECK(p.cells[0].w == 2);
  CHECK_FALSE(p.cells[0].legalized);
}

TEST_CASE("parse errors carry their kind and location") {
  auto codeOf = [](std::string_view text) {
    try {
      parsePlacement(text);
    } catch (const ParseError& e) {
      return e.code();
    }
    FAIL("expected a parse error");
    return Errc::SyntaxError;
  };
  CHECK(codeOf("GRID 4 1 1 20 P\nCELL a 0 0 2 0 ANY 0\n") == Errc::SemanticError);
  CHECK(codeOf("GRID 4 1 1 20 P\nCELL a 0 0 2 1 XYZ 0\n") == Errc::SemanticError);
  CHECK(codeOf("GRID 4 1 1 20 P\nBLOCK 9 0 2\n") == Errc::SemanticError);
  CHECK(codeOf("GRID 4 1 1 20 P\nCELL a 0 0 2 1 ANY 0\nCELL a 1 0 2 1 ANY 0\n") == Errc::DuplicateId);
  CHECK(codeOf("GRID 4 1 1 20 P\nCELL a zero 0 2 1 ANY 0\n") == Errc::SyntaxError);
  CHECK(codeOf("CELL a 0 0 2 1 ANY 0\n") == Errc::SyntaxError);
  CHECK(codeOf("") == Errc::SyntaxError);

  try {
    parsePlacement("# header\nGRID 4 1 1 20 P\nCELL a 0 0  -2 1 ANY 0\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 13);
  }
}

TEST_CASE("comments and blank lines are ignored") {
  const auto p = parsePlacement("# c\n\nGRID 2 2.0 0.5 10 G # trailing\n\nBLOCK 1 2 4\nCELL x 1 1 1 1 P 1\n");
  CHECK(p.grid.firstRail == Rail::G);
  CHECK(p.grid.blockages().size() == 1);
  CHECK(p.cells[0].fixed);
  CHECK(p.cells[0].cx == 1.0);
}

TEST_CASE("writer output for empty and single-cell placements") {
  Placement p;
  p.grid.numRows = 2;
  p.grid.numSites = 8;
  CHECK(writePlacement(p) == "GRID 2 1 1 8 P\n");
  Cell c;
  c.name = "a";
  c.gx = 1.5;
  c.gy = 0.25;
  c.cx = 2;
  c.cy = 0;
  c.w = 2;
  c.legalized = true;
  p.cells.push_back(c);
  CHECK(writePlacement(p) == "GRID 2 1 1 8 P\nCELL a 1.5 0.25 2 1 ANY 0 2 0\n");
}

TEST_CASE("write and parse round-trip legalized placements") {
  sp::Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    auto p = sp::randomLegalPlacement(rng, sp::uniformInt(rng, 2, 8), sp::uniformInt(rng, 10, 40),
                                      sp::uniformReal(rng, 0.2, 0.9), 4);
    if (i % 2 == 0) p.grid.setBlockages({{0, 0, 1}});
    const auto text = writePlacement(p);
    const auto back = parsePlacement(text);
    CHECK(back == p);
    CHECK(writePlacement(back) == text);
  }
}

TEST_CASE("synthetic generator is deterministic") {
  SyntheticSpec s;
  s.numCells = 500;
  s.heightMix = {{1, 0.7}, {2, 0.2}, {3, 0.1}};
  s.seed = 42;
  const auto a = generateSynthetic(s);
  const auto b = generateSynthetic(s);
  CHECK(writePlacement(a) == writePlacement(b));
  s.seed = 43;
  CHECK(writePlacement(generateSynthetic(s)) != writePlacement(a));
}

TEST_CASE("synthetic generator with zero cells gives an empty placement") {
  SyntheticSpec s;
  s.numCells = 0;
  CHECK(generateSynthetic(s).cells.empty());
}

TEST_CASE("synthetic density lands within two percent") {
  for (double d : {0.2, 0.5, 0.6, 0.9}) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      SyntheticSpec s;
      s.numCells = 2000;
      s.density = d;
      s.heightMix = {{1, 0.85}, {2, 0.1}, {3, 0.03}, {4, 0.02}};
      s.seed = seed;
      s.blockageFraction = seed == 3 ? 0.1 : 0.0;
      const auto p = generateSynthetic(s);
      CHECK(measuredDensity(p) >= d - 0.02);
      CHECK(measuredDensity(p) <= d + 0.02);
    }
  }
}

TEST_CASE("synthetic cells respect their rails and include every height") {
  SyntheticSpec s;
  s.numCells = 3000;
  s.heightMix = {{1, 0.4}, {2, 0.3}, {3, 0.2}, {4, 0.1}};
  const auto p = generateSynthetic(s);
  std::map<int, int> seen;
  for (const auto& c : p.cells) {
    ++seen[c.h];
    CHECK(c.w >= 1);
    CHECK(c.gx >= 0);
    CHECK(c.gx + c.w <= p.grid.numSites);
    if (c.h % 2 == 0) CHECK(c.rail != Rail::Any);
  }
  CHECK(seen.size() == 4);
}

TEST_CASE("synthetic generator rejects infeasible requests") {
  SyntheticSpec s;
  s.numCells = 100;
  s.numRows = 2;
  s.numSites = 10;
  CHECK_THROWS_AS(generateSynthetic(s), Error);
  s.numRows = 0;
  s.numSites = 0;
  s.density = 1.5;
  CHECK_THROWS_AS(generateSynthetic(s), Error);
  s.density = 0.5;
  s.heightMix = {{1, 0.5}};
  CHECK_THROWS_AS(generateSynthetic(s), Error);
}

TEST_CASE("formatReal round-trips") {
  for (double v : {0.0, 1.0, 0.1, 1.0 / 3.0, 123456.25, -7.5}) CHECK(std::stod(formatReal(v)) == v);
  CHECK(formatReal(2.0) == "2");
}
