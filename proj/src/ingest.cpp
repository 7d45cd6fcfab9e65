#include "mchl/ingest.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_set>
#include <vector>

namespace mchl {

namespace {

struct Token {
  std::string_view text;
  int column;
};

class LineParser {
 public:
  LineParser(int lineNo, std::vector<Token> tokens) : line_(lineNo), tokens_(std::move(tokens)) {}

  std::size_t size() const { return tokens_.size(); }
  const Token& at(std::size_t i) const { return tokens_[i]; }

  [[noreturn]] void fail(Errc code, std::size_t i, const std::string& what) const {
    const int col = i < tokens_.size() ? tokens_[i].column : (tokens_.empty() ? 1 : tokens_.back().column);
    throw ParseError(code, line_, col, what);
  }

  void expectCount(std::size_t lo, std::size_t hi, std::string_view keyword) const {
    if (tokens_.size() < lo || tokens_.size() > hi) {
      fail(Errc::SyntaxError, std::min(tokens_.size(), hi), std::string(keyword) + " expects " +
                                                             std::to_string(lo - 1) + " fields, got " +
                                                             std::to_string(tokens_.size() - 1));
    }
  }

  double real(std::size_t i) const {
    const auto t = tokens_[i].text;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
      fail(Errc::SyntaxError, i, "expected a number, got '" + std::string(t) + "'");
    }
    return v;
  }

  int integer(std::size_t i) const {
    const auto t = tokens_[i].text;
    int v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size()) {
      fail(Errc::SyntaxError, i, "expected an integer, got '" + std::string(t) + "'");
    }
    return v;
  }

  Rail rail(std::size_t i, bool allowAny) const {
    const auto t = tokens_[i].text;
    if (t == "P") return Rail::P;
    if (t == "G") return Rail::G;
    if (allowAny && t == "ANY") return Rail::Any;
    fail(Errc::SemanticError, i, "invalid rail token '" + std::string(t) + "'");
  }

 private:
  int line_;
  std::vector<Token> tokens_;
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == '#') break;
    if (line[i] == ' ' || line[i] == '\t' || line[i] == '\r') {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r' && line[j] != '#') ++j;
    out.push_back({line.substr(i, j - i), static_cast<int>(i) + 1});
    i = j;
  }
  return out;
}

}  // namespace

std::string formatReal(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

Placement parsePlacement(std::string_view text) {
  Placement p;
  bool haveGrid = false;
  std::vector<Blockage> blocks;
  std::unordered_set<std::string> names;
  int lineNo = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const auto raw = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++lineNo;
    LineParser lp(lineNo, tokenize(raw));
    if (lp.size() == 0) {
      if (eol == text.size()) break;
      continue;
    }
    const auto kw = lp.at(0).text;
    if (kw == "GRID") {
      if (haveGrid) lp.fail(Errc::SyntaxError, 0, "duplicate GRID line");
      lp.expectCount(6, 6, "GRID");
      p.grid.numRows = lp.integer(1);
      p.grid.rowHeight = lp.real(2);
      p.grid.siteWidth = lp.real(3);
      p.grid.numSites = lp.integer(4);
      p.grid.firstRail = lp.rail(5, false);
      if (p.grid.numRows <= 0) lp.fail(Errc::SemanticError, 1, "numRows must be positive");
      if (p.grid.rowHeight <= 0) lp.fail(Errc::SemanticError, 2, "rowHeight must be positive");
      if (p.grid.siteWidth <= 0) lp.fail(Errc::SemanticError, 3, "siteWidth must be positive");
      if (p.grid.numSites <= 0) lp.fail(Errc::SemanticError, 4, "numSites must be positive");
      haveGrid = true;
    } else if (kw == "BLOCK") {
      if (!haveGrid) lp.fail(Errc::SyntaxError, 0, "BLOCK before GRID");
      lp.expectCount(4, 4, "BLOCK");
      Blockage b{lp.integer(1), lp.integer(2), lp.integer(3)};
      if (b.row < 0 || b.row >= p.grid.numRows) lp.fail(Errc::SemanticError, 1, "blockage row out of range");
      if (b.start < 0 || b.end > p.grid.numSites || b.start >= b.end) {
        lp.fail(Errc::SemanticError, 2, "blockage sites out of range");
      }
      blocks.push_back(b);
    } else if (kw == "CELL") {
      if (!haveGrid) lp.fail(Errc::SyntaxError, 0, "CELL before GRID");
      if (lp.size() != 8 && lp.size() != 10) {
        lp.fail(Errc::SyntaxError, std::min<std::size_t>(lp.size(), 9),
                "CELL expects 7 or 9 fields, got " + std::to_string(lp.size() - 1));
      }
      Cell c;
      c.id = static_cast<CellId>(p.cells.size());
      c.name = std::string(lp.at(1).text);
      c.gx = snapToLattice(lp.real(2));
      c.gy = snapToLattice(lp.real(3));
      c.w = lp.integer(4);
      c.h = lp.integer(5);
      c.rail = lp.rail(6, true);
      const int fixed = lp.integer(7);
      if (c.w <= 0) lp.fail(Errc::SemanticError, 4, "cell width must be positive");
      if (c.h <= 0) lp.fail(Errc::SemanticError, 5, "cell height must be positive");
      if (fixed != 0 && fixed != 1) lp.fail(Errc::SemanticError, 7, "fixed flag must be 0 or 1");
      c.fixed = fixed == 1;
      if (!names.insert(c.name).second) lp.fail(Errc::DuplicateId, 1, "duplicate cell name '" + c.name + "'");
      if (c.fixed) {
        if (lp.size() == 10) lp.fail(Errc::SemanticError, 8, "fixed cells take no placed position");
        if (std::floor(c.gx) != c.gx || std::floor(c.gy) != c.gy) {
          lp.fail(Errc::SemanticError, 2, "fixed cell position must be integral");
        }
        c.cx = c.gx;
        c.cy = static_cast<int>(c.gy);
      } else if (lp.size() == 10) {
        c.cx = lp.real(8);
        c.cy = lp.integer(9);
        c.legalized = true;
      } else {
        c.cx = c.gx;
        c.cy = static_cast<int>(std::floor(c.gy));
      }
      p.cells.push_back(std::move(c));
    } else {
      lp.fail(Errc::SyntaxError, 0, "unknown keyword '" + std::string(kw) + "'");
    }
    if (eol == text.size()) break;
  }
  if (!haveGrid) throw ParseError(Errc::SyntaxError, lineNo, 1, "missing GRID line");
  p.grid.setBlockages(std::move(blocks));
  return p;
}

Placement readPlacementFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::SyntaxError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parsePlacement(ss.str());
}

std::string writePlacement(const Placement& p) {
  std::string out;
  const auto& g = p.grid;
  out += "GRID " + std::to_string(g.numRows) + " " + formatReal(g.rowHeight) + " " + formatReal(g.siteWidth) +
         " " + std::to_string(g.numSites) + " " + std::string(railName(g.firstRail)) + "\n";
  for (const auto& b : g.blockages()) {
    out += "BLOCK " + std::to_string(b.row) + " " + std::to_string(b.start) + " " + std::to_string(b.end) + "\n";
  }
  for (const auto& c : p.cells) {
    out += "CELL " + c.name + " " + formatReal(c.gx) + " " + formatReal(c.gy) + " " + std::to_string(c.w) + " " +
           std::to_string(c.h) + " " + std::string(railName(c.rail)) + " " + (c.fixed ? "1" : "0");
    if (!c.fixed && c.legalized) out += " " + formatReal(c.cx) + " " + std::to_string(c.cy);
    out += "\n";
  }
  return out;
}

void writePlacementFile(const Placement& p, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::SyntaxError, "cannot write " + path.string());
  out << writePlacement(p);
}

double measuredDensity(const Placement& p) {
  long long free = static_cast<long long>(p.grid.numRows) * p.grid.numSites;
  for (const auto& b : p.grid.blockages()) free -= b.end - b.start;
  long long area = 0;
  for (const auto& c : p.cells) {
    if (c.fixed) {
      free -= c.area();
    } else {
      area += c.area();
    }
  }
  return free > 0 ? static_cast<double>(area) / static_cast<double>(free) : 0.0;
}

}  // namespace mchl
