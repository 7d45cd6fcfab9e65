#include "mchl/svg.hpp"

#include "mchl/ingest.hpp"

namespace mchl {

namespace {

constexpr int kSitePx = 4;
constexpr int kRowPx = 10;

const char* heightColor(int h) {
  switch (h) {
    case 1: return "#4e79a7";
    case 2: return "#f28e2b";
    case 3: return "#59a14f";
    case 4: return "#e15759";
    default: return "#b07aa1";
  }
}

void rect(std::string& out, double x, double y, double w, double h, const char* fill, const std::string& extra = {}) {
  out += "<rect x=\"" + formatReal(x) + "\" y=\"" + formatReal(y) + "\" width=\"" + formatReal(w) + "\" height=\"" +
         formatReal(h) + "\" fill=\"" + fill + "\"" + extra + "/>\n";
}

std::string escapeXml(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

std::string renderSvg(const Placement& p) {
  const auto& g = p.grid;
  const int width = g.numSites * kSitePx;
  const int height = g.numRows * kRowPx;
  auto yOf = [&](int row, int h) { return static_cast<double>((g.numRows - row - h) * kRowPx); };

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<!-- 1 site = 4 px, 1 row = 10 px; h1 #4e79a7 h2 #f28e2b h3 #59a14f h4 #e15759 h5+ #b07aa1;"
         " fixed #555555; blockage #bbbbbb -->\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) + "\" height=\"" +
         std::to_string(height) + "\" viewBox=\"0 0 " + std::to_string(width) + " " + std::to_string(height) + "\">\n";
  out += "<g id=\"rows\">\n";
  for (int r = 0; r < g.numRows; ++r) {
    rect(out, 0, yOf(r, 1), width, kRowPx, g.railOf(r) == Rail::P ? "#f4f4f4" : "#e8e8e8");
  }
  out += "</g>\n<g id=\"blockages\">\n";
  for (const auto& b : g.blockages()) {
    rect(out, b.start * kSitePx, yOf(b.row, 1), (b.end - b.start) * kSitePx, kRowPx, "#bbbbbb");
  }
  out += "</g>\n<g id=\"cells\" stroke=\"#222222\" stroke-width=\"0.5\">\n";
  for (const auto& c : p.cells) {
    std::string extra = " data-name=\"" + escapeXml(c.name) + "\"";
    if (!c.fixed && !c.legalized) extra += " fill-opacity=\"0.5\" stroke-dasharray=\"2,1\"";
    rect(out, c.cx * kSitePx, yOf(c.cy, c.h), c.w * kSitePx, c.h * kRowPx, c.fixed ? "#555555" : heightColor(c.h),
         extra);
  }
  out += "</g>\n</svg>\n";
  return out;
}

}  // namespace mchl
