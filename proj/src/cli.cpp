#include "mchl/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mchl/ingest.hpp"
#include "mchl/legalizer.hpp"
#include "mchl/svg.hpp"

namespace mchl {

std::map<int, double> parseHeightMix(std::string_view text) {
  std::map<int, double> mix;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    const auto item = text.substr(pos, comma - pos);
    const auto colon = item.find(':');
    int h = 0;
    double prob = 0.0;
    const bool ok = colon != std::string_view::npos &&
                    std::from_chars(item.data(), item.data() + colon, h).ptr == item.data() + colon &&
                    std::from_chars(item.data() + colon + 1, item.data() + item.size(), prob).ptr ==
                        item.data() + item.size();
    if (!ok || h < 1 || prob < 0.0) throw Error(Errc::SyntaxError, "bad height mix entry '" + std::string(item) + "'");
    mix[h] += prob;
    pos = comma + 1;
  }
  if (mix.empty()) throw Error(Errc::SyntaxError, "empty height mix");
  return mix;
}

std::map<int, double> defaultHeightMix() { return {{1, 0.85}, {2, 0.1}, {3, 0.03}, {4, 0.02}}; }

namespace {

struct ConfigFlags {
  LegalizeConfig cfg;

  void attach(CLI::App* app) {
    app->add_option("--window-rows", cfg.region.windowRows, "Window height in rows")->check(CLI::PositiveNumber);
    app->add_option("--window-sites", cfg.region.windowSites, "Window width in sites")->check(CLI::PositiveNumber);
    app->add_option("--ws", cfg.ws, "Sliding window size for target ordering")->check(CLI::Range(2, 1 << 20));
    app->add_option("--expand-factor", cfg.region.expandFactor, "Window growth factor")->check(CLI::Range(2, 64));
    app->add_option("--max-expand", cfg.region.maxExpand, "Expansions before the greedy fallback")
        ->check(CLI::NonNegativeNumber);
    app->add_option("--parallel-ip", cfg.parallelism, "Threads for insertion point evaluation")
        ->check(CLI::Range(1, 256));
    app->add_flag("--oracle-check", cfg.oracleCheck, "Cross-check every optimum with the positional oracle");
    app->add_option("--seed", cfg.seed, "Seed for synthetic instances");
  }
};

void writeText(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::SyntaxError, "cannot write " + path);
  f << text;
}

std::string violationLine(const Placement& p, const Violation& v) {
  std::string line(violationName(v.kind));
  line += " " + p.cells[static_cast<std::size_t>(v.a)].name;
  if (v.b >= 0) line += " " + p.cells[static_cast<std::size_t>(v.b)].name;
  return line;
}

int cmdLegalize(const std::string& in, const std::string& outPath, const std::string& reportPath,
                const LegalizeConfig& cfg, std::ostream& out) {
  const auto input = readPlacementFile(in);
  auto result = legalize(input, cfg);
  writePlacementFile(result.placement, outPath);
  const auto json = reportToJson(result.report);
  if (reportPath.empty()) {
    out << json;
  } else {
    writeText(reportPath, json);
  }
  return result.report.violations == 0 ? kExitOk : kExitViolations;
}

int cmdCheck(const std::string& in, std::ostream& out) {
  const auto p = readPlacementFile(in);
  const auto violations = checkLegal(p);
  for (const auto& v : violations) out << violationLine(p, v) << "\n";
  out << violations.size() << " violation" << (violations.size() == 1 ? "" : "s") << "\n";
  return violations.empty() ? kExitOk : kExitViolations;
}

int cmdStats(const std::string& in, std::ostream& out) {
  const auto p = readPlacementFile(in);
  nlohmann::json j;
  std::map<int, long long> heights;
  long long fixedCount = 0;
  long long legalized = 0;
  for (const auto& c : p.cells) {
    if (c.fixed) {
      ++fixedCount;
      continue;
    }
    ++heights[c.h];
    if (c.legalized) ++legalized;
  }
  long long blocked = 0;
  for (const auto& b : p.grid.blockages()) blocked += b.end - b.start;
  j["cells"] = p.cells.size();
  j["fixed"] = fixedCount;
  j["movable"] = static_cast<long long>(p.cells.size()) - fixedCount;
  j["legalized"] = legalized;
  j["rows"] = p.grid.numRows;
  j["sites"] = p.grid.numSites;
  j["blockedSites"] = blocked;
  j["density"] = measuredDensity(p);
  nlohmann::json hj = nlohmann::json::object();
  for (const auto& [h, n] : heights) hj[std::to_string(h)] = n;
  j["heights"] = hj;
  const long long movable = static_cast<long long>(p.cells.size()) - fixedCount;
  if (movable > 0 && legalized == movable) {
    const auto d = averageDisplacement(p);
    j["sam"] = d.sam;
    j["maxDisp"] = d.maxDisp;
  }
  out << j.dump(2) << "\n";
  return kExitOk;
}

int cmdSvg(const std::string& in, const std::string& outPath) {
  writeText(outPath, renderSvg(readPlacementFile(in)));
  return kExitOk;
}

std::vector<int> parseSizes(const std::string& text) {
  std::vector<int> sizes;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc() || ptr != item.data() + item.size() || v < 0) {
      throw Error(Errc::SyntaxError, "bad size '" + item + "'");
    }
    sizes.push_back(v);
  }
  if (sizes.empty()) throw Error(Errc::SyntaxError, "empty size list");
  return sizes;
}

int cmdBench(const std::string& sizesText, double density, const std::string& heights, const LegalizeConfig& cfg,
             std::ostream& out) {
  const auto sizes = parseSizes(sizesText);
  const auto mix = heights.empty() ? defaultHeightMix() : parseHeightMix(heights);
  out << std::left << std::setw(10) << "size" << std::setw(14) << "runtimeMs" << std::setw(12) << "sam"
      << "fallbacks\n";
  std::vector<double> logN;
  std::vector<double> logT;
  long long violations = 0;
  for (int n : sizes) {
    SyntheticSpec spec;
    spec.numCells = n;
    spec.density = density;
    spec.heightMix = mix;
    spec.seed = cfg.seed;
    const auto p = generateSynthetic(spec);
    const auto r = legalize(p, cfg);
    violations += r.report.violations;
    char sam[32];
    std::snprintf(sam, sizeof sam, "%.6f", r.report.sam);
    char ms[32];
    std::snprintf(ms, sizeof ms, "%.1f", r.report.runtimeMs);
    out << std::setw(10) << n << std::setw(14) << ms << std::setw(12) << sam << r.report.fallbacksUsed << "\n";
    if (n > 0 && r.report.runtimeMs > 0) {
      logN.push_back(std::log(static_cast<double>(n)));
      logT.push_back(std::log(r.report.runtimeMs));
    }
  }
  if (logN.size() >= 2) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < logN.size(); ++i) {
      mx += logN[i];
      my += logT[i];
    }
    mx /= static_cast<double>(logN.size());
    my /= static_cast<double>(logN.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < logN.size(); ++i) {
      sxy += (logN[i] - mx) * (logT[i] - my);
      sxx += (logN[i] - mx) * (logN[i] - mx);
    }
    char k[32];
    std::snprintf(k, sizeof k, "%.3f", sxx > 0 ? sxy / sxx : 0.0);
    out << "# runtime ~ n^k, k = " << k << "\n";
  }
  return violations == 0 ? kExitOk : kExitViolations;
}

int cmdGenerate(const SyntheticSpec& spec, const std::string& heights, const std::string& outPath) {
  SyntheticSpec s = spec;
  s.heightMix = heights.empty() ? defaultHeightMix() : parseHeightMix(heights);
  writePlacementFile(generateSynthetic(s), outPath);
  return kExitOk;
}

}  // namespace

int runCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mixed-cell-height standard-cell legalizer", args.empty() ? "mchl" : args[0]};
  app.require_subcommand(1);

  ConfigFlags legalizeFlags;
  std::string legalizeIn, legalizeOut, reportPath;
  auto* legalizeCmd = app.add_subcommand("legalize", "Legalize a placement file");
  legalizeCmd->add_option("input", legalizeIn, "Input placement")->required();
  legalizeCmd->add_option("-o,--output", legalizeOut, "Output placement")->required();
  legalizeCmd->add_option("--report", reportPath, "Write the JSON report here instead of stdout");
  legalizeFlags.attach(legalizeCmd);

  std::string checkIn;
  auto* checkCmd = app.add_subcommand("check", "List legality violations");
  checkCmd->add_option("input", checkIn, "Placement file")->required();

  std::string statsIn;
  auto* statsCmd = app.add_subcommand("stats", "Summarize a placement file");
  statsCmd->add_option("input", statsIn, "Placement file")->required();

  std::string svgIn, svgOut;
  auto* svgCmd = app.add_subcommand("svg", "Render a placement as SVG");
  svgCmd->add_option("input", svgIn, "Placement file")->required();
  svgCmd->add_option("-o,--output", svgOut, "Output SVG")->required();

  ConfigFlags benchFlags;
  std::string sizes = "10000,20000,40000,80000,160000";
  double benchDensity = 0.6;
  std::string benchHeights;
  auto* benchCmd = app.add_subcommand("bench", "Scaling table over synthetic instances");
  benchCmd->add_option("--sizes", sizes, "Comma-separated cell counts");
  benchCmd->add_option("--density", benchDensity, "Target density")->check(CLI::Range(0.0, 1.0));
  benchCmd->add_option("--heights", benchHeights, "Height mix, e.g. 1:0.9,2:0.1");
  benchFlags.attach(benchCmd);

  SyntheticSpec genSpec;
  std::string genHeights, genOut;
  auto* genCmd = app.add_subcommand("generate", "Write a synthetic placement");
  genCmd->add_option("--cells", genSpec.numCells, "Number of cells")->check(CLI::NonNegativeNumber);
  genCmd->add_option("--density", genSpec.density, "Target density")->check(CLI::Range(0.0, 1.0));
  genCmd->add_option("--heights", genHeights, "Height mix, e.g. 1:0.9,2:0.1");
  genCmd->add_option("--rows", genSpec.numRows, "Grid rows (0 derives the grid)");
  genCmd->add_option("--sites", genSpec.numSites, "Sites per row (0 derives the grid)");
  genCmd->add_option("--blockage", genSpec.blockageFraction, "Fraction of blocked sites");
  genCmd->add_option("--seed", genSpec.seed, "Random seed");
  genCmd->add_option("-o,--output", genOut, "Output placement")->required();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }

  try {
    if (*legalizeCmd) return cmdLegalize(legalizeIn, legalizeOut, reportPath, legalizeFlags.cfg, out);
    if (*checkCmd) return cmdCheck(checkIn, out);
    if (*statsCmd) return cmdStats(statsIn, out);
    if (*svgCmd) return cmdSvg(svgIn, svgOut);
    if (*benchCmd) return cmdBench(sizes, benchDensity, benchHeights, benchFlags.cfg, out);
    if (*genCmd) return cmdGenerate(genSpec, genHeights, genOut);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace mchl
