// entmom: command-line front end for the moment-based entanglement toolkit.
//
// Exit codes: 0 ok, 2 parse error, 3 validation error, 4 usage/domain error,
// 5 no sign change in threshold search.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "entmom/entmom.hpp"

namespace {

using entmom::cli::ExitCode;

struct Range {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t steps = 0;
};

Range parse_range(const std::string& text, bool want_steps) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  const std::size_t expected = want_steps ? 3 : 2;
  if (parts.size() != expected)
    throw entmom::cli::UsageError("range '" + text + "' must look like " + (want_steps ? "A:B:STEPS" : "A:B"));
  Range r;
  try {
    std::size_t used = 0;
    r.lo = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw std::invalid_argument(parts[0]);
    r.hi = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument(parts[1]);
    if (want_steps) {
      const long long steps = std::stoll(parts[2], &used);
      if (used != parts[2].size() || steps < 1) throw std::invalid_argument(parts[2]);
      r.steps = static_cast<std::size_t>(steps);
    }
  } catch (const std::logic_error&) {
    throw entmom::cli::UsageError("cannot read range '" + text + "'");
  }
  return r;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw entmom::cli::UsageError("cannot write '" + path + "'");
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Moment-based entanglement criteria, bounds and measures"};
  app.require_subcommand(1);

  std::string state_path, out_path, family, range_text, columns_text, statistic, format = "csv";
  std::uint64_t seed = 0;
  double tol = 1e-6;
  bool roof = false;
  std::size_t roof_restarts = 16;

  auto* analyze = app.add_subcommand("analyze", "Run every criterion and measure on a state file");
  analyze->add_option("state", state_path, "JSON state file")->required();
  analyze->add_option("--out", out_path, "Output path (default stdout)");
  analyze->add_flag("--roof", roof, "Add a convex-roof upper-bound estimate");
  analyze->add_option("--roof-restarts", roof_restarts, "Restarts for the roof estimator");
  analyze->add_option("--seed", seed, "Seed for the roof estimator");

  auto* scan = app.add_subcommand("scan", "Tabulate statistics over a one-parameter family");
  scan->add_option("--family", family, "Family name")->required();
  scan->add_option("--range", range_text, "A:B:STEPS")->required();
  scan->add_option("--columns", columns_text, "Comma-separated column list");
  scan->add_option("--seed", seed, "Seed (roof column only)");
  scan->add_option("--out", out_path, "Output path (default stdout)");
  scan->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  scan->add_flag("--roof", roof, "Enable the roof_estimate column");
  scan->add_option("--roof-restarts", roof_restarts, "Restarts for the roof estimator");

  auto* thresh = app.add_subcommand("threshold", "Bisect for the parameter where a verdict flips");
  thresh->add_option("--family", family, "Family name")->required();
  thresh->add_option("--statistic", statistic,
                     "theorem1, theorem2, realignment, ppt or conc_lower_bound")->required();
  thresh->add_option("--range", range_text, "Search interval A:B")->required();
  thresh->add_option("--tol", tol, "Bracket width at which to stop");
  thresh->add_option("--out", out_path, "Output path (default stdout)");

  app.add_subcommand("families", "List the built-in states and families");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return ExitCode::kUsage;
  }

  try {
    if (analyze->parsed()) {
      const auto state = entmom::io::load_state(state_path);
      entmom::cli::AnalyzeOptions opt;
      opt.roof = roof;
      opt.roof_restarts = roof_restarts;
      opt.seed = seed;
      emit(entmom::cli::analyze_document(state, opt).dump(2) + "\n", out_path);
    } else if (scan->parsed()) {
      const Range r = parse_range(range_text, true);
      entmom::cli::ScanOptions opt;
      opt.family = family;
      opt.lo = r.lo;
      opt.hi = r.hi;
      opt.steps = r.steps;
      opt.columns = split_list(columns_text);
      opt.seed = seed;
      opt.roof = {roof, roof_restarts};
      const auto result = entmom::cli::scan(opt);
      emit(format == "json" ? entmom::cli::to_json(result).dump(2) + "\n" : entmom::cli::to_csv(result), out_path);
    } else if (thresh->parsed()) {
      const Range r = parse_range(range_text, false);
      const auto result = entmom::cli::threshold(family, statistic, r.lo, r.hi, tol);
      emit(entmom::cli::to_json(result, family, statistic).dump(2) + "\n", out_path);
    } else {
      std::cout << entmom::cli::families_listing();
    }
  } catch (const entmom::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return ExitCode::kParse;
  } catch (const entmom::ValidationError& e) {
    std::cerr << "validation error: " << e.invariant() << ": " << e.what() << '\n';
    return ExitCode::kValidation;
  } catch (const entmom::ShapeError& e) {
    std::cerr << "validation error: shape: " << e.what() << '\n';
    return ExitCode::kValidation;
  } catch (const entmom::cli::NoRootError& e) {
    std::cerr << "no root: " << e.what() << '\n';
    return ExitCode::kNoRoot;
  } catch (const entmom::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return ExitCode::kUsage;
  }
  return ExitCode::kOk;
}
