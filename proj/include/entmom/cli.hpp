#pragma once

// Library side of the command-line tool: parameter scans, threshold
// bisection, family listing and single-state analysis documents.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "entmom/convexroof.hpp"
#include "entmom/criteria.hpp"
#include "entmom/errors.hpp"
#include "entmom/families.hpp"
#include "entmom/io.hpp"
#include "entmom/measures.hpp"
#include "entmom/moments.hpp"
#include "entmom/random.hpp"

namespace entmom::cli {

using nlohmann::json;

class UsageError : public Error {
 public:
  using Error::Error;
};

class NoRootError : public Error {
 public:
  using Error::Error;
};

enum ExitCode : int { kOk = 0, kParse = 2, kValidation = 3, kUsage = 4, kNoRoot = 5 };

inline const std::vector<std::string>& all_columns() {
  static const std::vector<std::string> cols = {
      "param", "Q", "rA_norm_excess", "pt_norm_excess", "M1", "M2", "conc_lower_bound",
      "emmrs_direct", "gte_direct", "gme_conc", "conc_fill", "roof_estimate"};
  return cols;
}

inline std::vector<std::string> default_columns(const FamilyInfo& info, bool roof) {
  std::vector<std::string> cols;
  if (info.dims.size() == 3) cols = {"param", "gte_direct", "gme_conc", "conc_fill"};
  else cols = {"param", "Q", "rA_norm_excess", "pt_norm_excess", "M1", "M2", "conc_lower_bound", "emmrs_direct"};
  if (roof) cols.push_back("roof_estimate");
  return cols;
}

inline bool column_applies(std::string_view col, std::size_t parties) {
  if (col == "param" || col == "roof_estimate") return true;
  if (col == "gte_direct" || col == "gme_conc" || col == "conc_fill") return parties == 3;
  return parties == 2;
}

struct RoofSettings {
  bool enabled = false;
  std::size_t restarts = 16;
};

// Values of the named columns for one state. Shared by scan rows and the
// analyze document so the two agree exactly.
inline std::vector<double> evaluate_columns(const DensityMatrix& rho, double param,
                                            const std::vector<std::string>& columns, std::uint64_t row_seed,
                                            const RoofSettings& roof) {
  std::optional<ConcurrenceBound> bound;
  auto lower = [&]() -> const ConcurrenceBound& {
    if (!bound) bound = concurrence_lower_bound(rho);
    return *bound;
  };
  std::vector<double> out;
  out.reserve(columns.size());
  for (const auto& c : columns) {
    if (!column_applies(c, rho.parties()))
      throw UsageError("column '" + c + "' does not apply to a " + std::to_string(rho.parties()) + "-party state");
    if (c == "param") out.push_back(param);
    else if (c == "Q") out.push_back(q_statistic(rho));
    else if (c == "rA_norm_excess") out.push_back(trace_norm(realign(rho)) - 1.0);
    else if (c == "pt_norm_excess") out.push_back(trace_norm(partial_transpose(rho)) - 1.0);
    else if (c == "M1") out.push_back(lower().m1);
    else if (c == "M2") out.push_back(lower().m2);
    else if (c == "conc_lower_bound") out.push_back(lower().bound);
    else if (c == "emmrs_direct") out.push_back(emmrs_direct(rho).value);
    else if (c == "gte_direct") out.push_back(gte_emmrs_direct(rho).value);
    else if (c == "gme_conc") out.push_back(gme_concurrence_direct(rho).value);
    else if (c == "conc_fill") out.push_back(concurrence_fill(rho).value);
    else if (c == "roof_estimate") {
      if (!roof.enabled) throw UsageError("column 'roof_estimate' needs --roof");
      if (!rho.positive())
        throw UsageError("roof_estimate needs a positive semidefinite state; this one has eigenvalue " +
                         std::to_string(rho.min_eigenvalue()));
      RoofConfig cfg;
      cfg.seed = row_seed;
      cfg.restarts = roof.restarts;
      const auto measure = rho.parties() == 3 ? RoofMeasure::GteEmmrs : RoofMeasure::Emmrs;
      out.push_back(estimate_roof(rho, measure, cfg).estimate);
    } else {
      throw UsageError("unknown column '" + c + "'");
    }
  }
  return out;
}

struct ScanOptions {
  std::string family;
  double lo = 0.0;
  double hi = 1.0;
  std::size_t steps = 101;
  std::vector<std::string> columns;  // empty: family defaults
  std::uint64_t seed = 0;
  RoofSettings roof;
};

struct ScanResult {
  std::string family;
  std::string parameter;
  std::vector<std::string> columns;
  RealList grid;
  std::vector<std::vector<double>> rows;
};

inline FamilyInfo parametric_family(const std::string& name) {
  const auto info = families::find(name);
  if (!info) throw UsageError("unknown family '" + name + "'");
  if (!info->parametric()) throw UsageError("family '" + name + "' has no parameter to scan");
  return *info;
}

inline void check_range(const FamilyInfo& info, double lo, double hi) {
  const double slack = 1e-12;
  if (!(lo <= hi)) throw UsageError("range start must not exceed its end");
  if (lo < info.lo - slack || hi > info.hi + slack)
    throw UsageError(info.name + ": range [" + std::to_string(lo) + ", " + std::to_string(hi) +
                     "] leaves the domain " + info.domain);
}

inline RealList make_grid(double lo, double hi, std::size_t steps) {
  if (steps == 0) throw UsageError("scan needs at least one grid point");
  if (steps > 1 && !(hi > lo)) throw UsageError("a grid of several points needs start < end");
  RealList grid(steps);
  for (std::size_t i = 0; i < steps; ++i)
    grid[i] = steps == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
  if (steps > 1) grid.back() = hi;
  return grid;
}

inline ScanResult scan(const ScanOptions& opt) {
  const FamilyInfo info = parametric_family(opt.family);
  check_range(info, opt.lo, opt.hi);
  ScanResult out;
  out.family = info.name;
  out.parameter = info.parameter;
  out.columns = opt.columns.empty() ? default_columns(info, opt.roof.enabled) : opt.columns;
  if (out.columns.empty() || out.columns.front() != "param") out.columns.insert(out.columns.begin(), "param");
  out.grid = make_grid(opt.lo, opt.hi, opt.steps);
  for (std::size_t i = 0; i < out.grid.size(); ++i) {
    const double x = std::clamp(out.grid[i], info.lo, info.hi);
    DensityMatrix rho = [&] {
      try {
        return families::parametric(info.name, x);
      } catch (const Error& e) {
        throw UsageError(info.name + " at " + info.parameter + " = " + std::to_string(x) + ": " + e.what());
      }
    }();
    out.rows.push_back(evaluate_columns(rho, out.grid[i], out.columns, derive_seed(opt.seed, i), opt.roof));
  }
  return out;
}

// Shortest decimal string that reads back to the same double.
inline std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline std::string to_csv(const ScanResult& r) {
  std::string out;
  for (std::size_t c = 0; c < r.columns.size(); ++c) out += (c ? "," : "") + r.columns[c];
  out += '\n';
  for (const auto& row : r.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += format_double(row[c]);
    }
    out += '\n';
  }
  return out;
}

inline json to_json(const ScanResult& r) {
  return {{"family", r.family}, {"parameter", r.parameter}, {"columns", r.columns}, {"rows", r.rows}};
}

// Statistic names accepted by threshold(): a verdict predicate plus the
// number it is read from.
struct Probe {
  bool entangled = false;
  double value = 0.0;
};

inline Probe probe(const std::string& statistic, const DensityMatrix& rho) {
  auto from_report = [](const CriterionReport& r) { return Probe{r.entangled(), r.statistic}; };
  if (statistic == "theorem1") return from_report(theorem1_test(rho));
  if (statistic == "theorem2") {
    const auto r = theorem2_test(rho);
    return {r.entangled(), r.margin};
  }
  if (statistic == "realignment") return from_report(realignment_criterion(rho));
  if (statistic == "ppt") return from_report(ppt_criterion(rho));
  if (statistic == "conc_lower_bound") {
    const auto b = concurrence_lower_bound(rho);
    return {b.bound > 0.0, std::max(b.m1, b.m2)};
  }
  throw UsageError("unknown statistic '" + statistic +
                   "' (expected theorem1, theorem2, realignment, ppt or conc_lower_bound)");
}

struct ThresholdResult {
  double root = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  Probe at_lo;
  Probe at_hi;
  std::size_t iterations = 0;
};

// Bisection on the verdict until the bracket is narrower than tol.
inline ThresholdResult threshold(const std::string& family, const std::string& statistic, double lo, double hi,
                                 double tol = 1e-6) {
  const FamilyInfo info = parametric_family(family);
  check_range(info, lo, hi);
  if (!(tol > 0.0)) throw UsageError("tolerance must be positive");
  auto eval = [&](double x) { return probe(statistic, families::parametric(family, std::clamp(x, info.lo, info.hi))); };
  ThresholdResult r;
  r.lo = lo;
  r.hi = hi;
  r.at_lo = eval(lo);
  r.at_hi = eval(hi);
  if (r.at_lo.entangled == r.at_hi.entangled)
    throw NoRootError(statistic + " verdict does not change on [" + format_double(lo) + ", " + format_double(hi) + "]");
  while (r.hi - r.lo >= tol) {
    const double mid = 0.5 * (r.lo + r.hi);
    const Probe pm = eval(mid);
    if (pm.entangled == r.at_lo.entangled) r.lo = mid, r.at_lo = pm;
    else r.hi = mid, r.at_hi = pm;
    ++r.iterations;
  }
  r.root = 0.5 * (r.lo + r.hi);
  return r;
}

inline json to_json(const ThresholdResult& r, const std::string& family, const std::string& statistic) {
  return {{"family", family},
          {"statistic", statistic},
          {"root", r.root},
          {"bracket", {r.lo, r.hi}},
          {"bracket_values", {r.at_lo.value, r.at_hi.value}},
          {"bracket_verdicts",
           {r.at_lo.entangled ? "Entangled" : "Inconclusive", r.at_hi.entangled ? "Entangled" : "Inconclusive"}},
          {"iterations", r.iterations}};
}

inline std::string families_listing() {
  std::ostringstream out;
  for (const auto& f : families::catalogue()) {
    out << f.name;
    if (f.parametric()) out << "  " << f.parameter << " in " << f.domain;
    else out << "  (" << f.domain << ")";
    out << "  dims [";
    for (std::size_t i = 0; i < f.dims.size(); ++i) out << (i ? "," : "") << f.dims[i];
    out << "]  " << f.description << '\n';
  }
  return out.str();
}

struct AnalyzeOptions {
  bool roof = false;
  std::size_t roof_restarts = 16;
  std::uint64_t seed = 0;
};

inline json analyze_document(const AnyState& state, const AnalyzeOptions& opt = {}) {
  const DensityMatrix rho = as_density(state);
  const auto* pure = std::get_if<PureState>(&state);
  json doc;
  doc["state"] = {{"dims", rho.dims()},
                  {"kind", pure ? "pure" : "mixed"},
                  {"purity", rho.purity()},
                  {"rank", count_above(hermitian_eigenvalues(rho.matrix()), 1e-10)}};
  json criteria = json::array();
  json measures = json::array();
  json moments = json::object();
  auto add = [&measures](const MeasureValue& m) { measures.push_back(io::to_json(m)); };
  const RoofSettings roof{opt.roof, opt.roof_restarts};

  if (rho.parties() == 2) {
    for (const auto& r : analyze(rho)) criteria.push_back(io::to_json(r));
    const auto cols = default_columns(*families::find("werner"), false);
    const auto values = evaluate_columns(rho, 0.0, cols, 0, roof);
    json stats = json::object();
    for (std::size_t c = 1; c < cols.size(); ++c) stats[cols[c]] = values[c];
    doc["statistics"] = stats;
    const auto b = concurrence_lower_bound(rho);
    add({"conc_lower_bound", b.bound, MeasureMode::DirectFunctional});
    add(emmrs_direct(rho));
    if (rho.dims() == Dims{2, 2}) add({"wootters_concurrence", wootters_concurrence(rho), MeasureMode::DirectFunctional});
    if (pure) {
      add(concurrence_pure(*pure));
      add(emmrs_pure(*pure));
    }
    const auto tr = realignment_moments(rho);
    const auto tp = pt_moments(rho);
    moments["realignment"] = tr.values;
    moments["partial_transpose"] = tp.values;
    moments["coefficients"] = newton_coefficients(tp, rho.dim()).values;
  } else if (rho.parties() == 3) {
    add(gte_emmrs_direct(rho));
    add(gme_concurrence_direct(rho));
    add(concurrence_fill(rho));
    if (pure) add(gte_emmrs_pure(*pure));
  }
  if (opt.roof && (rho.parties() == 2 || rho.parties() == 3)) {
    RoofConfig cfg;
    cfg.seed = opt.seed;
    cfg.restarts = opt.roof_restarts;
    const auto measure = rho.parties() == 3 ? RoofMeasure::GteEmmrs : RoofMeasure::Emmrs;
    add({rho.parties() == 3 ? "gte_emmrs_roof_estimate" : "emmrs_roof_estimate",
         estimate_roof(rho, measure, cfg).estimate, MeasureMode::ConvexRoofEstimate});
  }
  doc["criteria"] = criteria;
  doc["measures"] = measures;
  doc["moments"] = moments;
  return doc;
}

}  // namespace entmom::cli
