#pragma once

// State files and report documents as JSON.
//
// State file: {"dims": [m, n, ...], "matrix": [[[re, im], ...], ...]} for a
// mixed state, or {"dims": [...], "vector": [[re, im], ...]} for a pure one.

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "entmom/convexroof.hpp"
#include "entmom/criteria.hpp"
#include "entmom/errors.hpp"
#include "entmom/families.hpp"
#include "entmom/measures.hpp"
#include "entmom/moments.hpp"
#include "entmom/states.hpp"

namespace entmom::io {

using nlohmann::json;

namespace detail {

inline Complex parse_entry(const json& e, const std::string& where) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
    throw ParseError(where + ": expected [re, im]");
  return {e[0].get<double>(), e[1].get<double>()};
}

inline Dims parse_dims(const json& doc) {
  if (!doc.contains("dims") || !doc["dims"].is_array() || doc["dims"].empty())
    throw ParseError("missing or empty 'dims' array");
  Dims dims;
  for (const auto& d : doc["dims"]) {
    if (!d.is_number_integer() || d.get<long long>() < 1) throw ParseError("'dims' entries must be positive integers");
    dims.push_back(static_cast<std::size_t>(d.get<long long>()));
  }
  return dims;
}

inline json entry(Complex z) { return json::array({z.real(), z.imag()}); }

}  // namespace detail

// Throws ParseError for malformed documents, ShapeError or ValidationError
// for well-formed documents that do not describe a valid state.
inline AnyState parse_state(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("state document must be an object");
  const Dims dims = detail::parse_dims(doc);
  const bool has_matrix = doc.contains("matrix");
  const bool has_vector = doc.contains("vector");
  if (has_matrix == has_vector) throw ParseError("state document needs exactly one of 'matrix' or 'vector'");

  if (has_vector) {
    const json& v = doc["vector"];
    if (!v.is_array()) throw ParseError("'vector' must be an array");
    CVector amp(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i)
      amp[static_cast<Eigen::Index>(i)] = detail::parse_entry(v[i], "vector[" + std::to_string(i) + "]");
    return PureState(amp, dims);
  }

  const json& m = doc["matrix"];
  if (!m.is_array() || m.empty()) throw ParseError("'matrix' must be a non-empty array of rows");
  const std::size_t p = m.size();
  CMatrix data(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
  for (std::size_t i = 0; i < p; ++i) {
    if (!m[i].is_array() || m[i].size() != p) throw ParseError("matrix row " + std::to_string(i) + " must have " + std::to_string(p) + " entries");
    for (std::size_t j = 0; j < p; ++j)
      data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          detail::parse_entry(m[i][j], "matrix[" + std::to_string(i) + "][" + std::to_string(j) + "]");
  }
  return validate(std::move(data), dims);
}

inline AnyState load_state(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open state file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_state(buf.str());
}

inline json state_document(const AnyState& s) {
  json doc;
  if (const auto* psi = std::get_if<PureState>(&s)) {
    doc["dims"] = psi->dims();
    json v = json::array();
    for (Eigen::Index i = 0; i < psi->amplitudes().size(); ++i) v.push_back(detail::entry(psi->amplitudes()[i]));
    doc["vector"] = v;
    return doc;
  }
  const auto& rho = std::get<DensityMatrix>(s);
  doc["dims"] = rho.dims();
  json rows = json::array();
  for (Eigen::Index i = 0; i < rho.matrix().rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < rho.matrix().cols(); ++j) row.push_back(detail::entry(rho.matrix()(i, j)));
    rows.push_back(row);
  }
  doc["matrix"] = rows;
  return doc;
}

inline json to_json(const CriterionReport& r) {
  json j{{"criterion", r.criterion},
         {"verdict", to_string(r.verdict)},
         {"statistic", r.statistic},
         {"margin", r.margin},
         {"detail", r.detail ? json(*r.detail) : json(nullptr)}};
  if (r.ppt_decisive) j["ppt_decisive"] = true;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

inline json to_json(const MeasureValue& m) {
  return {{"name", m.name}, {"value", m.value}, {"mode", to_string(m.mode)}};
}

inline json to_json(const MomentVector& m) { return {{"kind", to_string(m.kind)}, {"values", m.values}}; }

}  // namespace entmom::io
