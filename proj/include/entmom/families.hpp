#pragma once

// Stock states and one-parameter families used throughout the tests and CLI.

#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "entmom/errors.hpp"
#include "entmom/numerics.hpp"
#include "entmom/states.hpp"

namespace entmom {

using AnyState = std::variant<DensityMatrix, PureState>;

struct FamilyInfo {
  std::string name;
  std::string parameter;  // empty for fixed states
  double lo = 0.0;
  double hi = 0.0;
  std::string domain;
  Dims dims;
  std::string description;

  bool parametric() const { return !parameter.empty(); }
};

namespace families {

inline double rho_a_lo() { return (25.0 - std::sqrt(141.0)) / 50.0; }
inline double rho_a_hi() { return (25.0 + std::sqrt(141.0)) / 100.0; }

namespace detail {

// Endpoints are computed in floating point; allow a few ulps of slack.
inline void check_domain(const char* name, double x, double lo, double hi) {
  const double slack = 1e-12;
  if (!std::isfinite(x) || x < lo - slack || x > hi + slack) {
    throw DomainError(std::string(name) + ": parameter " + std::to_string(x) + " outside [" +
                      std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
}

inline CVector max_entangled(std::size_t d) {
  CVector v = CVector::Zero(static_cast<Eigen::Index>(d * d));
  for (std::size_t i = 0; i < d; ++i) v[static_cast<Eigen::Index>(i * d + i)] = 1.0 / std::sqrt(double(d));
  return v;
}

inline CMatrix projector(const CVector& v) { return v * v.adjoint(); }

}  // namespace detail

inline PureState bell() { return PureState(detail::max_entangled(2), {2, 2}); }

inline DensityMatrix bell_projector() { return bell().density(); }

inline DensityMatrix maximally_mixed(const Dims& dims) {
  const auto p = static_cast<Eigen::Index>(total_dim(dims));
  return validate(CMatrix::Identity(p, p) / double(p), dims);
}

// 3x3 matrix with two -11/50 coherences, no checks.
inline CMatrix rho_a_matrix(double a) {
  CMatrix m = CMatrix::Zero(9, 9);
  const double c = -11.0 / 50.0;
  m(0, 0) = (1.0 - a) / 2.0;
  m(0, 8) = m(8, 0) = c;
  m(4, 4) = 0.5 - a;
  m(4, 5) = m(5, 4) = c;
  m(5, 5) = a;
  m(8, 8) = a / 2.0;
  return m;
}

// Admissible for (25 - sqrt 141)/50 <= a <= (25 + sqrt 141)/100, where both
// 2x2 blocks stay positive semidefinite.
inline DensityMatrix rho_a(double a) {
  detail::check_domain("rho_a", a, rho_a_lo(), rho_a_hi());
  return validate(rho_a_matrix(a), {3, 3});
}

// u |phi+><phi+| + (1 - u) I/4.
inline DensityMatrix werner(double u) {
  detail::check_domain("werner", u, 0.0, 1.0);
  return validate(u * detail::projector(detail::max_entangled(2)) +
                      (1.0 - u) / 4.0 * CMatrix::Identity(4, 4),
                  {2, 2});
}

// (1 - b)/3 I + (4b - 1)/3 |phi+><phi+| on two qubits.
inline DensityMatrix isotropic2(double b) {
  detail::check_domain("isotropic2", b, 0.0, 1.0);
  return validate((1.0 - b) / 3.0 * CMatrix::Identity(4, 4) +
                      (4.0 * b - 1.0) / 3.0 * detail::projector(detail::max_entangled(2)),
                  {2, 2});
}

// (1 - s)/9 I + s |psi3><psi3| on two qutrits.
inline DensityMatrix isotropic3(double s) {
  detail::check_domain("isotropic3", s, 0.0, 1.0);
  return validate((1.0 - s) / 9.0 * CMatrix::Identity(9, 9) +
                      s * detail::projector(detail::max_entangled(3)),
                  {3, 3});
}

// Three-qubit family with global normalization 1/(4f^2 + 4). The matrix is
// Hermitian with unit trace but not positive semidefinite for any f in [0, 1],
// so it is admitted with positivity unchecked. Its single-qubit reductions
// are valid states.
inline DensityMatrix rho_f(double f) {
  detail::check_domain("rho_f", f, 0.0, 1.0);
  const double f2 = f * f;
  const double q = (1.0 + f2) / 4.0;
  CMatrix m = CMatrix::Zero(8, 8);
  auto sym = [&m](int i, int j, double v) { m(i, j) = m(j, i) = v; };
  m(0, 0) = 1.0;
  sym(0, 1, q);
  sym(0, 2, f / 4.0);
  sym(0, 5, f);
  sym(0, 7, 1.0);
  m(1, 1) = 1.0;
  m(2, 2) = 2.0 * f2;
  sym(2, 5, f2);
  sym(2, 7, f);
  m(5, 5) = 2.0 * f2;
  sym(5, 7, f / 4.0);
  m(6, 6) = 1.0;
  sym(6, 7, q);
  m(7, 7) = 1.0;
  return validate(m / (4.0 * f2 + 4.0), {2, 2, 2}, kStateTol, Positivity::Unchecked);
}

inline PureState ghz3() {
  CVector v = CVector::Zero(8);
  v[0] = v[7] = 1.0 / std::sqrt(2.0);
  return PureState(v, {2, 2, 2});
}

inline PureState w3() {
  CVector v = CVector::Zero(8);
  v[1] = v[2] = v[4] = 1.0 / std::sqrt(3.0);
  return PureState(v, {2, 2, 2});
}

inline PureState schmidt_form(const RealList& mu, std::size_t d) {
  CVector v = CVector::Zero(static_cast<Eigen::Index>(d * d));
  for (std::size_t i = 0; i < mu.size(); ++i) v[static_cast<Eigen::Index>(i * d + i)] = std::sqrt(mu[i]);
  return PureState::normalized(v, {d, d});
}

// sqrt(1/2)|00> + sqrt(1/3)|11> + sqrt(1/6)|22>
inline PureState phi1() { return schmidt_form({1.0 / 2.0, 1.0 / 3.0, 1.0 / 6.0}, 3); }

// Same concurrence as phi1, different higher moments.
inline PureState phi2() {
  const double b1 = 0.25;
  const double b2 = (9.0 + std::sqrt(13.0)) / 24.0;
  return schmidt_form({b1, b2, 1.0 - b1 - b2}, 3);
}

inline const std::vector<FamilyInfo>& catalogue() {
  static const std::vector<FamilyInfo> table = {
      {"rho_a", "a", rho_a_lo(), rho_a_hi(), "[(25-sqrt(141))/50, (25+sqrt(141))/100]", {3, 3},
       "3x3 state with -11/50 coherences; every member is entangled"},
      {"werner", "u", 0.0, 1.0, "[0, 1]", {2, 2}, "u |phi+><phi+| + (1-u) I/4"},
      {"isotropic2", "b", 0.0, 1.0, "[0, 1]", {2, 2},
       "(1-b)/3 I + (4b-1)/3 |phi+><phi+|; entangled for b > 1/2"},
      {"isotropic3", "s", 0.0, 1.0, "[0, 1]", {3, 3},
       "(1-s)/9 I + s |psi3><psi3|; entangled for s > 1/4"},
      {"rho_f", "f", 0.0, 1.0, "[0, 1]", {2, 2, 2},
       "three-qubit family normalized by 1/(4f^2+4); positivity unchecked (matrix is indefinite)"},
      {"maximally_mixed", "", 0.0, 0.0, "dims given as parameters", {}, "I/p"},
      {"bell", "", 0.0, 0.0, "fixed", {2, 2}, "(|00> + |11>)/sqrt(2), pure"},
      {"ghz3", "", 0.0, 0.0, "fixed", {2, 2, 2}, "(|000> + |111>)/sqrt(2), pure"},
      {"w3", "", 0.0, 0.0, "fixed", {2, 2, 2}, "(|001> + |010> + |100>)/sqrt(3), pure"},
      {"phi1", "", 0.0, 0.0, "fixed", {3, 3}, "Schmidt coefficients {1/2, 1/3, 1/6}, pure"},
      {"phi2", "", 0.0, 0.0, "fixed", {3, 3},
       "Schmidt coefficients {1/4, (9+sqrt(13))/24, rest}, pure; same concurrence as phi1"},
  };
  return table;
}

inline std::optional<FamilyInfo> find(std::string_view name) {
  for (const auto& info : catalogue())
    if (info.name == name) return info;
  return std::nullopt;
}

// One-parameter families as density matrices.
inline DensityMatrix parametric(std::string_view name, double x) {
  if (name == "rho_a") return rho_a(x);
  if (name == "werner") return werner(x);
  if (name == "isotropic2") return isotropic2(x);
  if (name == "isotropic3") return isotropic3(x);
  if (name == "rho_f") return rho_f(x);
  throw ArgumentError("no one-parameter family named '" + std::string(name) + "'");
}

}  // namespace families

inline AnyState family(std::string_view name, const RealList& params = {}) {
  const auto info = families::find(name);
  if (!info) throw ArgumentError("unknown family '" + std::string(name) + "'");
  if (info->parametric()) {
    if (params.size() != 1)
      throw ArgumentError(std::string(name) + " takes exactly one parameter");
    return families::parametric(name, params[0]);
  }
  if (name == "maximally_mixed") {
    if (params.empty()) throw ArgumentError("maximally_mixed needs subsystem dimensions");
    Dims dims;
    for (double d : params) {
      if (d < 1.0 || d != std::floor(d)) throw DomainError("maximally_mixed: bad dimension");
      dims.push_back(static_cast<std::size_t>(d));
    }
    return families::maximally_mixed(dims);
  }
  if (!params.empty()) throw ArgumentError(std::string(name) + " takes no parameters");
  if (name == "bell") return families::bell();
  if (name == "ghz3") return families::ghz3();
  if (name == "w3") return families::w3();
  if (name == "phi1") return families::phi1();
  return families::phi2();
}

inline DensityMatrix as_density(const AnyState& s) {
  if (const auto* rho = std::get_if<DensityMatrix>(&s)) return *rho;
  return std::get<PureState>(s).density();
}

}  // namespace entmom
