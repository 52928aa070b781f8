#pragma once

// Concurrence-type quantities and the reduced-moment measure.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "entmom/criteria.hpp"
#include "entmom/errors.hpp"
#include "entmom/moments.hpp"
#include "entmom/numerics.hpp"
#include "entmom/states.hpp"

namespace entmom {

enum class MeasureMode { PureExact, DirectFunctional, ConvexRoofEstimate };

inline const char* to_string(MeasureMode m) {
  switch (m) {
    case MeasureMode::PureExact: return "pure-exact";
    case MeasureMode::DirectFunctional: return "direct-functional";
    case MeasureMode::ConvexRoofEstimate: return "convex-roof-estimate";
  }
  return "?";
}

struct MeasureValue {
  std::string name;
  double value = 0.0;
  MeasureMode mode = MeasureMode::PureExact;
};

inline constexpr double kClampTol = 1e-12;

namespace detail {

inline double clamp_nonnegative(double v, const char* what) {
  if (v >= 0.0) return v;
  if (v >= -kClampTol) return 0.0;
  throw NumericError(std::string(what) + " is negative beyond rounding: " + std::to_string(v));
}

inline void require_tripartite(const Dims& dims, const char* what) {
  if (dims.size() != 3)
    throw ShapeError(std::string(what) + ": needs exactly three subsystems, got " + std::to_string(dims.size()));
}

}  // namespace detail

// Weighted combination of Tr(sigma^k), k = 1..m, given as traces[k-1].
// Every weight is non-negative and the weights sum to 1, so the value is 0
// exactly when all traces are 1 (pure sigma).
//
// even m: 1 - sum_{i=1}^{m/2} [4i/(m^2+2m) T_i + (2m-4i+4)/(m^2+2m) T_{i+m/2}]
// odd m:  1 - sum_{i=1}^{(m-1)/2} [4i/(m+1)^2 T_i + (2m-4i+2)/(m+1)^2 T_{(m+1)/2+i}]
//           - 2/(m+1) T_{(m+1)/2}
inline double moment_functional_from_traces(const RealList& traces, std::size_t m) {
  if (m < 2) throw ArgumentError("moment functional needs m >= 2");
  if (traces.size() < m) throw ArgumentError("moment functional needs m power traces");
  const double md = static_cast<double>(m);
  auto tr = [&traces](std::size_t k) { return traces[k - 1]; };
  double sum = 0.0;
  if (m % 2 == 0) {
    const double den = md * md + 2.0 * md;
    for (std::size_t i = 1; i <= m / 2; ++i) {
      const double id = static_cast<double>(i);
      sum += 4.0 * id / den * tr(i) + (2.0 * md - 4.0 * id + 4.0) / den * tr(i + m / 2);
    }
  } else {
    const double den = (md + 1.0) * (md + 1.0);
    const std::size_t half = (m + 1) / 2;
    for (std::size_t i = 1; i <= (m - 1) / 2; ++i) {
      const double id = static_cast<double>(i);
      sum += 4.0 * id / den * tr(i) + (2.0 * md - 4.0 * id + 2.0) / den * tr(half + i);
    }
    sum += 2.0 / (md + 1.0) * tr(half);
  }
  return 1.0 - sum;
}

inline double moment_functional_from_spectrum(const RealList& spectrum, std::size_t m) {
  return moment_functional_from_traces(power_sums(spectrum, m), m);
}

// f (even m) or g (odd m) of a single-system state of dimension <= m.
inline double moment_functional(const DensityMatrix& sigma, std::size_t m) {
  if (m < 2) throw ArgumentError("moment functional needs m >= 2");
  if (sigma.dim() > m)
    throw ShapeError("moment functional: state dimension " + std::to_string(sigma.dim()) + " exceeds m = " +
                     std::to_string(m));
  return detail::clamp_nonnegative(moment_functional_from_traces(power_traces(sigma.matrix(), m), m),
                                   "moment functional");
}

inline MeasureValue concurrence_pure(const PureState& psi) {
  double purity = 0.0;
  for (double mu : schmidt_spectrum(psi).coefficients) purity += mu * mu;
  return {"concurrence", std::sqrt(detail::clamp_nonnegative(2.0 * (1.0 - purity), "concurrence")),
          MeasureMode::PureExact};
}

inline MeasureValue emmrs_pure(const PureState& psi) {
  const std::size_t m = std::min(psi.dims().at(0), psi.dims().at(1));
  const auto spectrum = schmidt_spectrum(psi).coefficients;
  return {"emmrs", detail::clamp_nonnegative(moment_functional_from_spectrum(spectrum, m), "emmrs"),
          MeasureMode::PureExact};
}

enum class Side { A, B, Smaller };

// Moment functional of one reduced state of a mixed state. Diagnostic only:
// it is positive on some separable mixed states.
inline MeasureValue emmrs_direct(const DensityMatrix& rho, Side side = Side::Smaller) {
  detail::require_bipartite(rho.dims(), "emmrs_direct");
  std::size_t party = 0;
  if (side == Side::B || (side == Side::Smaller && rho.dims()[1] < rho.dims()[0])) party = 1;
  const DensityMatrix sigma = partial_trace(rho, {party});
  return {"emmrs_direct", moment_functional(sigma, rho.dims()[party]), MeasureMode::DirectFunctional};
}

struct ConcurrenceBound {
  double bound = 0.0;
  double m1 = 0.0;  // from Tr[(rho^tau)^2], Tr[(rho^tau)^4]
  double m2 = 0.0;  // from T^R_1, T^R_2
};

inline ConcurrenceBound concurrence_lower_bound(const DensityMatrix& rho) {
  detail::require_bipartite(rho.dims(), "concurrence_lower_bound");
  // Relabelling subsystems only transposes rho^tau and rho^R, which leaves
  // every moment unchanged; the prefactor uses the smaller dimension.
  const std::size_t m = std::min(rho.dims()[0], rho.dims()[1]);
  if (m < 2) throw ArgumentError("concurrence_lower_bound: a subsystem of dimension 1 carries no entanglement");
  const RealList pt = power_sums(hermitian_eigenvalues(partial_transpose(rho)), 4);
  const auto tr = realignment_moments(rho, 2);
  ConcurrenceBound out;
  out.m1 = detail::moment_norm_bound(pt[1], pt[3]) - 1.0;
  out.m2 = detail::moment_norm_bound(tr[1], tr[2]) - 1.0;
  // Rank <= 2 separable states sit exactly on the bound; keep rounding out.
  const double best = std::max({out.m1, out.m2, 0.0});
  out.bound = best > kClampTol ? std::sqrt(2.0 / double(m * (m - 1))) * best : 0.0;
  return out;
}

namespace detail {

inline RealList single_party_spectrum(const PureState& psi, std::size_t party) {
  std::vector<bool> keep(psi.parties(), false);
  keep[party] = true;
  const CMatrix a = amplitude_matrix(psi.amplitudes(), psi.dims(), keep);
  RealList out;
  for (double s : singular_values(a)) out.push_back(s * s);
  return out;
}

}  // namespace detail

// Geometric mean of the bipartite measure over A|BC, B|AC, C|AB.
inline MeasureValue gte_emmrs_pure(const PureState& psi) {
  detail::require_tripartite(psi.dims(), "gte_emmrs_pure");
  const std::size_t total = total_dim(psi.dims());
  double product = 1.0;
  for (std::size_t x = 0; x < 3; ++x) {
    const std::size_t dx = psi.dims()[x];
    const std::size_t m = std::min(dx, total / dx);
    product *= detail::clamp_nonnegative(
        moment_functional_from_spectrum(detail::single_party_spectrum(psi, x), m), "emmrs factor");
  }
  return {"gte_emmrs", std::cbrt(product), MeasureMode::PureExact};
}

inline MeasureValue gte_emmrs_direct(const DensityMatrix& rho) {
  detail::require_tripartite(rho.dims(), "gte_emmrs_direct");
  double product = 1.0;
  for (std::size_t x = 0; x < 3; ++x) product *= moment_functional(partial_trace(rho, {x}), rho.dims()[x]);
  return {"gte_direct", std::cbrt(product), MeasureMode::DirectFunctional};
}

namespace detail {

// 2 (1 - Tr rho_X^2) for X = A, B, C.
inline std::array<double, 3> squared_party_concurrences(const DensityMatrix& rho) {
  std::array<double, 3> c2{};
  for (std::size_t x = 0; x < 3; ++x)
    c2[x] = clamp_nonnegative(2.0 * (1.0 - partial_trace(rho, {x}).purity()), "squared concurrence");
  return c2;
}

}  // namespace detail

inline MeasureValue gme_concurrence_direct(const DensityMatrix& rho) {
  detail::require_tripartite(rho.dims(), "gme_concurrence_direct");
  const auto c2 = detail::squared_party_concurrences(rho);
  return {"gme_conc", std::sqrt(*std::min_element(c2.begin(), c2.end())), MeasureMode::DirectFunctional};
}

// Heron-type area with the squared one-vs-rest concurrences as sides.
inline MeasureValue concurrence_fill(const DensityMatrix& rho) {
  detail::require_tripartite(rho.dims(), "concurrence_fill");
  const auto c2 = detail::squared_party_concurrences(rho);
  const double p = (c2[0] + c2[1] + c2[2]) / 2.0;
  double radicand = p * (p - c2[0]) * (p - c2[1]) * (p - c2[2]);
  if (radicand < -1e-9)
    throw NumericError("concurrence fill: triangle inequality violated, radicand " + std::to_string(radicand));
  if (radicand < 0.0) radicand = 0.0;
  return {"conc_fill", 4.0 / std::sqrt(3.0) * std::sqrt(radicand), MeasureMode::DirectFunctional};
}

// Two-qubit concurrence max(0, l1 - l2 - l3 - l4), with l_i the descending
// square roots of the eigenvalues of rho (Y x Y) rho* (Y x Y), evaluated
// through the Hermitian form sqrt(rho) rho~ sqrt(rho).
inline double wootters_concurrence(const DensityMatrix& rho) {
  if (rho.dims() != Dims{2, 2}) throw ShapeError("wootters_concurrence: needs dims [2, 2]");
  CMatrix yy = CMatrix::Zero(4, 4);
  yy(0, 3) = yy(3, 0) = -1.0;
  yy(1, 2) = yy(2, 1) = 1.0;
  const CMatrix tilde = yy * rho.matrix().conjugate() * yy;
  const auto eig = hermitian_eigensystem(rho.matrix());
  Eigen::VectorXd root(4);
  for (int k = 0; k < 4; ++k) root[k] = std::sqrt(std::max(0.0, eig.values[static_cast<std::size_t>(k)]));
  const CMatrix sqrt_rho = eig.vectors * root.asDiagonal() * eig.vectors.adjoint();
  const CMatrix r = sqrt_rho * tilde * sqrt_rho;
  RealList lambda;
  for (double v : hermitian_eigenvalues((r + r.adjoint()) * 0.5)) lambda.push_back(std::sqrt(std::max(0.0, v)));
  return std::max(0.0, lambda[0] - lambda[1] - lambda[2] - lambda[3]);
}

}  // namespace entmom
