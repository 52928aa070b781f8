#pragma once

// Trace moments and characteristic-polynomial coefficients.

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "entmom/errors.hpp"
#include "entmom/numerics.hpp"
#include "entmom/states.hpp"

namespace entmom {

enum class MomentKind { Realignment, PartialTranspose, Reduced };

inline const char* to_string(MomentKind k) {
  switch (k) {
    case MomentKind::Realignment: return "realignment";
    case MomentKind::PartialTranspose: return "partial-transpose";
    case MomentKind::Reduced: return "reduced";
  }
  return "?";
}

// values[k-1] = T_k.
struct MomentVector {
  MomentKind kind;
  RealList values;

  double operator[](std::size_t k) const { return values.at(k - 1); }  // 1-based
  std::size_t size() const { return values.size(); }
};

// values[k] = a_k with a_0 = 1. `noise[k]` bounds the rounding error
// accumulated by the recursion; |a_k| below it is indistinguishable from 0.
struct CoefficientVector {
  RealList values;
  RealList noise;

  std::size_t degree() const { return values.empty() ? 0 : values.size() - 1; }
};

namespace detail {

inline std::size_t default_depth(const DensityMatrix& rho, std::size_t k) {
  require_bipartite(rho.dims(), "moments");
  const std::size_t p = rho.dim();
  if (k == 0) return p;
  if (k > p) throw ArgumentError("moment depth " + std::to_string(k) + " exceeds mn = " + std::to_string(p));
  return k;
}

}  // namespace detail

// T^R_k = Tr[(R^dagger R)^k] = sum sigma_i^{2k} over singular values of R.
// k = 0 selects the default depth mn.
inline MomentVector realignment_moments(const DensityMatrix& rho, std::size_t k = 0) {
  k = detail::default_depth(rho, k);
  RealList squares;
  for (double s : singular_values(realign(rho))) squares.push_back(s * s);
  return {MomentKind::Realignment, power_sums(squares, k)};
}

// T^tau_k = Tr[(rho^tau)^k].
inline MomentVector pt_moments(const DensityMatrix& rho, std::size_t k = 0) {
  k = detail::default_depth(rho, k);
  return {MomentKind::PartialTranspose, power_traces(partial_transpose(rho), k)};
}

// Tr(sigma^k), k = 1..K, for a single reduced state; K = 0 means its dimension.
inline MomentVector reduced_moments(const DensityMatrix& sigma, std::size_t k = 0) {
  if (k == 0) k = sigma.dim();
  return {MomentKind::Reduced, power_traces(sigma.matrix(), k)};
}

// Newton's identities: a_{k+1} = (1/(k+1)) sum_{l=0..k} (-1)^l a_{k-l} T_{l+1},
// for k = 0..p-1. For moments of a spectrum, a_k is its k-th elementary
// symmetric polynomial.
inline CoefficientVector newton_coefficients(const RealList& moments, std::size_t p) {
  if (moments.size() < p) {
    throw ArgumentError("newton_coefficients: need " + std::to_string(p) + " moments, got " +
                        std::to_string(moments.size()));
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double pd = static_cast<double>(std::max<std::size_t>(p, 1));
  auto t = [&moments](std::size_t l) { return moments[l - 1]; };

  // S_l = sum |lambda|^l, bounded from the moments: exact for even l,
  // Cauchy-Schwarz S_l^2 <= T_(l-1) T_(l+1) for odd l.
  const double lam = moments.size() >= 2 ? std::sqrt(std::max(0.0, t(2))) : std::abs(moments.empty() ? 0.0 : t(1));
  auto s = [&](std::size_t l) -> double {
    if (l == 0) return pd;
    if (l % 2 == 0) return std::abs(t(l));
    if (l + 1 <= moments.size()) return std::sqrt(std::abs(l == 1 ? pd : t(l - 1)) * std::abs(t(l + 1)));
    return lam * (l == 1 ? pd : std::abs(t(l - 1)));
  };
  // Spectral moment error: eigenvalue shifts of order p eps lambda_max plus
  // rounding of the powers and the sum.
  auto t_err = [&](std::size_t l) {
    const double ld = static_cast<double>(l);
    return 4.0 * eps * (ld * pd * lam * s(l - 1) + (ld + pd) * s(l));
  };

  // Errors are propagated against the all-positive recursion
  // k B_k = sum_l B_(k-l) S_l, which majorizes |a_k| and its rounding.
  CoefficientVector out;
  out.values.assign(p + 1, 0.0);
  out.noise.assign(p + 1, 0.0);
  RealList bound(p + 1, 0.0);
  out.values[0] = 1.0;
  bound[0] = 1.0;
  for (std::size_t k = 1; k <= p; ++k) {
    double acc = 0.0, err = 0.0, b = 0.0;
    for (std::size_t l = 1; l <= k; ++l) {
      const double term = out.values[k - l] * t(l);
      acc += (l % 2 == 1) ? term : -term;
      b += bound[k - l] * s(l);
      err += out.noise[k - l] * s(l) + bound[k - l] * t_err(l);
    }
    const double kk = static_cast<double>(k);
    out.values[k] = acc / kk;
    bound[k] = b / kk;
    out.noise[k] = err / kk + 4.0 * kk * eps * bound[k];
  }
  return out;
}

inline CoefficientVector newton_coefficients(const MomentVector& moments, std::size_t p) {
  return newton_coefficients(moments.values, p);
}

// Number of eigenvalues with |lambda| > tol.
inline std::size_t rank_from_spectrum(const CMatrix& m, double tol = 1e-8, double herm_tol = kDefaultHermTol) {
  return count_above(hermitian_eigenvalues(m, herm_tol), tol);
}

// Largest k with |a_k| > tol. Scans from the top so interior zeros don't
// truncate the result.
inline std::size_t rank_from_coefficients(const RealList& a, double tol = 1e-8) {
  for (std::size_t k = a.size(); k-- > 1;)
    if (std::abs(a[k]) > tol) return k;
  return 0;
}

inline std::size_t rank_from_coefficients(const CoefficientVector& a, double tol = 1e-8) {
  return rank_from_coefficients(a.values, tol);
}

}  // namespace entmom
