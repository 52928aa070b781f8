#pragma once

// Entanglement criteria. Verdicts are one-sided: Entangled is a certificate,
// Inconclusive never means separable (except where `ppt_decisive` says so).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "entmom/moments.hpp"
#include "entmom/numerics.hpp"
#include "entmom/states.hpp"

namespace entmom {

enum class Verdict { Entangled, Inconclusive };

inline const char* to_string(Verdict v) { return v == Verdict::Entangled ? "Entangled" : "Inconclusive"; }

struct CriterionReport {
  std::string criterion;
  Verdict verdict = Verdict::Inconclusive;
  double statistic = 0.0;
  double margin = 0.0;  // > 0 exactly when Entangled
  std::optional<std::size_t> detail;
  std::string note;
  // 2x2 and 2x3: an Inconclusive PPT-type verdict certifies separability.
  bool ppt_decisive = false;

  bool entangled() const { return verdict == Verdict::Entangled; }
};

inline constexpr double kCriterionTol = 1e-9;

namespace detail {

inline bool ppt_decisive(const Dims& dims) {
  return dims.size() == 2 && dims[0] * dims[1] <= 6;
}

// sqrt(sqrt(2 (T1^2 - T2)) + T1). Cauchy-type bound keeps the inner radicand
// non-negative up to rounding.
inline double moment_norm_bound(double t1, double t2) {
  double radicand = 2.0 * (t1 * t1 - t2);
  if (radicand < 0.0) {
    if (radicand < -1e-12) throw NumericError("moment radicand " + std::to_string(radicand) + " is negative");
    radicand = 0.0;
  }
  return std::sqrt(std::sqrt(radicand) + t1);
}

}  // namespace detail

inline double q_statistic(const DensityMatrix& rho) {
  const auto t = realignment_moments(rho, std::min<std::size_t>(2, rho.dim()));
  const double t2 = t.size() >= 2 ? t[2] : t[1] * t[1];
  return detail::moment_norm_bound(t[1], t2);
}

// Q <= 1 for separable states.
inline CriterionReport theorem1_test(const DensityMatrix& rho, double tol = kCriterionTol) {
  CriterionReport r;
  r.criterion = "theorem1";
  r.statistic = q_statistic(rho);
  r.margin = r.statistic - 1.0;
  r.verdict = r.statistic > 1.0 + tol ? Verdict::Entangled : Verdict::Inconclusive;
  return r;
}

enum class RankSource { Spectrum, Coefficients };

struct CoefficientSignTest {
  CoefficientVector coefficients;
  std::size_t rank = 0;                  // q used for the test
  std::size_t spectral_rank = 0;
  std::size_t coefficient_rank = 0;
  std::optional<std::size_t> violation;  // last resolved index before the first sign change
  double margin = 0.0;
};

// Sign pattern of the characteristic polynomial of rho^tau.
//
// For a PSD spectrum of rank q every a_0..a_q is strictly positive. Any
// negative eigenvalue forces a sign change among the nonzero coefficients
// (Descartes). Coefficients inside their rounding bound have no reliable sign
// and are skipped, so a violation is a sign change between consecutive
// resolved coefficients up to index q. `tol` is the eigenvalue cut used for
// the spectral rank.
inline CoefficientSignTest coefficient_sign_test(const DensityMatrix& rho, double tol = 1e-8,
                                                 RankSource source = RankSource::Spectrum) {
  detail::require_bipartite(rho.dims(), "theorem2_test");
  const std::size_t p = rho.dim();
  const CMatrix pt = partial_transpose(rho);
  const RealList spectrum = hermitian_eigenvalues(pt);
  CoefficientSignTest out;
  out.coefficients = newton_coefficients(power_sums(spectrum, p), p);
  out.spectral_rank = count_above(spectrum, tol);

  const auto& a = out.coefficients.values;
  const auto& noise = out.coefficients.noise;
  auto resolved = [&](std::size_t k) { return std::abs(a[k]) > noise[k]; };
  out.coefficient_rank = 0;
  for (std::size_t k = p; k >= 1; --k) {
    if (resolved(k)) {
      out.coefficient_rank = k;
      break;
    }
  }
  out.rank = source == RankSource::Spectrum ? out.spectral_rank : out.coefficient_rank;

  // margin: largest -a_i a_j over consecutive resolved pairs; positive exactly
  // when the signs differ.
  out.margin = -INFINITY;
  std::size_t last = 0;  // a_0 = 1 is always resolved
  for (std::size_t k = 1; k <= out.rank; ++k) {
    if (!resolved(k)) continue;
    const double measure = -(a[last] * a[k]);
    if (measure > 0.0 && !out.violation) out.violation = last;
    out.margin = std::max(out.margin, measure);
    last = k;
  }
  if (!std::isfinite(out.margin)) out.margin = 0.0;
  return out;
}

inline CriterionReport theorem2_test(const DensityMatrix& rho, double tol = 1e-8,
                                     RankSource source = RankSource::Spectrum) {
  const auto t = coefficient_sign_test(rho, tol, source);
  CriterionReport r;
  r.criterion = "theorem2";
  r.verdict = t.violation ? Verdict::Entangled : Verdict::Inconclusive;
  r.detail = t.violation;
  r.statistic = static_cast<double>(t.rank);
  r.margin = t.margin;
  r.ppt_decisive = detail::ppt_decisive(rho.dims());
  if (t.spectral_rank != t.coefficient_rank) {
    r.note = "rank disagreement: spectral " + std::to_string(t.spectral_rank) + ", coefficient " +
             std::to_string(t.coefficient_rank);
  }
  return r;
}

// ||rho^R||_1 <= 1 for separable states.
inline CriterionReport realignment_criterion(const DensityMatrix& rho, double tol = kCriterionTol) {
  CriterionReport r;
  r.criterion = "realignment";
  r.statistic = trace_norm(realign(rho));
  r.margin = r.statistic - 1.0;
  r.verdict = r.statistic > 1.0 + tol ? Verdict::Entangled : Verdict::Inconclusive;
  return r;
}

// Minimum eigenvalue of rho^tau.
inline CriterionReport ppt_criterion(const DensityMatrix& rho, double tol = kCriterionTol) {
  CriterionReport r;
  r.criterion = "ppt";
  r.statistic = hermitian_eigenvalues(partial_transpose(rho)).back();
  r.margin = -r.statistic;
  r.verdict = r.statistic < -tol ? Verdict::Entangled : Verdict::Inconclusive;
  r.ppt_decisive = detail::ppt_decisive(rho.dims());
  return r;
}

inline std::vector<CriterionReport> analyze(const DensityMatrix& rho) {
  return {theorem1_test(rho), theorem2_test(rho), realignment_criterion(rho), ppt_criterion(rho)};
}

}  // namespace entmom
