#pragma once

// Upper-bound estimation of convex-roof extensions.
//
// Every decomposition of rho into L pure states is Psi = V B^T with V an
// L x r isometry and B the p x r matrix of columns sqrt(lambda_k) e_k from the
// eigendecomposition of rho (rank r). Rows of Psi are the unnormalized
// members; p_i = |psi_i|^2. The search applies two-row unitary rotations to
// Psi, which keeps V an isometry, so every visited point is a genuine
// decomposition and its average measure bounds the roof from above.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <future>
#include <limits>
#include <numbers>
#include <tuple>
#include <utility>
#include <vector>

#include "entmom/errors.hpp"
#include "entmom/measures.hpp"
#include "entmom/numerics.hpp"
#include "entmom/random.hpp"
#include "entmom/states.hpp"

namespace entmom {

enum class RoofMeasure { Emmrs, GteEmmrs };

struct RoofConfig {
  std::size_t ensemble_size = 0;  // 0: min(rank^2, rank + 4)
  std::size_t restarts = 16;
  std::size_t sweeps = 50;
  double tol = 1e-7;              // stop a restart when a sweep improves less than this (relative)
  std::uint64_t seed = 0;
  bool parallel = true;
};

struct EnsembleDecomposition {
  RealList weights;
  std::vector<PureState> states;

  std::size_t size() const { return weights.size(); }

  CMatrix reconstruct() const {
    const auto p = states.empty() ? Eigen::Index{0} : states.front().amplitudes().size();
    CMatrix rho = CMatrix::Zero(p, p);
    for (std::size_t i = 0; i < size(); ++i) {
      const CVector& v = states[i].amplitudes();
      rho += weights[i] * (v * v.adjoint());
    }
    return rho;
  }
};

inline constexpr double kRankTol = 1e-10;
inline constexpr double kDropWeight = 1e-14;

namespace detail {

struct Spectral {
  std::size_t rank = 0;
  CMatrix factor;  // p x r, columns sqrt(lambda_k) e_k
};

inline Spectral spectral_factor(const DensityMatrix& rho) {
  if (!rho.positive())
    throw ValidationError("positivity", -rho.min_eigenvalue(), kStateTol);
  const auto eig = hermitian_eigensystem(rho.matrix());
  Spectral s;
  s.rank = count_above(eig.values, kRankTol);
  // count_above uses |lambda|; negative noise is below kRankTol for valid states
  const auto p = static_cast<Eigen::Index>(rho.dim());
  s.factor.resize(p, static_cast<Eigen::Index>(s.rank));
  for (std::size_t k = 0; k < s.rank; ++k)
    s.factor.col(static_cast<Eigen::Index>(k)) =
        std::sqrt(std::max(0.0, eig.values[k])) * eig.vectors.col(static_cast<Eigen::Index>(k));
  return s;
}

inline EnsembleDecomposition ensemble_from_rows(const CMatrix& psi, const Dims& dims) {
  EnsembleDecomposition out;
  for (Eigen::Index i = 0; i < psi.rows(); ++i) {
    const double w = psi.row(i).squaredNorm();
    if (w < kDropWeight) continue;
    out.weights.push_back(w);
    out.states.push_back(PureState::normalized(psi.row(i).transpose(), dims));
  }
  return out;
}

// Evaluates w * E(v / |v|) for unnormalized v without heap traffic.
class MemberMeasure {
 public:
  MemberMeasure(const Dims& dims, RoofMeasure measure) {
    if (measure == RoofMeasure::Emmrs) {
      require_bipartite(dims, "roof measure emmrs");
      const std::size_t party = dims[1] < dims[0] ? 1 : 0;
      add_factor(dims, party, std::min(dims[0], dims[1]));
    } else {
      if (dims.size() != 3) throw ShapeError("roof measure gte_emmrs: needs exactly three subsystems");
      const std::size_t total = total_dim(dims);
      for (std::size_t x = 0; x < 3; ++x) add_factor(dims, x, std::min(dims[x], total / dims[x]));
    }
  }

  double operator()(const CVector& v) {
    const double w = v.squaredNorm();
    if (w < 1e-300) return 0.0;
    double product = 1.0;
    for (auto& f : factors_) {
      for (std::size_t i = 0; i < f.kept.size(); ++i)
        f.amp(static_cast<Eigen::Index>(f.kept[i]), static_cast<Eigen::Index>(f.traced[i])) =
            v[static_cast<Eigen::Index>(i)];
      f.sigma.noalias() = f.amp * f.amp.adjoint();
      f.sigma /= w;
      f.power = f.sigma;
      f.traces[0] = f.sigma.trace().real();
      for (std::size_t k = 1; k < f.m; ++k) {
        f.scratch.noalias() = f.power * f.sigma;
        f.power.swap(f.scratch);
        f.traces[k] = f.power.trace().real();
      }
      product *= std::max(0.0, moment_functional_from_traces(f.traces, f.m));
    }
    const double value = factors_.size() == 1 ? product : std::cbrt(product);
    return w * value;
  }

 private:
  struct Factor {
    std::vector<std::size_t> kept, traced;
    std::size_t m = 2;
    CMatrix amp, sigma, power, scratch;
    RealList traces;
  };

  void add_factor(const Dims& dims, std::size_t party, std::size_t m) {
    std::vector<bool> keep(dims.size(), false);
    keep[party] = true;
    Split s = split_indices(dims, keep);
    Factor f;
    f.kept = std::move(s.kept);
    f.traced = std::move(s.traced);
    f.m = m;
    const auto kd = static_cast<Eigen::Index>(s.kept_dim);
    f.amp = CMatrix::Zero(kd, static_cast<Eigen::Index>(s.traced_dim));
    f.sigma = f.power = f.scratch = CMatrix::Zero(kd, kd);
    f.traces.assign(m, 0.0);
    factors_.push_back(std::move(f));
  }

  std::vector<Factor> factors_;
};

struct RestartResult {
  double objective = 0.0;
  CMatrix psi;
  RealList trace;  // objective after initialization and after each sweep
};

class PairRotationSearch {
 public:
  PairRotationSearch(CMatrix psi, MemberMeasure measure) : psi_(std::move(psi)), measure_(std::move(measure)) {
    contrib_.resize(static_cast<std::size_t>(psi_.rows()));
    for (Eigen::Index i = 0; i < psi_.rows(); ++i) contrib_[static_cast<std::size_t>(i)] = eval(psi_.row(i).transpose());
  }

  double objective() const {
    double total = 0.0;
    for (double c : contrib_) total += c;
    return total;
  }

  // One cyclic sweep over all row pairs.
  void sweep() {
    for (Eigen::Index i = 0; i < psi_.rows(); ++i)
      for (Eigen::Index j = i + 1; j < psi_.rows(); ++j) optimize_pair(i, j);
  }

  const CMatrix& psi() const { return psi_; }

 private:
  double eval(const CVector& v) {
    buffer_ = v;
    return measure_(buffer_);
  }

  double pair_value(Eigen::Index i, Eigen::Index j, double theta, double phi, CVector* out_i = nullptr,
                    CVector* out_j = nullptr) {
    const double c = std::cos(theta), s = std::sin(theta);
    const Complex phase = std::polar(1.0, phi);
    ri_ = c * psi_.row(i).transpose() + (phase * s) * psi_.row(j).transpose();
    rj_ = (-std::conj(phase) * s) * psi_.row(i).transpose() + c * psi_.row(j).transpose();
    const double value = measure_(ri_) + measure_(rj_);
    if (out_i) *out_i = ri_;
    if (out_j) *out_j = rj_;
    return value;
  }

  // Golden-section search of g on [lo, hi]; returns the best abscissa seen.
  template <typename G>
  static std::pair<double, double> golden(G&& g, double lo, double hi, double best_x, double best_y, int iters) {
    constexpr double inv_phi = 0.6180339887498949;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = g(x1), f2 = g(x2);
    for (int it = 0; it < iters; ++it) {
      if (f1 < f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - inv_phi * (hi - lo);
        f1 = g(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + inv_phi * (hi - lo);
        f2 = g(x2);
      }
    }
    if (f1 < best_y) best_x = x1, best_y = f1;
    if (f2 < best_y) best_x = x2, best_y = f2;
    return {best_x, best_y};
  }

  void optimize_pair(Eigen::Index i, Eigen::Index j) {
    const auto ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);
    const double base = contrib_[ui] + contrib_[uj];
    if (base <= 0.0) return;

    constexpr double pi = std::numbers::pi;
    constexpr int kThetaGrid = 12;
    constexpr int kPhiGrid = 4;
    double best_theta = 0.0, best_phi = 0.0, best = base;
    for (int a = 1; a < kThetaGrid; ++a) {
      const double theta = -pi / 2 + pi * a / kThetaGrid;
      if (a * 2 == kThetaGrid) continue;  // theta = 0 is the current point
      for (int b = 0; b < kPhiGrid; ++b) {
        const double phi = pi * b / kPhiGrid;
        const double v = pair_value(i, j, theta, phi);
        if (v < best) best = v, best_theta = theta, best_phi = phi;
      }
    }
    // Bracketed refinement: angle first, then phase.
    const double dtheta = pi / kThetaGrid;
    std::tie(best_theta, best) = golden([&](double t) { return pair_value(i, j, t, best_phi); },
                                        best_theta - dtheta, best_theta + dtheta, best_theta, best, 24);
    const double dphi = pi / kPhiGrid;
    std::tie(best_phi, best) = golden([&](double f) { return pair_value(i, j, best_theta, f); },
                                      best_phi - dphi, best_phi + dphi, best_phi, best, 24);
    if (!(best < base)) return;

    CVector new_i, new_j;
    pair_value(i, j, best_theta, best_phi, &new_i, &new_j);
    const double ci = eval(new_i), cj = eval(new_j);
    if (!(ci + cj < base)) return;
    psi_.row(i) = new_i.transpose();
    psi_.row(j) = new_j.transpose();
    contrib_[ui] = ci;
    contrib_[uj] = cj;
  }

  CMatrix psi_;
  MemberMeasure measure_;
  RealList contrib_;
  CVector buffer_, ri_, rj_;
};

inline RestartResult run_restart(const Spectral& spec, const Dims& dims, RoofMeasure measure, std::size_t l,
                                 const RoofConfig& cfg, std::size_t restart) {
  Rng rng(cfg.seed, restart);
  const CMatrix v = random_isometry(l, spec.rank, rng);
  PairRotationSearch search(v * spec.factor.transpose(), MemberMeasure(dims, measure));
  RestartResult out;
  double prev = search.objective();
  out.trace.push_back(prev);
  for (std::size_t s = 0; s < cfg.sweeps && l > 1; ++s) {
    search.sweep();
    const double now = search.objective();
    out.trace.push_back(now);
    const bool converged = prev - now <= cfg.tol * std::abs(prev) || now <= 1e-15;
    prev = now;
    if (converged) break;
  }
  out.objective = prev;
  out.psi = search.psi();
  return out;
}

}  // namespace detail

inline std::size_t default_ensemble_size(std::size_t rank) { return std::min(rank * rank, rank + 4); }

// Ensemble from an L x r isometry V (rows become members).
inline EnsembleDecomposition decompose(const DensityMatrix& rho, const CMatrix& v) {
  const auto spec = detail::spectral_factor(rho);
  if (static_cast<std::size_t>(v.cols()) != spec.rank)
    throw ArgumentError("decompose: isometry has " + std::to_string(v.cols()) + " columns, rank is " +
                        std::to_string(spec.rank));
  const auto r = static_cast<Eigen::Index>(spec.rank);
  const double dev = (v.adjoint() * v - CMatrix::Identity(r, r)).cwiseAbs().maxCoeff();
  if (dev > 1e-10) throw ArgumentError("decompose: V^dagger V deviates from identity by " + std::to_string(dev));
  return detail::ensemble_from_rows(v * spec.factor.transpose(), rho.dims());
}

// Sum_i p_i E(psi_i) using the library's pure-state measures.
inline double ensemble_average(const EnsembleDecomposition& e, RoofMeasure measure) {
  double total = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i)
    total += e.weights[i] *
             (measure == RoofMeasure::Emmrs ? emmrs_pure(e.states[i]) : gte_emmrs_pure(e.states[i])).value;
  return total;
}

struct RoofResult {
  double estimate = 0.0;  // an upper bound on the roof, never the roof itself
  EnsembleDecomposition witness;
  std::vector<RealList> traces;  // per restart
};

inline RoofResult estimate_roof(const DensityMatrix& rho, RoofMeasure measure, const RoofConfig& cfg = {}) {
  const auto spec = detail::spectral_factor(rho);
  if (spec.rank == 0) throw ValidationError("trace", 1.0, kStateTol);
  detail::MemberMeasure probe(rho.dims(), measure);  // shape check up front
  const std::size_t l = cfg.ensemble_size == 0 ? default_ensemble_size(spec.rank) : cfg.ensemble_size;
  if (l < spec.rank)
    throw ArgumentError("estimate_roof: ensemble size " + std::to_string(l) + " below rank " +
                        std::to_string(spec.rank));
  const std::size_t restarts = std::max<std::size_t>(cfg.restarts, 1);

  std::vector<detail::RestartResult> results(restarts);
  if (cfg.parallel && restarts > 1) {
    std::vector<std::future<detail::RestartResult>> jobs;
    jobs.reserve(restarts);
    for (std::size_t k = 0; k < restarts; ++k)
      jobs.push_back(std::async(std::launch::async, [&, k] {
        return detail::run_restart(spec, rho.dims(), measure, l, cfg, k);
      }));
    for (std::size_t k = 0; k < restarts; ++k) results[k] = jobs[k].get();
  } else {
    for (std::size_t k = 0; k < restarts; ++k) results[k] = detail::run_restart(spec, rho.dims(), measure, l, cfg, k);
  }

  std::size_t best = 0;
  for (std::size_t k = 1; k < restarts; ++k)
    if (results[k].objective < results[best].objective) best = k;

  RoofResult out;
  out.estimate = std::max(0.0, results[best].objective);
  out.witness = detail::ensemble_from_rows(results[best].psi, rho.dims());
  for (auto& r : results) out.traces.push_back(std::move(r.trace));
  return out;
}

}  // namespace entmom
