#pragma once

// Density matrices, pure states and the index permutations acting on them.
//
// Composite indices are first-subsystem major: for dims [d0, d1, ..., dk-1]
// the flat index of digits (i0, ..., ik-1) is ((i0 * d1 + i1) * d2 + ...).

#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "entmom/errors.hpp"
#include "entmom/numerics.hpp"

namespace entmom {

using Dims = std::vector<std::size_t>;

inline constexpr double kStateTol = 1e-8;
inline constexpr double kPureNormTol = 1e-10;

inline std::size_t total_dim(const Dims& dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

enum class Positivity { Required, Unchecked };

class DensityMatrix;
DensityMatrix validate(CMatrix data, Dims dims, double tol = kStateTol,
                       Positivity positivity = Positivity::Required);

class DensityMatrix {
 public:
  const CMatrix& matrix() const noexcept { return data_; }
  const Dims& dims() const noexcept { return dims_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(data_.rows()); }
  std::size_t parties() const noexcept { return dims_.size(); }
  // False for states admitted with Positivity::Unchecked that really are indefinite.
  bool positive() const noexcept { return positive_; }
  Positivity positivity_policy() const noexcept { return policy_; }
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

  double purity() const { return data_.cwiseAbs2().sum(); }

 private:
  friend DensityMatrix validate(CMatrix, Dims, double, Positivity);
  DensityMatrix() = default;

  CMatrix data_;
  Dims dims_;
  bool positive_ = true;
  Positivity policy_ = Positivity::Required;
  double min_eigenvalue_ = 0.0;
};

inline DensityMatrix validate(CMatrix data, Dims dims, double tol, Positivity positivity) {
  if (data.rows() != data.cols() || data.rows() == 0) {
    throw ShapeError("density matrix must be square and non-empty, got " +
                     std::to_string(data.rows()) + "x" + std::to_string(data.cols()));
  }
  if (dims.empty()) throw ShapeError("empty subsystem dimension list");
  for (auto d : dims)
    if (d == 0) throw ShapeError("zero subsystem dimension");
  if (total_dim(dims) != static_cast<std::size_t>(data.rows())) {
    throw ShapeError("product of dims " + std::to_string(total_dim(dims)) +
                     " does not match matrix side " + std::to_string(data.rows()));
  }
  if (!all_finite(data)) throw ValidationError("finite", INFINITY, 0.0);

  const double herm_dev = hermiticity_deviation(data);
  if (herm_dev > tol) throw ValidationError("hermiticity", herm_dev, tol);
  data = (data + data.adjoint()) * 0.5;

  const double trace_dev = std::abs(data.trace().real() - 1.0);
  if (trace_dev > tol) throw ValidationError("trace", trace_dev, tol);

  const RealList spectrum = hermitian_eigenvalues(data, tol);
  const double min_eig = spectrum.back();
  if (positivity == Positivity::Required && min_eig < -tol)
    throw ValidationError("positivity", -min_eig, tol);

  DensityMatrix rho;
  rho.data_ = std::move(data);
  rho.dims_ = std::move(dims);
  rho.positive_ = min_eig >= -tol;
  rho.policy_ = positivity;
  rho.min_eigenvalue_ = min_eig;
  return rho;
}

class PureState {
 public:
  PureState(CVector amplitudes, Dims dims) : amplitudes_(std::move(amplitudes)), dims_(std::move(dims)) {
    if (dims_.empty() || total_dim(dims_) != static_cast<std::size_t>(amplitudes_.size()))
      throw ShapeError("pure state length does not match product of dims");
    for (Eigen::Index i = 0; i < amplitudes_.size(); ++i)
      if (!std::isfinite(amplitudes_[i].real()) || !std::isfinite(amplitudes_[i].imag()))
        throw ValidationError("finite", INFINITY, 0.0);
    const double dev = std::abs(amplitudes_.norm() - 1.0);
    if (dev > kPureNormTol) throw ValidationError("norm", dev, kPureNormTol);
  }

  // Rescales a nonzero vector to unit norm.
  static PureState normalized(CVector v, Dims dims) {
    const double n = v.norm();
    if (!(n > 0.0)) throw ArgumentError("cannot normalize a zero vector");
    return PureState(v / n, std::move(dims));
  }

  const CVector& amplitudes() const noexcept { return amplitudes_; }
  const Dims& dims() const noexcept { return dims_; }
  std::size_t parties() const noexcept { return dims_.size(); }

  DensityMatrix density() const {
    return validate(amplitudes_ * amplitudes_.adjoint(), dims_);
  }

 private:
  CVector amplitudes_;
  Dims dims_;
};

struct SchmidtSpectrum {
  RealList coefficients;  // descending, length min(m, n)
};

namespace detail {

inline void require_bipartite(const Dims& dims, const char* what) {
  if (dims.size() != 2) {
    throw ShapeError(std::string(what) + ": needs exactly two subsystems, got " +
                     std::to_string(dims.size()));
  }
}

inline std::vector<std::size_t> strides(const Dims& dims) {
  std::vector<std::size_t> s(dims.size(), 1);
  for (std::size_t k = dims.size(); k-- > 1;) s[k - 1] = s[k] * dims[k];
  return s;
}

// For every flat index, its flat index within the kept subsystems and within
// the traced-out subsystems.
struct Split {
  std::vector<std::size_t> kept;
  std::vector<std::size_t> traced;
  std::size_t kept_dim = 1;
  std::size_t traced_dim = 1;
};

inline Split split_indices(const Dims& dims, const std::vector<bool>& keep) {
  Split s;
  for (std::size_t k = 0; k < dims.size(); ++k) (keep[k] ? s.kept_dim : s.traced_dim) *= dims[k];
  const std::size_t n = total_dim(dims);
  s.kept.resize(n);
  s.traced.resize(n);
  const auto stride = strides(dims);
  for (std::size_t flat = 0; flat < n; ++flat) {
    std::size_t kf = 0, tf = 0;
    for (std::size_t k = 0; k < dims.size(); ++k) {
      const std::size_t digit = (flat / stride[k]) % dims[k];
      if (keep[k]) kf = kf * dims[k] + digit;
      else tf = tf * dims[k] + digit;
    }
    s.kept[flat] = kf;
    s.traced[flat] = tf;
  }
  return s;
}

inline std::vector<bool> keep_mask(const Dims& dims, const std::set<std::size_t>& keep) {
  if (keep.empty()) throw ArgumentError("partial trace: keep set is empty");
  std::vector<bool> mask(dims.size(), false);
  for (auto k : keep) {
    if (k >= dims.size())
      throw ArgumentError("partial trace: subsystem index " + std::to_string(k) + " out of range");
    mask[k] = true;
  }
  return mask;
}

inline CMatrix partial_trace_matrix(const CMatrix& m, const Dims& dims, const std::vector<bool>& keep) {
  const Split s = split_indices(dims, keep);
  CMatrix out = CMatrix::Zero(static_cast<Eigen::Index>(s.kept_dim), static_cast<Eigen::Index>(s.kept_dim));
  const std::size_t n = s.kept.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (s.traced[i] == s.traced[j])
        out(static_cast<Eigen::Index>(s.kept[i]), static_cast<Eigen::Index>(s.kept[j])) +=
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  return out;
}

// Reshape of a state vector into (kept x traced); A A^dagger is the reduced state.
inline CMatrix amplitude_matrix(const CVector& v, const Dims& dims, const std::vector<bool>& keep) {
  const Split s = split_indices(dims, keep);
  CMatrix a(static_cast<Eigen::Index>(s.kept_dim), static_cast<Eigen::Index>(s.traced_dim));
  for (std::size_t i = 0; i < s.kept.size(); ++i)
    a(static_cast<Eigen::Index>(s.kept[i]), static_cast<Eigen::Index>(s.traced[i])) =
        v[static_cast<Eigen::Index>(i)];
  return a;
}

}  // namespace detail

// Transpose on the second subsystem:
// result(i*n + j, k*n + l) = rho(i*n + l, k*n + j).
inline CMatrix partial_transpose(const DensityMatrix& rho) {
  detail::require_bipartite(rho.dims(), "partial_transpose");
  const auto m = static_cast<Eigen::Index>(rho.dims()[0]);
  const auto n = static_cast<Eigen::Index>(rho.dims()[1]);
  const CMatrix& r = rho.matrix();
  CMatrix out(m * n, m * n);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < m; ++k)
        for (Eigen::Index l = 0; l < n; ++l) out(i * n + j, k * n + l) = r(i * n + l, k * n + j);
  return out;
}

// Realignment to an m^2 x n^2 matrix with A-side pairs on rows:
// result(i*m + j, k*n + l) = rho(i*n + k, j*n + l).
inline CMatrix realign(const DensityMatrix& rho) {
  detail::require_bipartite(rho.dims(), "realign");
  const auto m = static_cast<Eigen::Index>(rho.dims()[0]);
  const auto n = static_cast<Eigen::Index>(rho.dims()[1]);
  const CMatrix& r = rho.matrix();
  CMatrix out(m * m, n * n);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index l = 0; l < n; ++l) out(i * m + j, k * n + l) = r(i * n + k, j * n + l);
  return out;
}

inline DensityMatrix partial_trace(const DensityMatrix& rho, const std::set<std::size_t>& keep) {
  const auto mask = detail::keep_mask(rho.dims(), keep);
  Dims kept_dims;
  for (std::size_t k = 0; k < mask.size(); ++k)
    if (mask[k]) kept_dims.push_back(rho.dims()[k]);
  return validate(detail::partial_trace_matrix(rho.matrix(), rho.dims(), mask), std::move(kept_dims),
                  kStateTol, rho.positivity_policy());
}

// Reduced state of a pure state, computed from the amplitude reshape.
inline DensityMatrix reduced_state(const PureState& psi, const std::set<std::size_t>& keep) {
  const auto mask = detail::keep_mask(psi.dims(), keep);
  Dims kept_dims;
  for (std::size_t k = 0; k < mask.size(); ++k)
    if (mask[k]) kept_dims.push_back(psi.dims()[k]);
  const CMatrix a = detail::amplitude_matrix(psi.amplitudes(), psi.dims(), mask);
  return validate(a * a.adjoint(), std::move(kept_dims));
}

inline SchmidtSpectrum schmidt_spectrum(const PureState& psi) {
  detail::require_bipartite(psi.dims(), "schmidt_spectrum");
  const CMatrix a = detail::amplitude_matrix(psi.amplitudes(), psi.dims(), {true, false});
  SchmidtSpectrum out;
  for (double s : singular_values(a)) out.coefficients.push_back(s * s);
  return out;
}

}  // namespace entmom
