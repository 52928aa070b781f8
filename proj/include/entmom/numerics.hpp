#pragma once

// Dense complex linear algebra on top of Eigen. Every spectrum returned here
// is sorted in descending order.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "entmom/errors.hpp"

namespace entmom {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RealList = std::vector<double>;

inline constexpr double kDefaultHermTol = 1e-8;

inline CMatrix adjoint(const CMatrix& m) { return m.adjoint(); }

inline CMatrix matmul(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                     " times " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  return a * b;
}

inline bool all_finite(const CMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
  return true;
}

// max |M - M^dagger| over entries.
inline double hermiticity_deviation(const CMatrix& m) {
  if (m.rows() != m.cols()) throw ShapeError("hermiticity check on non-square matrix");
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

namespace detail {

inline void require_square(const CMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw ShapeError(std::string(what) + ": expected a non-empty square matrix, got " +
                     std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

inline CMatrix symmetrized(const CMatrix& m, double herm_tol) {
  require_square(m, "hermitian input");
  const double dev = hermiticity_deviation(m);
  if (dev > herm_tol) throw ValidationError("hermiticity", dev, herm_tol);
  return (m + m.adjoint()) * 0.5;
}

// Descending order, ties keep solver order.
inline std::vector<Eigen::Index> descending_order(const Eigen::VectorXd& values) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(values.size()));
  for (Eigen::Index i = 0; i < values.size(); ++i) order[static_cast<std::size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return values[a] > values[b]; });
  return order;
}

}  // namespace detail

struct HermitianEigen {
  RealList values;  // descending
  CMatrix vectors;  // column k pairs with values[k]
};

inline HermitianEigen hermitian_eigensystem(const CMatrix& m, double herm_tol = kDefaultHermTol) {
  const CMatrix h = detail::symmetrized(m, herm_tol);
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h, Eigen::ComputeEigenvectors);
  const auto order = detail::descending_order(solver.eigenvalues());
  HermitianEigen out;
  out.values.reserve(order.size());
  out.vectors.resize(h.rows(), h.cols());
  for (std::size_t k = 0; k < order.size(); ++k) {
    out.values.push_back(solver.eigenvalues()[order[k]]);
    out.vectors.col(static_cast<Eigen::Index>(k)) = solver.eigenvectors().col(order[k]);
  }
  return out;
}

// Eigenvalues of (M + M^dagger)/2. Inputs further than herm_tol from
// Hermitian are rejected rather than repaired.
inline RealList hermitian_eigenvalues(const CMatrix& m, double herm_tol = kDefaultHermTol) {
  const CMatrix h = detail::symmetrized(m, herm_tol);
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h, Eigen::EigenvaluesOnly);
  const auto order = detail::descending_order(solver.eigenvalues());
  RealList out;
  out.reserve(order.size());
  for (auto idx : order) out.push_back(solver.eigenvalues()[idx]);
  return out;
}

inline RealList singular_values(const CMatrix& m) {
  Eigen::JacobiSVD<CMatrix> svd(m);
  const Eigen::VectorXd& s = svd.singularValues();
  return RealList(s.data(), s.data() + s.size());
}

inline double trace_norm(const CMatrix& m) {
  double total = 0.0;
  for (double s : singular_values(m)) total += s;
  return total;
}

// Sum_i lambda_i^k for k = 1..count.
inline RealList power_sums(const RealList& spectrum, std::size_t count) {
  RealList out(count, 0.0);
  for (double lambda : spectrum) {
    double p = 1.0;
    for (std::size_t k = 0; k < count; ++k) {
      p *= lambda;
      out[k] += p;
    }
  }
  return out;
}

// [Tr M, Tr M^2, ..., Tr M^K] through the spectrum.
inline RealList power_traces(const CMatrix& m, std::size_t k, double herm_tol = kDefaultHermTol) {
  if (k == 0) throw ArgumentError("power_traces: K must be at least 1");
  return power_sums(hermitian_eigenvalues(m, herm_tol), k);
}

// Count of |lambda| > tol in a spectrum.
inline std::size_t count_above(const RealList& spectrum, double tol) {
  return static_cast<std::size_t>(
      std::count_if(spectrum.begin(), spectrum.end(), [tol](double x) { return std::abs(x) > tol; }));
}

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline CVector kron(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a[i] * b;
  return out;
}

}  // namespace entmom
