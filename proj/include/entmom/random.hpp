#pragma once

// Seeded random matrices and states.
//
// Streams are std::mt19937_64 seeded through SplitMix64 from (seed, stream).
// Uniforms take the top 53 bits of each draw and normals use Box-Muller, so
// the sequences do not depend on the standard library's distributions.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "entmom/errors.hpp"
#include "entmom/numerics.hpp"
#include "entmom/states.hpp"

namespace entmom {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) : engine_(derive_seed(seed, stream)) {}

  Rng split(std::uint64_t stream) { return Rng(engine_(), stream); }

  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1;
    do u1 = uniform();
    while (u1 <= 0.0);
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  // Real and imaginary parts independent N(0, 1/2).
  Complex complex_normal() {
    const double re = normal();
    const double im = normal();
    return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
  }

  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * double(n)) % n; }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

inline CMatrix ginibre(std::size_t rows, std::size_t cols, Rng& rng) {
  CMatrix g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index j = 0; j < g.cols(); ++j)
    for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, j) = rng.complex_normal();
  return g;
}

// Haar-distributed L x r isometry: QR of a Ginibre matrix with the phases of
// R's diagonal pushed into Q.
inline CMatrix random_isometry(std::size_t l, std::size_t r, Rng& rng) {
  if (r == 0 || l < r) throw ArgumentError("random_isometry: need L >= r >= 1");
  const CMatrix g = ginibre(l, r, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  const auto li = static_cast<Eigen::Index>(l);
  const auto ri = static_cast<Eigen::Index>(r);
  CMatrix q = qr.householderQ() * CMatrix::Identity(li, ri);
  const CMatrix& packed = qr.matrixQR();
  for (Eigen::Index k = 0; k < ri; ++k) {
    const Complex d = packed(k, k);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(k) *= d / mag;
  }
  return q;
}

inline CMatrix random_isometry(std::size_t l, std::size_t r, std::uint64_t seed) {
  Rng rng(seed);
  return random_isometry(l, r, rng);
}

inline CMatrix random_unitary(std::size_t d, Rng& rng) { return random_isometry(d, d, rng); }

inline PureState random_pure_state(const Dims& dims, Rng& rng) {
  CVector v(static_cast<Eigen::Index>(total_dim(dims)));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = rng.complex_normal();
  return PureState::normalized(v, dims);
}

// Induced measure: Tr_env of a random pure state; rank <= `rank`
// (rank = p gives the Hilbert-Schmidt ensemble).
inline DensityMatrix random_density_matrix(const Dims& dims, std::size_t rank, Rng& rng) {
  const std::size_t p = total_dim(dims);
  if (rank == 0) rank = p;
  const CMatrix g = ginibre(p, rank, rng);
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return validate(rho, dims);
}

// Random Hermitian matrix with entries of order one.
inline CMatrix random_hermitian(std::size_t d, Rng& rng) {
  const CMatrix g = ginibre(d, d, rng);
  return (g + g.adjoint()) * 0.5;
}

// Convex mixture of `terms` random product pure states with flat Dirichlet weights.
inline DensityMatrix random_separable(const Dims& dims, std::size_t terms, Rng& rng) {
  const std::size_t p = total_dim(dims);
  CMatrix rho = CMatrix::Zero(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
  std::vector<double> w(terms);
  double total = 0.0;
  for (auto& x : w) {
    double u;
    do u = rng.uniform();
    while (u <= 0.0);
    x = -std::log(u);
    total += x;
  }
  for (std::size_t t = 0; t < terms; ++t) {
    CVector v = CVector::Ones(1);
    for (auto d : dims) v = kron(v, random_pure_state({d}, rng).amplitudes());
    rho += (w[t] / total) * (v * v.adjoint());
  }
  return validate(rho, dims);
}

}  // namespace entmom
