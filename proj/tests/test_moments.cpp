#include <cmath>

#include <gtest/gtest.h>

#include "entmom/families.hpp"
#include "entmom/moments.hpp"
#include "entmom/random.hpp"
#include "oracles.hpp"
#include "test_helpers.hpp"

namespace entmom {
namespace {

using testing::expect_lists_near;

TEST(RealignmentMoments, Examples) {
  expect_lists_near(realignment_moments(families::maximally_mixed({2, 2}), 2).values, {0.25, 1.0 / 16}, 1e-15);
  expect_lists_near(realignment_moments(families::bell_projector(), 2).values, {1.0, 0.25}, 1e-14);
  EXPECT_EQ(realignment_moments(families::bell_projector()).size(), 4u);  // default depth mn
  EXPECT_THROW(realignment_moments(families::bell_projector(), 5), ArgumentError);
}

// For rho_a, T^R_1 is the purity 5a^2/2 - 3a/2 + 867/1250 and
// T^R_2 agrees with the product oracle.
TEST(RealignmentMoments, RhoAAgainstOracles) {
  for (int i = 0; i < 20; ++i) {
    const double a = families::rho_a_lo() + (families::rho_a_hi() - families::rho_a_lo()) * i / 19.0;
    const auto rho = families::rho_a(a);
    const auto t = realignment_moments(rho, 2);
    EXPECT_NEAR(t[1], 2.5 * a * a - 1.5 * a + 867.0 / 1250.0, 1e-12);
    expect_lists_near(t.values, oracle::realignment_moments_direct(realign(rho), 2), 1e-12);
  }
}

// The reference polynomials T^R_1 = 7a^2/4 - a + 867/1250 and its quartic
// partner belong to the same matrix with entry (5,5) equal to (1-a)/2, whose
// trace is 1 + a/2.
TEST(RealignmentMoments, ReferencePolynomialsMatchTraceShiftedVariant) {
  for (int i = 0; i < 20; ++i) {
    const double a = families::rho_a_lo() + (families::rho_a_hi() - families::rho_a_lo()) * i / 19.0;
    CMatrix m = families::rho_a_matrix(a);
    m(4, 4) = (1.0 - a) / 2.0;
    EXPECT_NEAR(m.trace().real(), 1.0 + a / 2.0, 1e-15);
    const auto t = oracle::realignment_moments_direct(
        realign(validate(m / m.trace().real(), {3, 3})) * m.trace().real(), 2);
    const double t1 = 7.0 * a * a / 4.0 - a + 867.0 / 1250.0;
    const double t2 = 35.0 * std::pow(a, 4) / 16.0 - 1.5 * std::pow(a, 3) + 373.0 * a * a / 250.0 -
                      373.0 * a / 625.0 + 292899.0 / 1562500.0;
    EXPECT_NEAR(t[0], t1, 1e-12);
    EXPECT_NEAR(t[1], t2, 1e-12);
  }
}

TEST(RealignmentMoments, SpectralMatchesProducts) {
  Rng rng(21);
  for (const Dims& dims : {Dims{2, 2}, Dims{2, 3}, Dims{3, 3}}) {
    for (int trial = 0; trial < 10; ++trial) {
      const auto rho = random_density_matrix(dims, 0, rng);
      expect_lists_near(realignment_moments(rho).values,
                        oracle::realignment_moments_direct(realign(rho), rho.dim()), 1e-9);
      const auto t = realignment_moments(rho, 2);
      EXPECT_GE(t[1] * t[1] - t[2], -1e-12);
    }
  }
}

TEST(RealignmentMoments, SeparableFixturesBelowOne) {
  Rng rng(22);
  EXPECT_LE(realignment_moments(families::maximally_mixed({3, 3}), 1)[1], 1.0);
  for (int trial = 0; trial < 20; ++trial)
    EXPECT_LE(realignment_moments(testing::product_state({2, 3}, rng), 1)[1], 1.0 + 1e-12);
}

TEST(PtMoments, FirstMomentIsOne) {
  Rng rng(23);
  for (int trial = 0; trial < 20; ++trial)
    EXPECT_NEAR(pt_moments(random_density_matrix({3, 3}, 0, rng), 1)[1], 1.0, 1e-12);
}

TEST(PtMoments, IsotropicTwoQubitClosedForms) {
  for (int i = 0; i <= 40; ++i) {
    const double b = i / 40.0;
    const auto t = pt_moments(families::isotropic2(b), 4);
    EXPECT_NEAR(t[1], 1.0, 1e-10);
    EXPECT_NEAR(t[2], (4 * b * b - 2 * b + 1) / 3.0, 1e-10);
    EXPECT_NEAR(t[3], -8.0 / 9 * b * b * b + 5.0 / 3 * b * b - 2.0 / 3 * b + 5.0 / 36, 1e-10);
    EXPECT_NEAR(t[4], (84 * std::pow(b, 4) - 156 * b * b * b + 126 * b * b - 39 * b) / 81.0 + 21.0 / 324, 1e-10);
  }
}

TEST(PtMoments, Bell) {
  expect_lists_near(pt_moments(families::bell_projector()).values, {1, 1, 0.25, 0.25}, 1e-14);
}

TEST(Newton, Examples) {
  expect_lists_near(newton_coefficients({1.0, 0.5}, 2).values, {1, 1, 0.25}, 1e-15);
  expect_lists_near(newton_coefficients({1, 1, 0.25, 0.25}, 4).values, {1, 1, 0, -0.25, -1.0 / 16}, 1e-15);
  expect_lists_near(newton_coefficients({1, 0.25, 1.0 / 16, 1.0 / 64}, 4).values,
                    {1, 1, 3.0 / 8, 1.0 / 16, 1.0 / 256}, 1e-15);
  EXPECT_THROW(newton_coefficients({1.0}, 2), ArgumentError);
}

TEST(Newton, ReducedStateCoefficients) {
  const auto sigma = reduced_state(families::phi1(), {0});
  const auto b = newton_coefficients(reduced_moments(sigma), 3);
  expect_lists_near(b.values, oracle::elementary_symmetric({0.5, 1.0 / 3, 1.0 / 6}), 1e-14);
}

TEST(Newton, OraclesAgree) {
  Rng rng(24);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> lambda;
    for (std::size_t i = 0; i < 1 + rng.index(9); ++i) lambda.push_back(rng.normal());
    expect_lists_near(oracle::elementary_symmetric(lambda), oracle::elementary_symmetric_bruteforce(lambda), 1e-12);
  }
}

TEST(Newton, RoundTripOnRandomHermitian) {
  Rng rng(25);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t d = 1 + rng.index(9);
    CMatrix h = random_hermitian(d, rng);
    h /= trace_norm(h);
    const auto lambda = hermitian_eigenvalues(h);
    const auto a = newton_coefficients(power_traces(h, d), d);
    expect_lists_near(a.values, oracle::elementary_symmetric(lambda), 1e-8);
    EXPECT_NEAR(a.values[1], power_traces(h, 1)[0], 1e-9);
    for (std::size_t k = 0; k <= d; ++k) EXPECT_LE(std::abs(a.values[k] - oracle::elementary_symmetric(lambda)[k]), 1e-8);
  }
}

TEST(Newton, NoiseCoversRoundingOnStates) {
  Rng rng(26);
  for (int trial = 0; trial < 300; ++trial) {
    const Dims dims = trial % 2 ? Dims{3, 3} : Dims{2, 4};
    const auto rho = random_density_matrix(dims, 1 + rng.index(total_dim(dims)), rng);
    const CMatrix pt = partial_transpose(rho);
    const auto a = newton_coefficients(pt_moments(rho), rho.dim());
    const auto exact = oracle::elementary_symmetric(hermitian_eigenvalues(pt));
    for (std::size_t k = 0; k <= rho.dim(); ++k) EXPECT_LE(std::abs(a.values[k] - exact[k]), a.noise[k] + 1e-300) << k;
  }
}

TEST(Rank, FromSpectrum) {
  EXPECT_EQ(rank_from_spectrum(partial_transpose(families::bell_projector())), 4u);
  CVector v = CVector::Zero(4);
  v[2] = 1.0;
  EXPECT_EQ(rank_from_spectrum(partial_transpose(PureState(v, {2, 2}).density())), 1u);
  EXPECT_EQ(rank_from_spectrum(partial_transpose(families::maximally_mixed({3, 3}))), 9u);
}

TEST(Rank, FromCoefficients) {
  EXPECT_EQ(rank_from_coefficients(RealList{1, 1, 0.25}), 2u);
  EXPECT_EQ(rank_from_coefficients(RealList{1, 1, 0, -0.25, -1.0 / 16}), 4u);
  EXPECT_EQ(rank_from_coefficients(RealList{1, 1, 0, 0, 0}), 1u);
}

}  // namespace
}  // namespace entmom
