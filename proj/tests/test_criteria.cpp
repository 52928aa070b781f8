#include <cmath>

#include <gtest/gtest.h>

#include "entmom/criteria.hpp"
#include "entmom/families.hpp"
#include "entmom/random.hpp"
#include "test_helpers.hpp"

namespace entmom {
namespace {

// Werner Q^2 from singular values {1/2, u/2, u/2, u/2} of the realigned matrix.
double werner_q(double u) { return std::sqrt(std::sqrt(3.0) / 2.0 * u * std::sqrt(1.0 + u * u) + 0.25 + 0.75 * u * u); }

TEST(QStatistic, Examples) {
  EXPECT_NEAR(q_statistic(families::maximally_mixed({2, 2})), 0.5, 1e-12);
  EXPECT_NEAR(q_statistic(families::bell_projector()), std::sqrt(std::sqrt(1.5) + 1.0), 1e-12);
  EXPECT_NEAR(q_statistic(families::werner(0.6)), 1.0611, 1e-4);
  for (int i = 0; i <= 20; ++i) EXPECT_NEAR(q_statistic(families::werner(i / 20.0)), werner_q(i / 20.0), 1e-12);
}

TEST(Theorem1, Examples) {
  EXPECT_EQ(theorem1_test(families::werner(0.5)).verdict, Verdict::Inconclusive);
  EXPECT_EQ(theorem1_test(families::werner(0.6)).verdict, Verdict::Entangled);
  Rng rng(31);
  const auto r = theorem1_test(testing::product_state({2, 3}, rng));
  EXPECT_EQ(r.verdict, Verdict::Inconclusive);
  EXPECT_LE(r.statistic, 1.0 + 1e-12);
}

TEST(Theorem1, RhoAAlwaysAboveOne) {
  for (int i = 0; i < 100; ++i) {
    const double a = families::rho_a_lo() + (families::rho_a_hi() - families::rho_a_lo()) * i / 99.0;
    EXPECT_EQ(theorem1_test(families::rho_a(a)).verdict, Verdict::Entangled) << a;
  }
}

TEST(Theorem1, WernerRootMatchesClosedForm) {
  const double root = std::sqrt(2.0 * std::sqrt(7.0) - 5.0);
  EXPECT_NEAR(std::pow(root, 4) + 10 * root * root - 3, 0.0, 1e-12);
  double lo = 0.0, hi = 1.0;
  while (hi - lo > 1e-9) {
    const double mid = 0.5 * (lo + hi);
    (q_statistic(families::werner(mid)) > 1.0 ? hi : lo) = mid;
  }
  EXPECT_NEAR(0.5 * (lo + hi), root, 1e-6);
}

TEST(Theorem2, Bell) {
  const auto t = coefficient_sign_test(families::bell_projector());
  testing::expect_lists_near(t.coefficients.values, {1, 1, 0, -0.25, -1.0 / 16}, 1e-14);
  EXPECT_EQ(t.rank, 4u);
  const auto r = theorem2_test(families::bell_projector());
  EXPECT_EQ(r.verdict, Verdict::Entangled);
  ASSERT_TRUE(r.detail.has_value());
  EXPECT_EQ(*r.detail, 1u);
  EXPECT_GT(r.margin, 0.0);
}

TEST(Theorem2, Isotropic) {
  EXPECT_EQ(theorem2_test(families::isotropic2(0.6)).verdict, Verdict::Entangled);
  EXPECT_EQ(theorem2_test(families::isotropic2(0.4)).verdict, Verdict::Inconclusive);
}

TEST(Theorem2, ProductStatesAllPositive) {
  Rng rng(32);
  for (int trial = 0; trial < 20; ++trial) {
    const auto rho = testing::product_state({3, 3}, rng);
    const auto t = coefficient_sign_test(rho);
    EXPECT_FALSE(t.violation.has_value());
    EXPECT_EQ(t.rank, 1u);
    EXPECT_LE(t.margin, 0.0);
  }
}

TEST(Theorem2, CoefficientRankPath) {
  const auto r = theorem2_test(families::bell_projector(), 1e-8, RankSource::Coefficients);
  EXPECT_EQ(r.verdict, Verdict::Entangled);
  EXPECT_TRUE(r.note.empty());
}

TEST(Realignment, Examples) {
  for (int i = 0; i <= 10; ++i) {
    const double u = i / 10.0;
    EXPECT_NEAR(realignment_criterion(families::werner(u)).statistic, (1.0 + 3.0 * u) / 2.0, 1e-12);
  }
  EXPECT_EQ(realignment_criterion(families::werner(0.3)).verdict, Verdict::Inconclusive);
  EXPECT_EQ(realignment_criterion(families::werner(0.34)).verdict, Verdict::Entangled);
  EXPECT_NEAR(realignment_criterion(families::maximally_mixed({2, 2})).statistic, 0.5, 1e-12);
  EXPECT_NEAR(realignment_criterion(families::bell_projector()).statistic, 2.0, 1e-12);
}

TEST(Ppt, Examples) {
  for (int i = 0; i <= 10; ++i) {
    const double s = i / 10.0;
    const auto r = ppt_criterion(families::isotropic3(s));
    EXPECT_NEAR(r.statistic, std::min((1.0 - 4.0 * s) / 9.0, (1.0 - s) / 9.0 + s / 3.0), 1e-12);
    EXPECT_EQ(r.entangled(), s > 0.25);
  }
  const auto bell = ppt_criterion(families::bell_projector());
  EXPECT_NEAR(bell.statistic, -0.5, 1e-12);
  EXPECT_TRUE(bell.ppt_decisive);
  EXPECT_FALSE(ppt_criterion(families::isotropic3(0.5)).ppt_decisive);
  EXPECT_EQ(ppt_criterion(testing::diag_state({0.1, 0.2, 0.3, 0.4}, {2, 2})).verdict, Verdict::Inconclusive);
}

TEST(Analyze, OrderAndVerdicts) {
  const auto bell = analyze(families::bell_projector());
  ASSERT_EQ(bell.size(), 4u);
  const char* names[] = {"theorem1", "theorem2", "realignment", "ppt"};
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(bell[i].criterion, names[i]);
    EXPECT_TRUE(bell[i].entangled());
  }
  for (const auto& r : analyze(families::maximally_mixed({2, 2}))) EXPECT_FALSE(r.entangled());
  const auto w = analyze(families::werner(0.45));
  EXPECT_FALSE(w[0].entangled());
  EXPECT_TRUE(w[2].entangled());
  EXPECT_TRUE(w[3].entangled());
}

TEST(Analyze, EntangledImpliesPositiveMargin) {
  Rng rng(33);
  for (int trial = 0; trial < 50; ++trial) {
    for (const auto& r : analyze(random_density_matrix({2, 3}, 1 + rng.index(6), rng)))
      if (r.entangled()) {
        EXPECT_GT(r.margin, 0.0) << r.criterion;
      }
  }
}

TEST(Analyze, RejectsNonBipartite) {
  EXPECT_THROW(analyze(families::ghz3().density()), ShapeError);
}

TEST(Soundness, RandomSeparableStates) {
  Rng rng(34);
  for (const Dims& dims : {Dims{2, 2}, Dims{2, 3}, Dims{3, 3}}) {
    for (int trial = 0; trial < 40; ++trial) {
      const auto rho = random_separable(dims, 1 + rng.index(8), rng);
      for (const auto& r : analyze(rho)) EXPECT_FALSE(r.entangled()) << r.criterion;
    }
  }
}

TEST(Hierarchy, Theorem1ImpliesRealignment) {
  Rng rng(35);
  int flagged = 0;
  for (const Dims& dims : {Dims{2, 2}, Dims{2, 3}, Dims{3, 3}}) {
    for (int trial = 0; trial < 100; ++trial) {
      const auto rho = random_density_matrix(dims, 1 + rng.index(3), rng);
      if (theorem1_test(rho).entangled()) {
        ++flagged;
        EXPECT_TRUE(realignment_criterion(rho).entangled());
      }
    }
  }
  EXPECT_GT(flagged, 0);
}

TEST(Theorem2, AgreesWithPpt) {
  Rng rng(36);
  for (const Dims& dims : {Dims{2, 2}, Dims{2, 3}, Dims{3, 3}}) {
    for (int trial = 0; trial < 60; ++trial) {
      const auto raw = random_density_matrix(dims, 1 + rng.index(total_dim(dims)), rng);
      const double t = rng.uniform();
      const auto rho = validate(t * raw.matrix() + (1 - t) * families::maximally_mixed(dims).matrix(), dims);
      EXPECT_EQ(theorem2_test(rho).verdict, ppt_criterion(rho, 1e-8).verdict);
    }
  }
  for (int i = 0; i <= 20; ++i) {
    const auto rho = families::isotropic3(i / 20.0);
    EXPECT_EQ(theorem2_test(rho).verdict, ppt_criterion(rho, 1e-8).verdict) << i;
  }
}

}  // namespace
}  // namespace entmom
