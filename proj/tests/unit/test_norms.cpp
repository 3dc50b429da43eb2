#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "salem/energy.hpp"
#include "salem/errors.hpp"
#include "salem/norms.hpp"
#include "salem/spectral.hpp"

namespace {

using salem::Int;

TEST(Quadrature, LebesgueSincSquared) {
  const auto& c = salem::testing::desk();
  const auto e = salem::lp_norm_quadrature(c, 0, 0, 2.0);
  EXPECT_NEAR(e.value, 1.0, 0.005);
  // Missing mass equals the tail; the estimate accounts for it.
  EXPECT_NEAR(e.value + e.tail_estimate, 1.0, 1e-4);
  EXPECT_LE(1.0 - e.value, e.tail_bound);
  EXPECT_EQ(e.method, salem::NormMethod::kQuadrature);
  EXPECT_DOUBLE_EQ(e.K, 32.0);
  EXPECT_DOUBLE_EQ(e.h, 0.25);
}

TEST(Quadrature, HalvingStepIsStable) {
  const auto& c = salem::testing::desk();
  for (double p : {2.0, 3.0, 4.0, 2.5}) {
    const auto e = salem::lp_norm_quadrature(c, 2, 1, p);
    EXPECT_LT(e.refinement_delta, 1e-3) << "p=" << p;
  }
}

TEST(Quadrature, MatchesExactEvenPowers) {
  const auto& c = salem::testing::desk();
  for (int r = 1; r <= 2; ++r) {
    for (int j = 0; j <= 3; ++j) {
      for (int ell = 0; ell <= std::min(j, 2); ++ell) {
        const double q = salem::lp_norm_quadrature(c, j, ell, 2.0 * r).value;
        const double x = static_cast<double>(salem::exact_l2r_norm(c, j, ell, r).value);
        EXPECT_NEAR(q / x, 1.0, 0.005) << "r=" << r << " j=" << j << " l=" << ell;
      }
    }
  }
}

TEST(Quadrature, RejectsBadArguments) {
  const auto& c = salem::testing::desk();
  EXPECT_THROW(salem::lp_norm_quadrature(c, 1, 0, 0.5), salem::InvalidArgument);
  salem::QuadratureOptions o;
  o.q = 2;
  EXPECT_THROW(salem::lp_norm_quadrature(c, 1, 0, 2.0, o), salem::InvalidArgument);
  o.q = 4;
  o.K = 17;
  EXPECT_THROW(salem::lp_norm_quadrature(c, 1, 0, 2.0, o), salem::InvalidArgument);
  o.K = 32;
  o.self_check_tolerance = 1e-2;  // |phi| has kinks at its zeros
  const auto e = salem::lp_norm_quadrature(c, 1, 0, 1.0, o);
  EXPECT_TRUE(std::isinf(e.tail_bound));
}

TEST(LqMass, ClosedFormAndCounting) {
  const auto& c = salem::testing::desk();
  const auto m = salem::lq_mass(c, 2, 2.0);
  EXPECT_DOUBLE_EQ(m.mass, 0.25);
  EXPECT_DOUBLE_EQ(m.norm, 0.5);
  EXPECT_TRUE(m.exact());
  for (const auto& lv : m.levels) EXPECT_DOUBLE_EQ(lv.direct_mass, 0.25);
  for (double q : {1.0, 2.0, 7.5}) EXPECT_DOUBLE_EQ(salem::lq_mass(c, 0, q).norm, 1.0);
}

TEST(Thresholds, HalfDimension) {
  const auto t = salem::thresholds(0.5);
  EXPECT_DOUBLE_EQ(t.p_necessary, 4.0);
  EXPECT_DOUBLE_EQ(t.p_sharp, 6.0);
  EXPECT_DOUBLE_EQ(t.p_mock_at_alpha, 6.0);
  EXPECT_DOUBLE_EQ(salem::p_mock(0.5, 0.5), 6.0);
  // At q = 2 the bound coincides with the sharp exponent; q -> inf gives (2 - alpha)/alpha.
  EXPECT_DOUBLE_EQ(salem::pq_bound(0.5, 2.0), 6.0);
  EXPECT_NEAR(salem::pq_bound(0.5, 1e12), 3.0, 1e-9);
  EXPECT_TRUE(std::isinf(salem::pq_bound(0.5, 1.0)));
  double prev = 1e300;
  for (double beta = 0.05; beta <= 0.5; beta += 0.05) {
    EXPECT_LT(salem::p_mock(0.5, beta), prev);
    prev = salem::p_mock(0.5, beta);
  }
}

TEST(RestrictionRatio, Assembly) {
  const auto& c = salem::testing::desk();
  const auto r0 = salem::restriction_ratio(c, 3, 0, 4.0, 2.0);
  EXPECT_DOUBLE_EQ(r0.denominator, 1.0);
  EXPECT_NEAR(r0.ratio, std::pow(static_cast<double>(salem::exact_l2r_norm(c, 3, 0, 2).value), 0.25), 1e-12);
  EXPECT_EQ(r0.method, salem::NormMethod::kExactBspline);
  const auto r1 = salem::restriction_ratio(c, 3, 2, 3.0, 2.0);
  EXPECT_EQ(r1.method, salem::NormMethod::kQuadrature);
  EXPECT_DOUBLE_EQ(r1.denominator, std::pow(4.0, -0.5));
  EXPECT_EQ(r1.r, 3);
  EXPECT_TRUE(r1.failing_range);
  EXPECT_TRUE(r1.pq_region);
  EXPECT_GE(r1.slack, 1.0);
}

TEST(HolderChain, EqualityAtTopExponent) {
  const auto& c = salem::testing::desk();
  const auto h = salem::holder_chain_check(c, 3, 1, 6.0, 3);
  EXPECT_NEAR(h.rhs, h.l2r, 1e-12 * h.l2r);
  EXPECT_TRUE(h.chain_holds());
}

TEST(HolderChain, HoldsWithSlack) {
  const auto& c = salem::testing::desk();
  for (double p : {2.0, 3.0, 4.0}) {
    const auto h = salem::holder_chain_check(c, 3, 1, p, 3);
    EXPECT_TRUE(h.chain_holds()) << "p=" << p;
    EXPECT_GE(h.slack, 0.0);
    EXPECT_TRUE(h.implied_holds());
    EXPECT_TRUE(h.bound_holds());
    EXPECT_NEAR(h.phi_at_zero, 0.5, 1e-12);
    EXPECT_LE(h.sup_on_grid, h.sup_bound * (1 + 1e-12));
    EXPECT_NEAR(h.sup_on_grid, h.sup_bound, 1e-12);
  }
  EXPECT_THROW(salem::holder_chain_check(c, 3, 1, 7.0, 3), salem::InvalidArgument);
}

TEST(EnergyIntegral, LebesgueConverges) {
  const auto& c = salem::testing::desk();
  const auto rows = salem::energy_integral(c, 0, 0.5, {64, 256, 1024, 4096});
  ASSERT_EQ(rows.size(), 4u);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_GE(rows[i].value, rows[i - 1].value);
  // The tail beyond K is at most 2 int_K^inf xi^(-3/2) / pi^2.
  EXPECT_LT(rows[3].value - rows[2].value, 4.0 / (std::sqrt(1024.0) * 9.8));
}

TEST(EnergyIntegral, ConstructedMeasureGrows) {
  const auto& c = salem::testing::desk();
  const auto rows = salem::energy_integral(c, 4, 0.9, {16, 256, 4096, 65536});
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_GT(rows[i].value, 1.5 * rows[i - 1].value);
}

TEST(BallCondition, ExactAndStraddling) {
  const auto& c = salem::testing::desk();
  for (int j = 0; j <= 5; ++j) {
    const auto b = salem::ball_condition_report(c, j);
    EXPECT_TRUE(b.exact_ratio_is_one());
    for (const auto& lv : b.levels) {
      EXPECT_EQ(lv.surviving, static_cast<Int>(std::pow(4, lv.m)));
      EXPECT_DOUBLE_EQ(lv.max_ratio, 1.0);
    }
    EXPECT_LE(b.sup_straddle(), 2.0);
  }
}

}  // namespace
