#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fixtures.hpp"
#include "salem/errors.hpp"
#include "salem/spectral.hpp"

namespace {

using salem::Complex;
using salem::Int;
constexpr long double kPiL = std::numbers::pi_v<long double>;

// Oracle: integrate the step density t^-j N^j on [a, a+1) N^-j cell by cell,
//   int e^(-2 pi i x xi) dx = (e^(-2 pi i a xi) - e^(-2 pi i b xi)) / (2 pi i xi).
Complex density_transform(const std::vector<Int>& atoms, Int scale, Int t, int j, long double xi) {
  if (xi == 0) return {static_cast<double>(atoms.size() * std::pow(static_cast<double>(t), -j)), 0.0};
  std::complex<long double> acc{0, 0};
  for (Int a : atoms) {
    const long double lo = static_cast<long double>(a) / scale;
    const long double hi = static_cast<long double>(a + 1) / scale;
    acc += std::polar(1.0L, -2 * kPiL * std::fmod(lo * xi, 1.0L)) - std::polar(1.0L, -2 * kPiL * std::fmod(hi * xi, 1.0L));
  }
  acc /= std::complex<long double>(0, 2 * kPiL * xi);
  acc *= std::pow(static_cast<long double>(t), -j) * scale;
  return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
}

TEST(Spectral, NormalizationAtZero) {
  const auto& c = salem::testing::desk();
  for (int j = 0; j <= 5; ++j) {
    EXPECT_NEAR(std::abs(salem::mu_hat(c, j, 0) - Complex(1, 0)), 0.0, 1e-12);
    for (int ell = 0; ell <= j; ++ell) {
      EXPECT_NEAR(std::abs(salem::f_mu_hat(c, j, ell, 0) - Complex(std::pow(4.0, -ell / 2.0), 0)), 0.0, 1e-12);
    }
  }
}

TEST(Spectral, MatchesCellIntegralOracle) {
  const auto& c = salem::testing::desk();
  std::mt19937_64 rng(2);
  for (int j = 1; j <= 4; ++j) {
    for (int ell = 0; ell <= j; ++ell) {
      const auto atoms = salem::restricted_atoms(c.levels, 16, j, ell);
      const salem::LevelTransform tr(c, j, salem::Weight::f(ell), 4);
      for (int i = 0; i < 30; ++i) {
        const Int m = static_cast<Int>(rng() % 2000000) - 1000000;
        const Complex want = density_transform(atoms, salem::ipow(16, j), 4, j, static_cast<long double>(m) / 4);
        EXPECT_NEAR(std::abs(tr.at_lattice(m) - want), 0.0, 1e-10);
        EXPECT_NEAR(std::abs(salem::f_mu_hat_real(c, j, ell, static_cast<double>(m) / 4) - want), 0.0, 1e-9);
        if (m % 4 == 0) {
          EXPECT_NEAR(std::abs(salem::f_mu_hat(c, j, ell, m / 4) - want), 0.0, 1e-10);
        }
      }
    }
  }
}

TEST(Spectral, ComputeSpectrum) {
  const auto& c = salem::testing::desk();
  const auto s = salem::compute_spectrum(c, 2, salem::Weight::f(1), {0, 5, -5, 1 << 20});
  ASSERT_EQ(s.coefficients.size(), 4u);
  EXPECT_NEAR(std::abs(s.coefficients[1] - std::conj(s.coefficients[2])), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(s.coefficients[1] - salem::f_mu_hat(c, 2, 1, 5)), 0.0, 1e-13);
  EXPECT_THROW(salem::f_mu_hat(c, 1, 2, 3), salem::InvalidArgument);
}

TEST(Spectral, TelescopingBounds) {
  const auto& c = salem::testing::desk();
  salem::FrequencyPlan plan;
  plan.exhaustive_limit = 1 << 14;
  plan.sampled = 512;
  for (int j = 0; j < 5; ++j) {
    const auto rep = salem::telescope_check(c, j, plan);
    EXPECT_EQ(rep.entries.size(), static_cast<std::size_t>(j + 1));
    EXPECT_TRUE(rep.holds()) << "j=" << j << " ratio " << rep.max_ratio();
    EXPECT_DOUBLE_EQ(rep.constant, 2 * c.params.c_rot);
  }
  // A tiny constant must be caught.
  EXPECT_FALSE(salem::telescope_check(c, 2, plan, 1e-6).holds());
}

TEST(Spectral, TrivialBound) {
  const auto& c = salem::testing::desk();
  salem::FrequencyPlan plan;
  plan.exhaustive_limit = 1 << 14;
  plan.sampled = 512;
  for (int h = 1; h <= 5; ++h) {
    const auto rep = salem::trivial_bound_check(c, h, plan);
    EXPECT_EQ(rep.entries.size(), static_cast<std::size_t>(h + 1));
    EXPECT_TRUE(rep.holds()) << "h=" << h << " ratio " << rep.max_ratio();
    EXPECT_GT(rep.max_ratio(), 0.1);
  }
}

TEST(Spectral, StrictConstructionTelescopes) {
  const auto& c = salem::testing::strict();
  salem::FrequencyPlan plan;
  plan.exhaustive_limit = 1 << 14;
  plan.sampled = 256;
  const auto rep = salem::telescope_check(c, 1, plan);
  EXPECT_TRUE(rep.holds()) << rep.max_ratio();
}

TEST(Spectral, DecayOctaves) {
  const auto& c = salem::testing::desk();
  std::vector<Int> ks(1 << 16);
  for (std::size_t i = 0; i < ks.size(); ++i) ks[i] = static_cast<Int>(i);
  const auto s = salem::compute_spectrum(c, 3, salem::Weight::mu(), ks);
  const auto d = salem::decay_report(s, 0.4);
  ASSERT_EQ(d.octaves.size(), 16u);
  for (const auto& o : d.octaves) {
    EXPECT_EQ(o.k_hi, 2 * o.k_lo);
    EXPECT_GE(o.argmax_k, o.k_lo);
    EXPECT_LT(o.argmax_k, o.k_hi);
    EXPECT_NEAR(o.max_scaled, o.max_abs * std::pow(1.0 + static_cast<double>(o.argmax_k), 0.2), 1e-12);
  }
  EXPECT_LT(d.fitted_exponent, 0.0);
  EXPECT_THROW(salem::decay_report(s, 0.0), salem::InvalidArgument);
}

TEST(Spectral, SeriesBoundIsBounded) {
  // The ratio k^-((alpha-beta)/2) ln k rises until ln k = 2/(alpha-beta)
  // and only then falls, so at desk scale we check boundedness and the
  // eventual decrease along N-adic frequencies.
  const auto p = salem::derive_params(4, 2, 1);
  std::vector<Int> ks;
  for (Int k = 1; k <= (Int{1} << 52); k *= 2) ks.push_back(k);
  const auto tb = salem::series_bound_check(p, 0.4, ks);
  EXPECT_NEAR(tb.rows.front().ratio, 1.0, 1e-12);
  EXPECT_LT(tb.max_ratio(), 3.0);
  // Direct summation oracle at one k.
  const Int k = 1 << 20;
  double lhs = 0.0;
  for (int j = 0; j < 200; ++j) {
    const double Nj1 = std::pow(16.0, j + 1);
    lhs += std::min(1.0, Nj1 / static_cast<double>(k)) * std::pow(4.0, -(j + 1) / 2.0) * std::log(8.0 * Nj1);
  }
  EXPECT_NEAR(salem::series_lhs(p, k), lhs, 1e-12 * lhs);
  double prev = 1e300;
  for (const auto& row : tb.rows) {
    if (std::log(static_cast<double>(row.k)) < 2.0 / (0.5 - 0.4) + 2 * std::log(16.0)) continue;
    if (std::llround(std::log2(static_cast<double>(row.k))) % 4 != 0) continue;
    EXPECT_LE(row.ratio, prev) << "k=" << row.k;
    prev = row.ratio;
  }
}

}  // namespace
