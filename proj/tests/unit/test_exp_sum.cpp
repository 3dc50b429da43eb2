#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fixtures.hpp"
#include "salem/errors.hpp"
#include "salem/exp_sum.hpp"
#include "salem/spectral.hpp"

namespace {

using salem::Complex;
using salem::Int;
constexpr double kPi = std::numbers::pi;

// Oracle: long double direct sum with its own phase reduction.
Complex direct_sum(const std::vector<Int>& atoms, Int k, Int P) {
  long double re = 0, im = 0;
  for (Int a : atoms) {
    const long double r = static_cast<long double>(salem::floor_mod(static_cast<Int>((static_cast<__int128>(a) * k) % P), P));
    const long double th = -2.0L * std::numbers::pi_v<long double> * r / P;
    re += std::cos(th);
    im += std::sin(th);
  }
  return {static_cast<double>(re), static_cast<double>(im)};
}

std::vector<Int> random_atoms(std::mt19937_64& rng, Int P, std::size_t n) {
  std::vector<Int> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(static_cast<Int>(rng() % static_cast<std::uint64_t>(P)));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

TEST(ExpSum, FftMatchesNaiveOnRandomCases) {
  std::mt19937_64 rng(1000);
  for (int c = 0; c < 200; ++c) {
    const Int P = 1 + static_cast<Int>(rng() % 5000);
    const auto atoms = random_atoms(rng, P, 1 + rng() % 300);
    const Int k = static_cast<Int>(rng() % 1000000) - 500000;
    const Complex naive = salem::exp_sum(atoms, k, P, salem::ExpSumMethod::kNaive);
    const Complex fft = salem::exp_sum(atoms, k, P, salem::ExpSumMethod::kFft);
    EXPECT_LE(std::abs(naive - fft), 1e-9 * static_cast<double>(atoms.size())) << "case " << c;
    EXPECT_LE(std::abs(naive - direct_sum(atoms, k, P)), 1e-9 * static_cast<double>(atoms.size()));
  }
}

TEST(ExpSum, BlockedMatchesNaive) {
  const auto& c = salem::testing::desk();
  std::mt19937_64 rng(3);
  for (int j = 1; j <= 5; ++j) {
    const Int P = salem::ipow(16, j);
    const auto& atoms = c.levels[static_cast<std::size_t>(j)].atoms;
    for (int i = 0; i < 50; ++i) {
      const Int k = static_cast<Int>(rng() >> 4);
      const Complex a = salem::exp_sum(atoms, k, P, salem::ExpSumMethod::kNaive);
      const Complex b = salem::exp_sum(atoms, k, P, salem::ExpSumMethod::kBlocked, 16);
      EXPECT_LE(std::abs(a - b), 1e-9 * static_cast<double>(atoms.size()));
    }
  }
}

TEST(ExpSum, EvaluatorRoutesAgree) {
  const auto& atoms = salem::testing::desk().levels[4].atoms;
  const Int P = salem::ipow(16, 4);
  const salem::ExpSumEvaluator tab(atoms, P);
  const salem::ExpSumEvaluator tree(atoms, P, 1, 16);
  const salem::ExpSumEvaluator naive(atoms, P, 1, 0);
  EXPECT_EQ(tab.method(), salem::ExpSumMethod::kFft);
  EXPECT_EQ(tree.method(), salem::ExpSumMethod::kBlocked);
  EXPECT_EQ(naive.method(), salem::ExpSumMethod::kNaive);
  for (Int k : {Int{0}, Int{1}, Int{-7}, Int{12345}, Int{1} << 40}) {
    EXPECT_LE(std::abs(tab(k) - naive(k)), 1e-9 * 256);
    EXPECT_LE(std::abs(tree(k) - naive(k)), 1e-9 * 256);
  }
}

TEST(ExpSum, Parseval) {
  const auto& c = salem::testing::desk();
  for (int j = 0; j <= 5; ++j) {
    const auto r = salem::parseval_check(c.levels[static_cast<std::size_t>(j)].atoms, salem::ipow(16, j));
    EXPECT_NEAR(r.rhs, std::pow(16.0, j) * std::pow(4.0, j), 1e-9);
    EXPECT_LE(r.relative_error, 1e-6);
  }
}

TEST(ExpSum, BudgetIsEnforced) {
  const std::vector<Int> atoms{0, 1};
  EXPECT_THROW(salem::exp_sum_all(atoms, 1 << 10, 1 << 8), salem::ResourceLimit);
}

TEST(Phase, ExactReduction) {
  EXPECT_EQ(salem::unit_phase(0, 7), Complex(1.0, 0.0));
  EXPECT_NEAR(std::abs(salem::unit_phase(1, 4) - Complex(0.0, -1.0)), 0.0, 1e-16);
  const Int big = (Int{1} << 60) + 1;
  EXPECT_NEAR(std::abs(salem::unit_phase(big, Int{1} << 60) - salem::unit_phase(1, Int{1} << 60)), 0.0, 1e-15);
}

TEST(Sinc, ZerosAndValues) {
  EXPECT_EQ(salem::sinc(0.0), 1.0);
  for (int n = 1; n < 10; ++n) {
    EXPECT_EQ(salem::sinc(n), 0.0);
    EXPECT_EQ(salem::sinc(-n), 0.0);
  }
  EXPECT_NEAR(salem::sinc(0.5), 2.0 / kPi, 1e-16);
}

TEST(BoxTransform, MatchesClosedForm) {
  for (double x : {0.1, 0.5, 1.7, -3.25, 100.125}) {
    // (1 - e^(-2 pi i x)) / (2 pi i x)
    const Complex want = (Complex(1.0, 0.0) - std::exp(Complex(0.0, -2 * kPi * x))) / Complex(0.0, 2 * kPi * x);
    EXPECT_NEAR(std::abs(salem::box_transform(x) - want), 0.0, 1e-14);
  }
  for (Int num : {Int{1}, Int{5}, Int{-7}, Int{1023}}) {
    const double x = static_cast<double>(num) / 64.0;
    EXPECT_NEAR(std::abs(salem::box_transform(num, 64) - salem::box_transform(x)), 0.0, 1e-14);
  }
  EXPECT_EQ(salem::box_transform(Int{128}, Int{64}), Complex(0.0, 0.0));
  EXPECT_EQ(salem::box_transform(Int{0}, Int{64}), Complex(1.0, 0.0));
}

TEST(RootTable, Values) {
  const salem::RootTable w(12);
  EXPECT_NEAR(std::abs(w[3] - Complex(0.0, -1.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(w.at(-3) - Complex(0.0, 1.0)), 0.0, 1e-15);
}

}  // namespace
