#include <gtest/gtest.h>

#include <cmath>

#include "salem/errors.hpp"
#include "salem/params.hpp"

namespace {

using salem::Int;

TEST(Params, DeskDerivedQuantities) {
  const auto p = salem::derive_params(4, 2, 1);
  EXPECT_EQ(p.N, 16);
  EXPECT_EQ(p.t, 4);
  EXPECT_EQ(p.sqrt_t, 2);
  EXPECT_EQ(p.alpha.numerator_base, 2);
  EXPECT_EQ(p.alpha.denominator_base, 4);
  EXPECT_DOUBLE_EQ(p.alpha.value, 0.5);
  EXPECT_EQ(p.ap_offset, 0);
  EXPECT_EQ(p.ap_gap, 15);
  EXPECT_EQ(salem::make_progression(p), (std::vector<Int>{0, 15}));
}

TEST(Params, LargerExponent) {
  const auto p = salem::derive_params(3, 2, 2);
  EXPECT_EQ(p.N, 81);
  EXPECT_EQ(p.t, 16);
  EXPECT_EQ(p.sqrt_t, 4);
  EXPECT_NEAR(p.alpha.value, std::log(2.0) / std::log(3.0), 1e-15);
  EXPECT_EQ(p.ap_gap, 26);
}

TEST(Params, Thresholds) {
  auto p = salem::derive_params(4, 2, 1);
  // eta_1^2 = 192/4 ln(8 * 16^3)
  EXPECT_NEAR(salem::eta(p, 1) * salem::eta(p, 1), 48.0 * std::log(32768.0), 1e-9);
  p.c_rot = 3072;
  EXPECT_NEAR(salem::lambda(p, 1), 3072.0 / 4.0 * std::log(2048.0), 1e-9);
  EXPECT_NEAR(salem::lambda(p, 1), 5855.7, 0.05);
  EXPECT_NEAR(salem::lambda(p, 1, 1), salem::lambda(p, 1) * std::sqrt(2.0), 1e-9);
  EXPECT_NEAR(salem::log8_pow(16, 3), std::log(8.0 * 4096.0), 1e-12);
}

TEST(Params, Overrides) {
  salem::ParamOverrides o;
  o.seed = 9;
  o.j_max = 3;
  o.ap_offset = 1;
  o.ap_gap = 7;
  const auto p = salem::derive_params(4, 2, 1, o);
  EXPECT_EQ(p.seed, 9u);
  EXPECT_EQ(p.j_max, 3);
  EXPECT_EQ(salem::make_progression(p), (std::vector<Int>{1, 8}));
}

TEST(Params, RejectsInvalid) {
  EXPECT_THROW(salem::derive_params(4, 4, 1), salem::InvalidArgument);
  EXPECT_THROW(salem::derive_params(4, 5, 1), salem::InvalidArgument);
  EXPECT_THROW(salem::derive_params(4, 2, 0), salem::InvalidArgument);
  salem::ParamOverrides o;
  o.ap_gap = 20;
  EXPECT_THROW(salem::derive_params(4, 2, 1, o), salem::InvalidArgument);
  salem::ParamOverrides big;
  big.j_max = 40;
  EXPECT_THROW(salem::derive_params(4, 2, 1, big), salem::ResourceLimit);
}

TEST(Params, IntegerHelpers) {
  EXPECT_EQ(salem::ipow(16, 5), 1 << 20);
  EXPECT_FALSE(salem::checked_pow(2, 63).has_value());
  EXPECT_THROW(salem::ipow(16, 20), salem::ResourceLimit);
  EXPECT_EQ(salem::floor_mod(-3, 5), 2);
  const Int big = Int{1} << 61;
  EXPECT_EQ(salem::mulmod(big - 1, big - 3, big), 3);
}

}  // namespace
