#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "slred/boolmean.hpp"
#include "slred/oracle.hpp"

using namespace slred;

namespace {

std::vector<std::uint8_t> bits_of(std::uint64_t code, int n) {
  std::vector<std::uint8_t> v(std::size_t{1} << n);
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = (code >> j) & 1u;
  return v;
}

double weighted(const SmoothIntegrand& f, const BumpFamily& fam) {
  const auto r = oracle::weighted_integral(f.eval, 1e-14, fam.breakpoints());
  EXPECT_TRUE(r.converged);
  return r.value;
}

}  // namespace

TEST(Oracle, CounterSharedByRestrictions) {
  const auto b = BooleanOracle::from_bits({0, 1, 1, 0});
  const auto lo = b.restrict(0, 1);
  const auto hi = b.restrict(2, 1);
  EXPECT_FALSE(lo(0));
  EXPECT_TRUE(lo(1));
  EXPECT_TRUE(hi(0));
  EXPECT_FALSE(hi(1));
  EXPECT_EQ(b.calls(), 4u);
  EXPECT_TRUE(b.complement()(0));
  EXPECT_EQ(b.calls(), 5u);
  EXPECT_THROW(b(4), input_error);
  EXPECT_THROW(b.restrict(3, 1), input_error);
  EXPECT_THROW(BooleanOracle::from_bits({1, 0, 1}), input_error);
}

TEST(Assemble, ZeroOracleGivesZeroIntegrand) {
  const auto fam = make_bump_family(4);
  const auto f = assemble_mean_integrand(BooleanOracle::constant(2, false), fam);
  for (int i = 0; i <= 100; ++i) EXPECT_EQ(f(i / 100.0), 0.0);
}

TEST(Assemble, AllOnesN2) {
  const auto fam = make_bump_family(2);
  const auto f = assemble_mean_integrand(BooleanOracle::constant(1, true), fam);
  EXPECT_NEAR(weighted(f, fam), 1.0 / 8960.0, 1e-15);
}

TEST(Assemble, SingleLiveCell) {
  const auto fam = make_bump_family(4);
  const auto f = assemble_mean_integrand(BooleanOracle::indicator(2, {3}), fam);
  for (int i = 0; i <= 1000; ++i) {
    const double x = i / 1000.0;
    if (x <= 0.625 || x >= 0.75) {
      EXPECT_EQ(f(x), 0.0) << x;
    }
  }
  EXPECT_GT(f(0.6875), 0.0);
}

TEST(Assemble, IntegralIdentityExhaustive) {
  for (int n = 0; n <= 3; ++n) {
    const auto fam = make_bump_family(std::uint64_t{1} << n);
    const double nn = static_cast<double>(fam.size());
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << (1u << n)); ++code) {
      const auto bits = bits_of(code, n);
      double s = 0;
      for (auto v : bits) s += v;
      const auto f = assemble_mean_integrand(BooleanOracle::from_bits(bits), fam);
      EXPECT_NEAR(weighted(f, fam), fam.int_h() / (16.0 * nn * nn) * s / nn, 1e-15);
    }
  }
}

TEST(Assemble, MemoizesOneCallPerCell) {
  const auto fam = make_bump_family(8);
  const auto b = BooleanOracle::from_bits(bits_of(0xA5, 3));
  const auto f = assemble_mean_integrand(b, fam);
  for (int i = 0; i <= 10000; ++i) f(i / 10000.0);
  EXPECT_EQ(b.calls(), 8u);
}

TEST(Assemble, SmoothAcrossCellBoundaries) {
  const auto fam = make_bump_family(4);
  const auto f = assemble_mean_integrand(BooleanOracle::from_bits({1, 1, 0, 1}), fam);
  for (std::uint64_t j = 0; j <= 4; ++j) {
    const double x = fam.left(j);
    for (double h : {1e-3, 5e-4}) {
      const double left = (f(x) - 2 * f(x - h) + f(x - 2 * h)) / (h * h);
      const double right = (f(x) - 2 * f(x + h) + f(x + 2 * h)) / (h * h);
      // second derivative vanishes at a boundary; both one-sided differences are O(h)
      EXPECT_NEAR(left, right, 60.0 * h) << j;
    }
  }
}

TEST(Assemble, DeclaredBoundHolds) {
  for (int n = 0; n <= 6; ++n) {
    const auto fam = make_bump_family(std::uint64_t{1} << n);
    const auto f = assemble_mean_integrand(BooleanOracle::constant(n, true), fam);
    const double h = 1e-5;
    double worst = 0.0;
    for (int i = 2; i < 100000 - 2; ++i) {
      const double x = i / 100000.0;
      const double d2 = (f(x + h) - 2 * f(x) + f(x - h)) / (h * h);
      const double d1 = (f(x + h) - f(x - h)) / (2 * h);
      worst = std::max({worst, std::abs(f(x)), std::abs(d1), std::abs(d2)});
    }
    EXPECT_LE(worst, f.bound_m) << n;
  }
}

TEST(Mean, HalfAtN1) {
  Context ctx;
  const auto r = boolean_mean(BooleanOracle::from_bits({1, 0}), 0.1, 0.1, ctx);
  EXPECT_GE(r.value, 0.4);
  EXPECT_LE(r.value, 0.6);
  EXPECT_DOUBLE_EQ(r.rounded, 0.5);
}

TEST(Mean, AllOnesExact) {
  Context ctx;
  const auto r = boolean_mean(BooleanOracle::constant(3, true), 1.0 / 24.0, 0.1, ctx);
  EXPECT_TRUE(r.exact);
  EXPECT_EQ(r.count, 8u);
  EXPECT_DOUBLE_EQ(r.rounded, 1.0);
}

TEST(Mean, SampledFunctionsAtN3) {
  Context ctx;
  for (std::uint64_t code : {0x00u, 0x01u, 0x80u, 0x5Au, 0xFEu, 0x3Cu, 0xFFu}) {
    const auto bits = bits_of(code, 3);
    std::uint64_t s = 0;
    for (auto v : bits) s += v;
    const auto b = BooleanOracle::from_bits(bits);
    const auto r = boolean_mean(b, 1.0 / 24.0, 0.1, ctx);
    EXPECT_EQ(r.count, s) << code;
    EXPECT_LE(r.ledger.bit_queries, 8u);
    EXPECT_EQ(r.ledger.bit_queries, b.calls());
  }
}

TEST(Mean, RejectsBadEpsilon) {
  Context ctx;
  EXPECT_THROW(boolean_mean(BooleanOracle::constant(1, true), 1.0, 0.1, ctx), input_error);
  EXPECT_THROW(boolean_mean(BooleanOracle::constant(1, true), 0.0, 0.1, ctx), input_error);
}
