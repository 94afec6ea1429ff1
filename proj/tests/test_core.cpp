#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "slred/core.hpp"

using namespace slred;

namespace {

Potential linear_q() {
  return Potential::from_function([](double x) { return x; }, SupBounds{1.0, 1.0, 0.0});
}

}  // namespace

TEST(BuildMatrix, ZeroPotentialK3) {
  const auto t = build_matrix(Potential::constant(0.0), 3);
  ASSERT_EQ(t.k(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(t.diagonal(i), 32.0);
  EXPECT_EQ(t.off_diagonal(), -16.0);
}

TEST(BuildMatrix, UnitPotentialK1) {
  const auto t = build_matrix(Potential::constant(1.0), 1);
  EXPECT_EQ(t.diagonal(0), 9.0);
  EXPECT_EQ(t.off_diagonal(), -4.0);
}

TEST(BuildMatrix, LinearPotentialSamplesGrid) {
  const auto t = build_matrix(linear_q(), 3);
  EXPECT_EQ(t.diagonal(0), 32.25);
  EXPECT_EQ(t.diagonal(1), 32.5);
  EXPECT_EQ(t.diagonal(2), 32.75);
}

TEST(BuildMatrix, RejectsZeroDimensionAndOutOfRange) {
  EXPECT_THROW(build_matrix(Potential::constant(0.0), 0), input_error);
  const auto bad = Potential::from_function([](double x) { return 2.0 * x; }, SupBounds{1.0, 1.0, 0.0});
  EXPECT_THROW(build_matrix(bad, 7), input_error);
  EXPECT_THROW(build_matrix(Potential::constant(-0.1), 3), input_error);
}

TEST(BuildMatrix, GershgorinInsideAdmissibleRange) {
  const auto q = Potential::from_function([](double x) { return 0.5 + 0.4 * std::sin(3.0 * x); },
                                          SupBounds{0.9, 1.0, 1.0});
  for (std::uint64_t k : {1u, 3u, 7u, 64u, 1023u}) {
    const auto t = build_matrix(q, k);
    const auto [lo, hi] = t.gershgorin();
    const double h = static_cast<double>(k + 1);
    EXPECT_GE(lo, 0.0);
    EXPECT_LE(hi, 4.0 * h * h + 1.0);
  }
}

TEST(PotentialFromIntegrand, ZeroIntegrandGivesHalf) {
  SmoothIntegrand f{[](double) { return 0.0; }, 1.0};
  const auto q = potential_from_integrand(f, 0.3);
  for (double x : {0.0, 0.25, 0.9}) EXPECT_EQ(q(x), 0.5);
}

TEST(PotentialFromIntegrand, BoundaryOfAdmissibility) {
  SmoothIntegrand f{[](double) { return 1.0; }, 1.0};
  const auto q = potential_from_integrand(f, 0.5);
  EXPECT_EQ(q(0.3), 1.0);
  EXPECT_NO_THROW(q.check_admissible());
  EXPECT_THROW(potential_from_integrand(f, 0.5000001), input_error);
}

TEST(PotentialFromIntegrand, SineOscillatesInBand) {
  // amplitude chosen so max(|f|, |f'|, |f''|) = 1
  const double s = 1.0 / (4.0 * std::numbers::pi * std::numbers::pi);
  SmoothIntegrand f{[s](double x) { return s * std::sin(2.0 * std::numbers::pi * x); }, 1.0};
  const auto q = potential_from_integrand(f, 0.1);
  for (int i = 0; i <= 1000; ++i) {
    const double v = q(i / 1000.0);
    EXPECT_GE(v, 0.4);
    EXPECT_LE(v, 0.6);
  }
  EXPECT_NO_THROW(q.check_admissible());
}

TEST(PotentialFromIntegrand, RoundTrip) {
  SmoothIntegrand f{[](double x) { return std::cos(x) * 0.7; }, 1.0};
  const double c = 0.37;
  const auto q = potential_from_integrand(f, c);
  for (int i = 0; i <= 4096; ++i) {
    const double x = i / 4096.0;
    EXPECT_NEAR((q(x) - 0.5) / c, f(x), 1e-15);
  }
}

TEST(PotentialFromIntegrand, SupBoundsClampedPerOrder) {
  SmoothIntegrand f{[](double x) { return x * x; }, 2.0};
  const auto q = potential_from_integrand(f, 0.25);
  EXPECT_DOUBLE_EQ(q.bounds().value, 1.0);
  EXPECT_DOUBLE_EQ(q.bounds().first, 0.5);
  EXPECT_DOUBLE_EQ(q.bounds().second, 0.5);
}

TEST(Potential, AdmissibilityCheck) {
  EXPECT_NO_THROW(linear_q().check_admissible());
  const auto steep = Potential::from_function([](double x) { return x; }, SupBounds{1.0, 1.5, 0.0});
  EXPECT_THROW(steep.check_admissible(), input_error);
}

TEST(Ledger, MergeSumsAndMaxes) {
  QueryLedger a{3, 5, 10, 7, 1};
  QueryLedger b{1, 2, 12, 0, 4};
  const QueryLedger m = merge(a, b);
  EXPECT_EQ(m.power_queries, 4u);
  EXPECT_EQ(m.bit_queries, 7u);
  EXPECT_EQ(m.qubits_peak, 12u);
  EXPECT_EQ(m.classical_ops, 7u);
  EXPECT_EQ(m.verification_queries, 5u);
}

TEST(Ledger, MergeAssociativeAndCommutative) {
  QueryLedger a{3, 5, 10, 7, 0}, b{1, 2, 12, 0, 2}, c{9, 0, 4, 11, 1};
  EXPECT_EQ(merge(merge(a, b), c), merge(a, merge(b, c)));
  EXPECT_EQ(merge(merge(a, b), c), merge(merge(c, a), b));
  EXPECT_EQ(merge(a, b), merge(b, a));
}

TEST(Confidence, SplitIsExact) {
  const double d = split_confidence(0.1, 3.0);
  EXPECT_NEAR(std::pow(1.0 - d, 3.0), 0.9, 1e-15);
  EXPECT_THROW(split_confidence(1.0, 2.0), input_error);
  EXPECT_THROW(check_delta(0.0), input_error);
}
