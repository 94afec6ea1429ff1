#include <gtest/gtest.h>

#include "slred/grover.hpp"
#include "slred/oracle.hpp"

using namespace slred;

namespace {

double weighted(const SmoothIntegrand& f, const BumpFamily& fam) {
  const auto r = oracle::weighted_integral(f.eval, 1e-16, fam.breakpoints());
  return r.value;
}

}  // namespace

TEST(WeightedIntegrand, ZeroIndexWitnessVanishes) {
  const auto fam = make_bump_family(8);
  const auto b = BooleanOracle::indicator(3, {0});
  const auto g = assemble_weighted_integrand(b, fam);
  for (int i = 0; i <= 1000; ++i) EXPECT_EQ(g(i / 1000.0), 0.0);
  EXPECT_LE(b.calls(), 7u);
}

TEST(WeightedIntegrand, IndicatorOfThreeAtN2) {
  const auto fam = make_bump_family(4);
  const auto g = assemble_weighted_integrand(BooleanOracle::indicator(2, {3}), fam);
  EXPECT_NEAR(weighted(g, fam), 3.0 / (140.0 * 16.0 * 256.0), 1e-17);
}

TEST(WeightedIntegrand, IdentityForAllSingleWitnesses) {
  for (int n = 0; n <= 3; ++n) {
    const auto fam = make_bump_family(std::uint64_t{1} << n);
    const double nn = static_cast<double>(fam.size());
    for (std::uint64_t j = 0; j < fam.size(); ++j) {
      const auto g = assemble_weighted_integrand(BooleanOracle::indicator(n, {j}), fam);
      EXPECT_NEAR(16.0 * nn * nn * nn * nn / fam.int_h() * weighted(g, fam), static_cast<double>(j), 1e-9);
    }
  }
}

TEST(Grover, IndicatorOfThree) {
  Context ctx;
  const auto r = grover_find(BooleanOracle::indicator(2, {3}), 0.1, ctx);
  EXPECT_EQ(r.index, 3);
  EXPECT_EQ(r.status, GroverStatus::found);
}

TEST(Grover, ZeroWitnessRoundsToZero) {
  Context ctx;
  EXPECT_EQ(grover_find(BooleanOracle::indicator(3, {0}), 0.1, ctx).index, 0);
}

TEST(Grover, AllSingleWitnessesUpToN3) {
  Context ctx;
  for (int n = 0; n <= 3; ++n)
    for (std::uint64_t j = 0; j < (std::uint64_t{1} << n); ++j) {
      const auto r = grover_find(BooleanOracle::indicator(n, {j}), 0.05, ctx);
      EXPECT_EQ(r.index, static_cast<std::int64_t>(j));
      EXPECT_EQ(r.status, GroverStatus::found);
      EXPECT_EQ(r.ledger.verification_queries, 1u);
    }
}

TEST(Grover, PromiseViolationIsReported) {
  Context ctx;
  // two witnesses: the weighted mean lands between them and B is 0 there
  const auto r = grover_find(BooleanOracle::indicator(3, {1, 3}), 0.1, ctx);
  EXPECT_EQ(r.index, 4);
  EXPECT_EQ(r.status, GroverStatus::not_confirmed);
  const auto none = grover_find(BooleanOracle::constant(2, false), 0.1, ctx);
  EXPECT_NE(none.status, GroverStatus::found);
}

TEST(Grover, SpectralN2PlanMatchesCapacity) {
  Context ctx(Backend::spectral, 17);
  const auto r = grover_find(BooleanOracle::indicator(2, {2}), 0.1, ctx);
  EXPECT_EQ(r.index, 2);
  EXPECT_EQ(r.integral.lambda.plan.b, 57);
  EXPECT_EQ(r.integral.lambda.plan.k, 32767u);
  Context dense(Backend::dense, 17);
  EXPECT_THROW(grover_find(BooleanOracle::indicator(2, {2}), 0.1, dense), capacity_error);
}
