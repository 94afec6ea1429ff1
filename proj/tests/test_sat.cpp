#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "slred/oracle.hpp"
#include "slred/sat.hpp"
#include "support.hpp"

using namespace slred;

namespace {

std::vector<std::uint8_t> bits_of(std::uint64_t code, int n) {
  std::vector<std::uint8_t> v(std::size_t{1} << n);
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = (code >> j) & 1u;
  return v;
}

}  // namespace

TEST(Dimacs, SimpleClause) {
  const auto f = parse_dimacs("p cnf 2 1\n1 -2 0\n");
  EXPECT_EQ(f.num_vars, 2);
  ASSERT_EQ(f.clauses.size(), 1u);
  EXPECT_EQ(f.clauses[0], (std::vector<int>{1, -2}));
}

TEST(Dimacs, CommentsAndUnsat) {
  const auto f = parse_dimacs("c comment\np cnf 1 2\n1 0\n-1 0\n");
  EXPECT_EQ(f.clauses.size(), 2u);
  for (std::uint64_t j = 0; j < 2; ++j) EXPECT_FALSE(cnf_oracle(f)(j));
}

TEST(Dimacs, ClausesMaySpanLines) {
  const auto f = parse_dimacs("p cnf 3 2\n1 2\n 3 0 -1\n0\n");
  EXPECT_EQ(f.clauses[0], (std::vector<int>{1, 2, 3}));
  EXPECT_EQ(f.clauses[1], (std::vector<int>{-1}));
}

TEST(Dimacs, Errors) {
  EXPECT_THROW(parse_dimacs("p cnf 3 3\n1 0\n2 0\n"), input_error);
  EXPECT_NO_THROW(parse_dimacs("p cnf 3 3\n1 0\n2 0\n", false));
  EXPECT_THROW(parse_dimacs("p dnf 3 1\n1 0\n"), input_error);
  EXPECT_THROW(parse_dimacs("p cnf 3\n1 0\n"), input_error);
  EXPECT_THROW(parse_dimacs("p cnf 2 1\n1 4 0\n"), input_error);
  EXPECT_THROW(parse_dimacs("p cnf 2 1\n1 2\n"), input_error);
  EXPECT_THROW(parse_dimacs("1 2 0\n"), input_error);
  EXPECT_THROW(parse_dimacs("p cnf 2 1\n0\n"), input_error);
  EXPECT_THROW(parse_dimacs("p cnf 2 1\n1 x 0\n"), input_error);
}

TEST(CnfOracle, BitOrder) {
  const auto single = cnf_oracle(parse_dimacs("p cnf 1 1\n1 0\n"));
  EXPECT_TRUE(single(1));
  EXPECT_FALSE(single(0));
  const auto xor2 = cnf_oracle(parse_dimacs("p cnf 2 2\n1 2 0\n-1 -2 0\n"));
  EXPECT_FALSE(xor2(0));
  EXPECT_TRUE(xor2(1));
  EXPECT_TRUE(xor2(2));
  EXPECT_FALSE(xor2(3));
  // variable 1 is the least significant bit
  const auto x1_not_x2 = cnf_oracle(parse_dimacs("p cnf 2 2\n1 0\n-2 0\n"));
  EXPECT_TRUE(x1_not_x2(1));
  EXPECT_FALSE(x1_not_x2(2));
}

TEST(Decide, SmallExamples) {
  Context ctx;
  EXPECT_FALSE(sat_decide(BooleanOracle::constant(2, false), 0.1, ctx).satisfiable);
  EXPECT_TRUE(sat_decide(BooleanOracle::indicator(2, {3}), 0.1, ctx).satisfiable);
}

TEST(Decide, ExhaustiveUpToN3) {
  Context ctx;
  for (int n = 0; n <= 3; ++n) {
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << (1u << n)); ++code) {
      const auto bits = bits_of(code, n);
      const auto truth = oracle::brute_sat([&](std::uint64_t j) { return bits[j] != 0; }, n);
      EXPECT_EQ(sat_decide(BooleanOracle::from_bits(bits), 0.05, ctx).satisfiable, truth.any) << n << ":" << code;
    }
  }
}

TEST(Search, SmallExamples) {
  Context ctx;
  EXPECT_EQ(sat_search(BooleanOracle::indicator(2, {3}), 0.1, ctx).index, 3u);
  EXPECT_EQ(sat_search(BooleanOracle::indicator(3, {2, 5}), 0.1, ctx).index, 2u);
  EXPECT_EQ(sat_search(BooleanOracle::constant(3, true), 0.1, ctx).index, 0u);
}

TEST(Search, ExhaustiveSmallestWitness) {
  Context ctx;
  for (int n = 0; n <= 3; ++n) {
    for (std::uint64_t code = 1; code < (std::uint64_t{1} << (1u << n)); ++code) {
      const auto bits = bits_of(code, n);
      const auto truth = oracle::brute_sat([&](std::uint64_t j) { return bits[j] != 0; }, n);
      const auto r = sat_search(BooleanOracle::from_bits(bits), 0.05, ctx);
      EXPECT_EQ(r.index, *truth.smallest) << n << ":" << code;
      EXPECT_TRUE(r.witness_confirmed);
      EXPECT_EQ(r.ledger.verification_queries, 1u);
    }
  }
}

TEST(Search, NoWitnessIsFlagged) {
  Context ctx;
  const auto b = BooleanOracle::constant(3, false);
  const auto r = sat_search(b, 0.1, ctx);
  EXPECT_FALSE(r.witness_confirmed);
  EXPECT_EQ(r.index, 7u);
  EXPECT_EQ(b.calls(), r.ledger.bit_queries + r.ledger.verification_queries);
}

TEST(Search, ConfidenceSplitIsExact) {
  for (int n : {1, 3, 8, 20}) {
    const double d1 = split_confidence(0.05, n);
    EXPECT_GE(std::pow(1.0 - d1, n), 1.0 - 0.05 - 1e-15);
  }
}

TEST(Decide, Random3CnfAtN6) {
  std::mt19937_64 rng(2024);
  Context ctx;
  for (int i = 0; i < 20; ++i) {
    const auto f = testsupport::random_3cnf(rng, 6, 20 + static_cast<int>(rng() % 15));
    const auto truth = oracle::brute_sat_clauses(6, f.clauses);
    const auto d = sat_decide(cnf_oracle(f), 0.05, ctx);
    EXPECT_EQ(d.satisfiable, truth.any) << i;
    if (truth.any) {
      EXPECT_EQ(sat_search(cnf_oracle(f), 0.05, ctx).index, *truth.smallest) << i;
    }
  }
}

TEST(Decide, PowerQueriesFollowPlan) {
  Context ctx;
  const auto d = sat_decide(BooleanOracle::indicator(3, {5}), 0.25, ctx);
  EXPECT_EQ(d.ledger.power_queries, d.mean.integral.lambda.plan.power_queries());
  EXPECT_EQ(d.ledger.qubits_peak, d.mean.integral.lambda.plan.qubits());
}
