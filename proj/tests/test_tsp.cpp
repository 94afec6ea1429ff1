#include <gtest/gtest.h>

#include <random>

#include "slred/oracle.hpp"
#include "slred/tsp.hpp"

using namespace slred;

namespace {

std::vector<std::vector<std::int64_t>> abs_diff(int m) {
  std::vector<std::vector<std::int64_t>> d(m, std::vector<std::int64_t>(m));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) d[i][j] = std::abs(i - j);
  return d;
}

std::vector<std::vector<std::int64_t>> random_matrix(std::mt19937_64& rng, int m, int top) {
  std::uniform_int_distribution<int> u(1, top);
  std::vector<std::vector<std::int64_t>> d(m, std::vector<std::int64_t>(m, 0));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (i != j) d[i][j] = u(rng);
  return d;
}

}  // namespace

TEST(Codec, DecodeExamples) {
  EXPECT_EQ(decode_permutation(0, 3), (std::vector<int>{1, 2, 3}));
  EXPECT_EQ(decode_permutation(2, 3), (std::vector<int>{2, 1, 3}));
  EXPECT_EQ(decode_permutation(5, 3), (std::vector<int>{3, 2, 1}));
  EXPECT_EQ(decode_permutation(23, 4), (std::vector<int>{4, 3, 2, 1}));
}

TEST(Codec, PaddingIndicesClampToLast) {
  const PermutationCodec c(3);
  EXPECT_EQ(c.n(), 3);
  EXPECT_EQ(c.decode(6), c.decode(5));
  EXPECT_EQ(c.decode(7), c.decode(5));
  EXPECT_THROW(c.decode(8), input_error);
  EXPECT_EQ(PermutationCodec(2).n(), 1);
  EXPECT_EQ(PermutationCodec(20).n(), 62);
}

TEST(Codec, RankInvertsDecode) {
  for (int m = 1; m <= 7; ++m) {
    const PermutationCodec c(m);
    std::vector<int> prev;
    for (std::uint64_t j = 0; j < c.factorial(); ++j) {
      const auto p = c.decode(j);
      EXPECT_EQ(c.rank(p), j);
      if (j > 0) {
        EXPECT_LT(prev, p);
      }
      prev = p;
    }
  }
}

TEST(Length, ClosedTour) {
  const DistanceMatrix d({{0, 1, 5}, {5, 0, 1}, {1, 5, 0}});
  EXPECT_EQ(tour_length(d, {1, 2, 3}), 3);
  EXPECT_EQ(tour_length(d, {1, 3, 2}), 15);
  const DistanceMatrix two({{0, 8}, {8, 0}});
  EXPECT_EQ(tour_length(two, {2, 1}), 16);
}

TEST(Matrix, Validation) {
  EXPECT_THROW(DistanceMatrix(std::vector<std::vector<std::int64_t>>{{0}}), input_error);
  EXPECT_THROW(DistanceMatrix({{0, 1}, {1, 1}}), input_error);
  EXPECT_THROW(DistanceMatrix({{0, 0}, {1, 0}}), input_error);
  EXPECT_THROW(DistanceMatrix({{0, 1, 2}, {1, 0}}), input_error);
}

TEST(Matrix, Loaders) {
  const auto t = DistanceMatrix::from_text("3\n0 1 5\n5 0 1\n1 5 0\n");
  EXPECT_EQ(t(1, 3), 5);
  EXPECT_EQ(t(3, 1), 1);
  const auto j = DistanceMatrix::from_json(R"({"m": 2, "d": [[0, 4], [7, 0]]})");
  EXPECT_EQ(j(2, 1), 7);
  EXPECT_THROW(DistanceMatrix::from_text("3\n0 1 5\n5 0 1\n1 5\n"), input_error);
  EXPECT_THROW(DistanceMatrix::from_text("2\n0 1\n1 0\n9\n"), input_error);
  EXPECT_THROW(DistanceMatrix::from_json(R"({"m": 3, "d": [[0, 4], [7, 0]]})"), input_error);
  EXPECT_THROW(DistanceMatrix::from_json("{"), input_error);
}

TEST(Bound, Examples) {
  Context ctx;
  std::vector<std::vector<std::int64_t>> ones(3, std::vector<std::int64_t>(3, 1));
  for (int i = 0; i < 3; ++i) ones[i][i] = 0;
  const auto b3 = estimate_distance_bound(DistanceMatrix(ones), 0.05, ctx);
  EXPECT_EQ(b3.bound, 4u);
  EXPECT_EQ(b3.cap, 2);
  const auto b2 = estimate_distance_bound(DistanceMatrix({{0, 8}, {8, 0}}), 0.05, ctx);
  EXPECT_EQ(b2.bound, 16u);
  EXPECT_EQ(b2.k_stop, 4);
}

TEST(Decide, Examples) {
  Context ctx;
  const DistanceMatrix d(abs_diff(4));
  EXPECT_TRUE(tsp_decide(d, 6, 0.1, ctx).yes);
  EXPECT_FALSE(tsp_decide(d, 5, 0.1, ctx).yes);
  const DistanceMatrix asym({{0, 1, 5}, {5, 0, 1}, {1, 5, 0}});
  EXPECT_TRUE(tsp_decide(asym, 3, 0.1, ctx).yes);
  EXPECT_FALSE(tsp_decide(asym, 2, 0.1, ctx).yes);
  EXPECT_THROW(tsp_decide(asym, -1, 0.1, ctx), input_error);
}

TEST(Solve, AgainstBruteForce) {
  Context ctx;
  const auto asym = oracle::brute_tsp({{0, 1, 5}, {5, 0, 1}, {1, 5, 0}});
  const auto r = tsp_solve(DistanceMatrix({{0, 1, 5}, {5, 0, 1}, {1, 5, 0}}), 0.1, ctx);
  EXPECT_EQ(r.length, asym.length);
  EXPECT_EQ(r.tour, asym.tour);
  EXPECT_TRUE(r.consistent);

  const auto line = tsp_solve(DistanceMatrix(abs_diff(4)), 0.1, ctx);
  EXPECT_EQ(line.length, 6);
  EXPECT_EQ(line.tour, oracle::brute_tsp(abs_diff(4)).tour);
}

TEST(Solve, RandomSmallInstances) {
  std::mt19937_64 rng(11);
  Context ctx;
  for (int i = 0; i < 4; ++i) {
    const auto raw = random_matrix(rng, 4, 9);
    const auto truth = oracle::brute_tsp(raw);
    const auto r = tsp_solve(DistanceMatrix(raw), 0.05, ctx);
    EXPECT_EQ(r.length, truth.length) << i;
    EXPECT_EQ(r.tour, truth.tour) << i;
    EXPECT_EQ(r.index, PermutationCodec(4).rank(truth.tour));
  }
}
