#pragma once

// Traveling salesman through the minimum routines: tours are indexed by
// Lehmer unranking and their lengths form a lazily evaluated vector.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "slred/context.hpp"
#include "slred/minimize.hpp"
#include "slred/sat.hpp"

namespace slred {

class DistanceMatrix {
 public:
  explicit DistanceMatrix(std::vector<std::vector<std::int64_t>> d) : d_(std::move(d)) {
    const std::size_t m = d_.size();
    if (m < 2) throw input_error("distance matrix needs at least 2 cities");
    if (m > 20) throw input_error("at most 20 cities are supported (m! must fit in 64 bits)");
    for (std::size_t i = 0; i < m; ++i) {
      if (d_[i].size() != m) throw input_error("distance matrix must be square");
      for (std::size_t j = 0; j < m; ++j) {
        if (i == j && d_[i][j] != 0) throw input_error("distance matrix diagonal must be zero");
        if (i != j && d_[i][j] < 1) throw input_error("off-diagonal distances must be positive integers");
      }
    }
  }

  /// First token m, then m rows of m integers.
  static DistanceMatrix from_text(const std::string& text) {
    std::istringstream in(text);
    long m = 0;
    if (!(in >> m) || m < 2) throw input_error("matrix text must start with the city count m >= 2");
    std::vector<std::vector<std::int64_t>> d(static_cast<std::size_t>(m), std::vector<std::int64_t>(static_cast<std::size_t>(m)));
    for (auto& row : d)
      for (auto& v : row)
        if (!(in >> v)) throw input_error("matrix text has fewer than m*m integers");
    std::string extra;
    if (in >> extra) throw input_error("trailing data after the matrix");
    return DistanceMatrix(std::move(d));
  }

  /// {"m": m, "d": [[...], ...]}
  static DistanceMatrix from_json(const std::string& text) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
      const auto m = j.at("m").get<std::int64_t>();
      auto d = j.at("d").get<std::vector<std::vector<std::int64_t>>>();
      if (static_cast<std::int64_t>(d.size()) != m) throw input_error("JSON 'm' disagrees with the row count");
      return DistanceMatrix(std::move(d));
    } catch (const nlohmann::json::exception& e) {
      throw input_error(std::string("bad matrix JSON: ") + e.what());
    }
  }

  int m() const { return static_cast<int>(d_.size()); }
  std::int64_t operator()(int from, int to) const { return d_[static_cast<std::size_t>(from - 1)][static_cast<std::size_t>(to - 1)]; }
  std::int64_t d_max() const {
    std::int64_t v = 0;
    for (const auto& row : d_) v = std::max(v, *std::max_element(row.begin(), row.end()));
    return v;
  }
  const std::vector<std::vector<std::int64_t>>& rows() const { return d_; }

 private:
  std::vector<std::vector<std::int64_t>> d_;
};

/// Lehmer-order bijection between {0..m!-1} and permutations of 1..m.
class PermutationCodec {
 public:
  explicit PermutationCodec(int m) : m_(m) {
    if (m < 1 || m > 20) throw input_error("permutation size must lie in [1, 20]");
    factorial_ = 1;
    for (int i = 2; i <= m; ++i) factorial_ *= static_cast<std::uint64_t>(i);
    while ((std::uint64_t{1} << n_) < factorial_) ++n_;
  }

  int m() const { return m_; }
  int n() const { return n_; }
  std::uint64_t size() const { return std::uint64_t{1} << n_; }
  std::uint64_t factorial() const { return factorial_; }

  std::vector<int> decode(std::uint64_t j) const {
    if (j >= size()) throw input_error("permutation index out of range");
    j = std::min(j, factorial_ - 1);
    std::vector<int> pool(static_cast<std::size_t>(m_));
    for (int i = 0; i < m_; ++i) pool[static_cast<std::size_t>(i)] = i + 1;
    std::vector<int> perm;
    std::uint64_t radix = factorial_;
    for (int i = m_; i >= 1; --i) {
      radix /= static_cast<std::uint64_t>(i);
      const std::uint64_t digit = j / radix;
      j %= radix;
      perm.push_back(pool[digit]);
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(digit));
    }
    return perm;
  }

  std::uint64_t rank(const std::vector<int>& perm) const {
    if (static_cast<int>(perm.size()) != m_) throw input_error("permutation has the wrong length");
    std::vector<int> pool(static_cast<std::size_t>(m_));
    for (int i = 0; i < m_; ++i) pool[static_cast<std::size_t>(i)] = i + 1;
    std::uint64_t j = 0, radix = factorial_;
    for (int i = m_; i >= 1; --i) {
      radix /= static_cast<std::uint64_t>(i);
      const auto it = std::find(pool.begin(), pool.end(), perm[static_cast<std::size_t>(m_ - i)]);
      if (it == pool.end()) throw input_error("not a permutation of 1..m");
      j += static_cast<std::uint64_t>(it - pool.begin()) * radix;
      pool.erase(it);
    }
    return j;
  }

 private:
  int m_;
  int n_ = 0;
  std::uint64_t factorial_ = 1;
};

inline std::vector<int> decode_permutation(std::uint64_t j, int m) { return PermutationCodec(m).decode(j); }

/// Closed tour including the return edge.
inline std::int64_t tour_length(const DistanceMatrix& d, const std::vector<int>& perm) {
  std::int64_t len = 0;
  const std::size_t m = perm.size();
  for (std::size_t i = 0; i < m; ++i) len += d(perm[i], perm[(i + 1) % m]);
  return len;
}

/// x_j = tour_length(decode(j)), computed on demand and memoized.
inline BoundedVector tour_vector(const DistanceMatrix& d, double bound) {
  struct Memo {
    std::mutex mu;
    std::unordered_map<std::uint64_t, std::int64_t> lengths;
  };
  auto memo = std::make_shared<Memo>();
  const PermutationCodec codec(d.m());
  return BoundedVector(
      codec.n(),
      [d, codec, memo](std::uint64_t j) {
        {
          std::lock_guard<std::mutex> lock(memo->mu);
          const auto it = memo->lengths.find(j);
          if (it != memo->lengths.end()) return static_cast<double>(it->second);
        }
        const std::int64_t len = tour_length(d, codec.decode(j));
        std::lock_guard<std::mutex> lock(memo->mu);
        memo->lengths.try_emplace(j, len);
        return static_cast<double>(len);
      },
      bound);
}

struct DistanceBound {
  std::uint64_t bound = 0;  // M = 2^k_stop
  int k_stop = 0;
  int cap = 0;              // p, with 2^p >= m * d_max
  QueryLedger ledger;
};

/// Smallest power of two 2^k at which no tour is longer, found by asking
/// whether 1 - f_{2^k} has a witness for k = 0, 1, ..., p.
inline DistanceBound estimate_distance_bound(const DistanceMatrix& d, double delta_half, Context& ctx) {
  check_delta(delta_half);
  DistanceBound out;
  const std::int64_t top = static_cast<std::int64_t>(d.m()) * d.d_max();
  while ((std::int64_t{1} << out.cap) < top) ++out.cap;
  const double step_delta = split_confidence(delta_half, out.cap + 1);
  const BoundedVector x = tour_vector(d, std::ldexp(1.0, out.cap));
  for (int k = 0; k <= out.cap; ++k) {
    const SatDecision longer = sat_decide(threshold_oracle(x, std::ldexp(1.0, k)).complement(), step_delta, ctx);
    out.ledger.merge(longer.ledger);
    if (!longer.satisfiable) {
      out.k_stop = k;
      out.bound = std::uint64_t{1} << k;
      return out;
    }
  }
  throw convergence_error("bound loop exceeded p = " + std::to_string(out.cap));
}

struct TspDecision : EstimateWithConfidence {
  bool yes = false;
  std::int64_t rounded_min = 0;
  DistanceBound bound;
};

/// YES iff some tour has length <= limit, with probability >= 1 - delta.
inline TspDecision tsp_decide(const DistanceMatrix& d, std::int64_t limit, double delta, Context& ctx) {
  check_delta(delta);
  if (limit < 0) throw input_error("tour length bound must be non-negative");
  const double half = -std::expm1(0.5 * std::log1p(-delta));
  TspDecision out;
  out.delta = delta;
  out.bound = estimate_distance_bound(d, half, ctx);
  out.ledger.merge(out.bound.ledger);
  const BoundedVector x = tour_vector(d, static_cast<double>(out.bound.bound));
  const MinValue mv = min_value(x, 1.0 / 3.0, half, ctx);
  out.ledger.merge(mv.ledger);
  out.eta = 1.0 / 3.0;
  out.rounded_min = static_cast<std::int64_t>(std::floor(mv.value + 0.5));
  out.yes = out.rounded_min <= limit;
  out.value = out.yes ? 1.0 : 0.0;
  return out;
}

struct TspSolution : EstimateWithConfidence {
  std::int64_t length = 0;
  std::vector<int> tour;
  std::uint64_t index = 0;
  bool consistent = false;  // re-scored tour equals the reported length
  DistanceBound bound;
};

/// Optimal length and tour, with probability >= 1 - delta.
inline TspSolution tsp_solve(const DistanceMatrix& d, double delta, Context& ctx) {
  check_delta(delta);
  const double half = -std::expm1(0.5 * std::log1p(-delta));
  TspSolution out;
  out.delta = delta;
  out.eta = 1.0 / 3.0;
  out.bound = estimate_distance_bound(d, half, ctx);
  out.ledger.merge(out.bound.ledger);
  const BoundedVector x = tour_vector(d, static_cast<double>(out.bound.bound));
  const MinIndex mi = min_index(x, 1.0 / 3.0, half, ctx);
  out.ledger.merge(mi.ledger);
  out.index = mi.index;
  out.length = static_cast<std::int64_t>(x[mi.index]);
  out.tour = PermutationCodec(d.m()).decode(mi.index);
  out.consistent = tour_length(d, out.tour) == out.length;
  out.value = static_cast<double>(out.length);
  return out;
}

inline TspSolution tsp_min_length(const DistanceMatrix& d, double delta, Context& ctx) { return tsp_solve(d, delta, ctx); }
inline TspSolution tsp_optimal_tour(const DistanceMatrix& d, double delta, Context& ctx) { return tsp_solve(d, delta, ctx); }

}  // namespace slred
