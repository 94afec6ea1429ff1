#pragma once

// Minimum of N bounded reals: value by bisection over [-M, M] with
// threshold oracles, index by value + mean test + smallest-witness search.

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "slred/boolmean.hpp"
#include "slred/context.hpp"
#include "slred/sat.hpp"

namespace slred {

/// N = 2^n entries with |x_j| <= bound. Entries may be computed lazily.
class BoundedVector {
 public:
  using Entry = std::function<double(std::uint64_t)>;

  BoundedVector(int n, Entry entry, double bound) : n_(n), entry_(std::move(entry)), bound_(bound) {
    if (n < 0 || n > 62) throw input_error("vector exponent n must lie in [0, 62]");
    if (!(bound > 0.0)) throw input_error("vector bound M must be positive");
  }

  /// Pads to the next power of two by repeating the last entry.
  static BoundedVector from_values(std::vector<double> values, double bound) {
    if (values.empty()) throw input_error("vector must not be empty");
    for (double v : values)
      if (!(std::abs(v) <= bound)) throw input_error("entry " + std::to_string(v) + " exceeds bound M");
    int n = 0;
    while ((std::size_t{1} << n) < values.size()) ++n;
    values.resize(std::size_t{1} << n, values.back());
    auto shared = std::make_shared<const std::vector<double>>(std::move(values));
    return BoundedVector(n, [shared](std::uint64_t j) { return (*shared)[j]; }, bound);
  }

  int n() const { return n_; }
  std::uint64_t size() const { return std::uint64_t{1} << n_; }
  double bound() const { return bound_; }
  double operator[](std::uint64_t j) const { return entry_(j); }

 private:
  int n_;
  Entry entry_;
  double bound_;
};

/// f_y(j) = 1 iff x_j <= y.
inline BooleanOracle threshold_oracle(const BoundedVector& x, double y) {
  return BooleanOracle(x.n(), [x, y](std::uint64_t j) { return x[j] <= y; });
}

struct MinValue : EstimateWithConfidence {
  int steps = 0;  // k*
  std::vector<std::pair<double, double>> brackets;
};

/// Min(x) to within eps with probability >= 1 - delta.
inline MinValue min_value(const BoundedVector& x, double eps, double delta, Context& ctx) {
  check_delta(delta);
  const double m = x.bound();
  if (!(eps > 0.0 && eps < m)) throw input_error("min accuracy epsilon must lie in (0, M)");
  MinValue out;
  out.eta = eps;
  out.delta = delta;
  int k_star = 0;
  while (std::ldexp(m, -k_star) > eps) ++k_star;
  out.steps = k_star;
  const double step_delta = split_confidence(delta, k_star);
  double a = -m, b = m, y = 0.0;
  out.brackets.emplace_back(a, b);
  for (int k = 1; k <= k_star; ++k) {
    const SatDecision d = sat_decide(threshold_oracle(x, y), step_delta, ctx);
    out.ledger.merge(d.ledger);
    if (d.satisfiable)
      b = y;
    else
      a = y;
    y = 0.5 * (a + b);
    out.brackets.emplace_back(a, b);
  }
  out.value = y;
  return out;
}

struct MinIndex : EstimateWithConfidence {
  std::uint64_t index = 0;
  double threshold = 0.0;      // final y
  std::uint64_t mean_count = 0;  // z: rounded count of entries <= y
  bool confirmed = false;        // x_index <= y, checked with one extra query
};

/// Some j with x_j <= Min(x) + eps (the smallest such index under correct
/// verdicts), with probability >= 1 - delta.
inline MinIndex min_index(const BoundedVector& x, double eps, double delta, Context& ctx) {
  check_delta(delta);
  const double d1 = split_confidence(delta, 3.0);
  MinIndex out;
  out.eta = eps;
  out.delta = delta;
  const MinValue mv = min_value(x, eps, d1, ctx);
  out.ledger.merge(mv.ledger);
  double y = mv.value;
  const double nn = static_cast<double>(x.size());
  const MeanEstimate z = boolean_mean(threshold_oracle(x, y), 1.0 / (3.0 * nn), d1, ctx);
  out.ledger.merge(z.ledger);
  out.mean_count = z.count;
  if (z.count == 0) y += eps;
  out.threshold = y;
  const SatSearch s = sat_search(threshold_oracle(x, y), d1, ctx);
  out.ledger.merge(s.ledger);
  out.index = s.index;
  // the search's confirmation call is exactly the x_j <= y recheck
  out.confirmed = s.witness_confirmed;
  out.value = static_cast<double>(s.index);
  return out;
}

}  // namespace slred
