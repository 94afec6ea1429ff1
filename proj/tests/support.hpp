#pragma once

// Shared generators for randomized suites.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "slred/core.hpp"
#include "slred/sat.hpp"

namespace testsupport {

/// Random trigonometric polynomial scaled so max(|f|, |f'|, |f''|) <= bound.
inline slred::SmoothIntegrand random_smooth(std::mt19937_64& rng, double bound = 1.0) {
  std::uniform_real_distribution<double> amp(-1.0, 1.0), freq(0.5, 9.0), phase(0.0, 6.283185307179586);
  struct Term {
    double a, w, p;
  };
  std::vector<Term> terms;
  double s = 0.0;
  const int count = 1 + static_cast<int>(rng() % 4);
  for (int i = 0; i < count; ++i) {
    Term t{amp(rng), freq(rng), phase(rng)};
    s += std::abs(t.a) * std::max(1.0, t.w * t.w);
    terms.push_back(t);
  }
  for (auto& t : terms) t.a *= bound / s;
  slred::SmoothIntegrand f;
  f.bound_m = bound;
  f.eval = [terms](double x) {
    double v = 0.0;
    for (const auto& t : terms) v += t.a * std::sin(t.w * x + t.p);
    return v;
  };
  return f;
}

/// Uniform random 3-CNF (distinct variables per clause).
inline slred::CnfFormula random_3cnf(std::mt19937_64& rng, int n, int clauses) {
  slred::CnfFormula f;
  f.num_vars = n;
  const int width = std::min(3, n);
  for (int c = 0; c < clauses; ++c) {
    std::vector<int> vars(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) vars[static_cast<std::size_t>(v)] = v + 1;
    std::shuffle(vars.begin(), vars.end(), rng);
    std::vector<int> cl;
    for (int i = 0; i < width; ++i) cl.push_back((rng() & 1u) ? vars[static_cast<std::size_t>(i)] : -vars[static_cast<std::size_t>(i)]);
    f.clauses.push_back(cl);
  }
  return f;
}

}  // namespace testsupport
