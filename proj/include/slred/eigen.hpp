#pragma once

// Classical eigensolvers for M_q: Sturm-sequence bisection for the smallest
// eigenvalue, inverse iteration for leading eigenpairs, and a Richardson
// extrapolated reference for the continuous lambda(q).
//
// The smallest eigenvalue is located as an offset mu from the exactly known
// ground eigenvalue of the constant-level operator, lambda_free(k) + level.
// The Sturm recurrence is run in differential form, tracking the difference
// between the perturbed LDL^T pivots and the closed-form free pivots
// sin((i+1)t)/sin(i t), so mu keeps full relative precision even when it is
// twenty orders of magnitude below the matrix norm.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

#include "slred/core.hpp"

namespace slred {

/// j-th eigenvalue (1-based) of (k+1)^2 tridiag(-1,2,-1): 4(k+1)^2 sin^2(j pi / (2(k+1))).
inline double free_eigenvalue(std::uint64_t k, std::uint64_t j = 1) {
  const double h = static_cast<double>(k + 1);
  const double s = std::sin(static_cast<double>(j) * std::numbers::pi / (2.0 * h));
  return 4.0 * h * h * s * s;
}

/// Number of eigenvalues of T strictly below x (plain LDL^T sign count).
inline std::uint64_t sturm_count(const TridiagonalSystem& t, double x) {
  const double b2 = t.scale() * t.scale();
  const double pivmin = std::numeric_limits<double>::min() * std::max(1.0, b2);
  std::uint64_t count = 0;
  double d = t.diagonal(0) - x;
  if (std::abs(d) <= pivmin) d = -pivmin;
  if (d < 0.0) ++count;
  for (std::size_t i = 1; i < t.k(); ++i) {
    d = t.diagonal(i) - x - b2 / d;
    if (std::abs(d) <= pivmin) d = -pivmin;
    if (d < 0.0) ++count;
  }
  return count;
}

/// Sign counter for shifts lambda_free(k) + level + mu, reusable across a
/// bisection on mu.
class ShiftedSturm {
 public:
  explicit ShiftedSturm(const TridiagonalSystem& t) : t_(&t), free_pivot_(t.k()) {
    const std::uint64_t k = t.k();
    const double theta = std::numbers::pi / static_cast<double>(k + 1);
    auto sin_mode = [&](std::uint64_t i) {
      // sin(i theta) via the nearer end of [0, pi] to avoid cancellation.
      const std::uint64_t m = std::min(i, k + 1 - i);
      return std::sin(theta * static_cast<double>(m));
    };
    for (std::uint64_t i = 1; i < k; ++i) free_pivot_[i - 1] = sin_mode(i + 1) / sin_mode(i);
    free_pivot_[k - 1] = 0.0;
    lo_ = *std::min_element(t.deviation().begin(), t.deviation().end());
    hi_ = *std::max_element(t.deviation().begin(), t.deviation().end());
  }

  /// Eigenvalues of T strictly below lambda_free(k) + level + mu.
  std::uint64_t count(double mu) const {
    ++sweeps_;
    const auto& dev = t_->deviation();
    const double inv_scale = 1.0 / t_->scale();
    const std::size_t k = dev.size();
    std::uint64_t negatives = 0;
    double e = (dev[0] - mu) * inv_scale;
    double d = free_pivot_[0] + e;
    for (std::size_t i = 1; i < k; ++i) {
      if (d == 0.0) d = -std::numeric_limits<double>::min();
      if (d < 0.0) ++negatives;
      e = (dev[i] - mu) * inv_scale + e / (free_pivot_[i - 1] * d);
      d = free_pivot_[i] + e;
    }
    if (d < 0.0) ++negatives;
    return negatives;
  }

  /// Weyl bracket for the ground-state offset: [min deviation, max deviation].
  double lower() const { return lo_; }
  double upper() const { return hi_; }
  std::uint64_t sweeps() const { return sweeps_; }

 private:
  const TridiagonalSystem* t_;
  std::vector<double> free_pivot_;
  double lo_ = 0.0, hi_ = 0.0;
  mutable std::uint64_t sweeps_ = 0;
};

struct OffsetSolution {
  double offset = 0.0;  // lambda_min(T) - lambda_free(k) - level
  std::uint64_t sweeps = 0;
};

/// Bisection on the offset to half-width `tol`. Stops early once the bracket
/// cannot be split further in double precision.
inline OffsetSolution smallest_eigenvalue_offset(const TridiagonalSystem& t, double tol) {
  if (!(tol > 0.0)) throw input_error("eigenvalue tolerance must be positive");
  ShiftedSturm sturm(t);
  double lo = sturm.lower(), hi = sturm.upper();
  constexpr int kMaxIterations = 2200;
  int it = 0;
  while (hi - lo > 2.0 * tol) {
    if (++it > kMaxIterations) throw convergence_error("Sturm bisection exceeded iteration cap");
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (sturm.count(mid) >= 1)
      hi = mid;
    else
      lo = mid;
  }
  return {lo + 0.5 * (hi - lo), sturm.sweeps()};
}

/// Smallest eigenvalue of T within `tol`.
inline double smallest_eigenvalue_classical(const TridiagonalSystem& t, double tol) {
  const OffsetSolution s = smallest_eigenvalue_offset(t, tol);
  return free_eigenvalue(t.k()) + t.level() + s.offset;
}

/// Eigenvalue with 0-based `index` by plain Sturm bisection.
inline double eigenvalue_by_index(const TridiagonalSystem& t, std::uint64_t index, double tol) {
  if (index >= t.k()) throw input_error("eigenvalue index out of range");
  auto [lo, hi] = t.gershgorin();
  lo -= 1.0;
  hi += 1.0;
  const double floor_tol = 4.0 * std::numeric_limits<double>::epsilon() * t.norm_inf();
  tol = std::max(tol, floor_tol);
  while (hi - lo > 2.0 * tol) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (sturm_count(t, mid) > index)
      hi = mid;
    else
      lo = mid;
  }
  return lo + 0.5 * (hi - lo);
}

struct EigenPair {
  double value = 0.0;
  std::vector<double> vector;
  std::uint64_t index = 0;
  // value - (lambda_free(k, index+1) + level); exact to full relative
  // precision for index 0.
  double offset = 0.0;
};

namespace detail {

/// Solves (T - shift I) x = rhs with partial pivoting; tiny pivots are
/// replaced so that near-singular shifts still yield a direction.
inline std::vector<double> solve_shifted(const TridiagonalSystem& t, double shift,
                                         std::vector<double> rhs) {
  const std::size_t n = t.k();
  const double off = t.off_diagonal();
  const double tiny = std::numeric_limits<double>::epsilon() * t.norm_inf();
  std::vector<double> d(n), du(n, 0.0), du2(n, 0.0), dl(n, 0.0);
  std::vector<char> swapped(n, 0);
  for (std::size_t i = 0; i < n; ++i) d[i] = t.diagonal(i) - shift;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    du[i] = off;
    dl[i] = off;
  }
  // LU with row interchanges (dgttrf layout).
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(d[i]) >= std::abs(dl[i])) {
      if (std::abs(d[i]) < tiny) d[i] = d[i] < 0.0 ? -tiny : tiny;
      const double f = dl[i] / d[i];
      dl[i] = f;
      d[i + 1] -= f * du[i];
    } else {
      const double f = d[i] / dl[i];
      d[i] = dl[i];
      dl[i] = f;
      const double tmp = du[i];
      du[i] = d[i + 1];
      d[i + 1] = tmp - f * d[i + 1];
      if (i + 2 < n) {
        du2[i] = du[i + 1];
        du[i + 1] = -f * du[i + 1];
      }
      swapped[i] = 1;
    }
  }
  if (std::abs(d[n - 1]) < tiny) d[n - 1] = d[n - 1] < 0.0 ? -tiny : tiny;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (swapped[i]) {
      std::swap(rhs[i], rhs[i + 1]);
      rhs[i + 1] -= dl[i] * rhs[i];
    } else {
      rhs[i + 1] -= dl[i] * rhs[i];
    }
  }
  rhs[n - 1] /= d[n - 1];
  if (n > 1) rhs[n - 2] = (rhs[n - 2] - du[n - 2] * rhs[n - 1]) / d[n - 2];
  for (std::size_t ii = n >= 2 ? n - 2 : 0; ii-- > 0;) {
    rhs[ii] = (rhs[ii] - du[ii] * rhs[ii + 1] - du2[ii] * rhs[ii + 2]) / d[ii];
  }
  return rhs;
}

inline double normalize(std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  s = std::sqrt(s);
  for (double& x : v) x /= s;
  return s;
}

inline double residual_inf(const TridiagonalSystem& t, const std::vector<double>& v, double lambda) {
  const std::size_t n = t.k();
  double r = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double y = (t.diagonal(i) - lambda) * v[i];
    if (i > 0) y += t.off_diagonal() * v[i - 1];
    if (i + 1 < n) y += t.off_diagonal() * v[i + 1];
    r = std::max(r, std::abs(y));
  }
  return r;
}

}  // namespace detail

/// Discrete sine mode j (1-based) of length k, normalized.
inline std::vector<double> sine_mode(std::uint64_t k, std::uint64_t j = 1) {
  std::vector<double> v(k);
  const double theta = std::numbers::pi * static_cast<double>(j) / static_cast<double>(k + 1);
  for (std::uint64_t i = 0; i < k; ++i) v[i] = std::sin(theta * static_cast<double>(i + 1));
  detail::normalize(v);
  return v;
}

/// Relative residual tolerance met by every returned eigenvector.
inline constexpr double kEigenResidualTol = 1e-10;

/// The `count` smallest eigenpairs in increasing order.
inline std::vector<EigenPair> leading_eigenpairs(const TridiagonalSystem& t, std::uint64_t count,
                                                 double tol) {
  if (count < 1 || count > t.k()) throw input_error("eigenpair count must lie in [1, k]");
  std::vector<EigenPair> pairs;
  pairs.reserve(count);
  const double norm = t.norm_inf();
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    EigenPair p;
    p.index = idx;
    const double free_ref = free_eigenvalue(t.k(), idx + 1) + t.level();
    if (idx == 0) {
      p.offset = smallest_eigenvalue_offset(t, tol).offset;
      p.value = free_ref + p.offset;
    } else {
      p.value = eigenvalue_by_index(t, idx, tol);
      p.offset = p.value - free_ref;
    }
    std::vector<double> v = sine_mode(t.k(), idx + 1);
    bool ok = false;
    for (int it = 0; it < 10 && !ok; ++it) {
      v = detail::solve_shifted(t, p.value, std::move(v));
      for (const auto& prev : pairs) {
        double dot = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) dot += v[i] * prev.vector[i];
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= dot * prev.vector[i];
      }
      detail::normalize(v);
      ok = detail::residual_inf(t, v, p.value) <= kEigenResidualTol * norm;
    }
    if (!ok) throw convergence_error("inverse iteration did not reach residual tolerance");
    // Fix the sign so the largest-magnitude component is positive.
    const auto big = std::max_element(v.begin(), v.end(),
                                      [](double a, double b) { return std::abs(a) < std::abs(b); });
    if (*big < 0.0)
      for (double& x : v) x = -x;
    p.vector = std::move(v);
    pairs.push_back(std::move(p));
  }
  return pairs;
}

struct ReferenceLambda {
  double value = 0.0;   // pi^2 + level + offset
  double offset = 0.0;  // lambda(q) - pi^2 - level
  double achieved_tol = 0.0;
  bool converged = false;
  std::uint64_t k_final = 0;
  std::uint64_t sweeps = 0;
};

struct ReferenceOptions {
  std::uint64_t max_points = std::uint64_t{1} << 24;  // cap on k + 1
  double points_per_feature = 8.0;
  std::uint64_t min_points = 16;
};

/// Continuous lambda(q) by step doubling k+1 -> 2(k+1) and Richardson
/// extrapolation of the O(k^-2) error in the offset. Stops when consecutive
/// extrapolants agree within tol/2; if the grid cap is hit first, the
/// achieved accuracy is reported with converged = false.
inline ReferenceLambda reference_lambda(const Potential& q, double tol,
                                        const ReferenceOptions& opts = {}) {
  if (!(tol > 0.0)) throw input_error("reference tolerance must be positive");
  ReferenceLambda out;
  std::uint64_t points = opts.min_points;
  const double wanted = opts.points_per_feature / q.feature_width();
  while (static_cast<double>(points) < wanted && points < opts.max_points) points *= 2;

  const double bisect_tol = tol / 8.0;
  double prev_offset = 0.0, prev_extrap = 0.0;
  int level = 0;
  for (; points <= opts.max_points; points *= 2, ++level) {
    const TridiagonalSystem t = build_matrix(q, points - 1);
    const OffsetSolution s = smallest_eigenvalue_offset(t, bisect_tol);
    out.sweeps += s.sweeps;
    out.k_final = points - 1;
    if (level == 0) {
      prev_offset = s.offset;
      continue;
    }
    const double extrap = s.offset + (s.offset - prev_offset) / 3.0;
    if (level >= 2) {
      const double change = std::abs(extrap - prev_extrap);
      out.offset = extrap;
      out.achieved_tol = change + bisect_tol;
      if (change <= tol / 2.0) {
        out.converged = true;
        break;
      }
    }
    prev_offset = s.offset;
    prev_extrap = extrap;
  }
  out.value = std::numbers::pi * std::numbers::pi + q.level() + out.offset;
  return out;
}

}  // namespace slred
