#pragma once

// Brute-force ground truth. Nothing here shares code with the reductions:
// formulas are evaluated clause by clause, tours by std::next_permutation,
// eigenvalues by Eigen's tridiagonal QR.

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

namespace slred::oracle {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
  bool converged = false;
};

/// Adaptive 61-point Gauss-Kronrod on each piece between sorted breakpoints.
inline QuadratureResult quadrature(const std::function<double(double)>& f, double abs_tol = 1e-12,
                                   std::vector<double> breakpoints = {}, double a = 0.0, double b = 1.0) {
  breakpoints.push_back(a);
  breakpoints.push_back(b);
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());
  QuadratureResult out;
  using gk = boost::math::quadrature::gauss_kronrod<double, 61>;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const double lo = breakpoints[i], hi = breakpoints[i + 1];
    if (lo < a || hi > b) continue;
    // boost's tolerance is relative to the L1 norm; translate the absolute target
    double l1 = 0.0;
    gk::integrate(f, lo, hi, 0, 0.0, nullptr, &l1);
    const double share = abs_tol / static_cast<double>(breakpoints.size());
    const double rel = l1 > 0.0 ? std::max(share / l1, 1e-14) : 1.0;
    double err = 0.0;
    out.value += gk::integrate(f, lo, hi, 15, rel, &err);
    out.error += err;
  }
  out.converged = out.error <= abs_tol;
  return out;
}

/// int_0^1 f(x) sin^2(pi x) dx.
inline QuadratureResult weighted_integral(const std::function<double(double)>& f, double abs_tol = 1e-12,
                                          std::vector<double> breakpoints = {}) {
  return quadrature(
      [&f](double x) {
        const double s = std::sin(3.14159265358979323846 * x);
        return f(x) * s * s;
      },
      abs_tol, std::move(breakpoints));
}

struct SatTruth {
  bool any = false;
  std::optional<std::uint64_t> smallest;
  std::uint64_t count = 0;
};

inline constexpr int kMaxSatVars = 24;

inline SatTruth brute_sat(const std::function<bool(std::uint64_t)>& pred, int n) {
  if (n < 0 || n > kMaxSatVars) throw std::invalid_argument("brute_sat limited to n <= 24");
  SatTruth t;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t j = 0; j < total; ++j) {
    if (pred(j)) {
      if (!t.any) t.smallest = j;
      t.any = true;
      ++t.count;
    }
  }
  return t;
}

/// Signed-literal clauses; bit v-1 of j is variable v.
inline SatTruth brute_sat_clauses(int n, const std::vector<std::vector<int>>& clauses) {
  return brute_sat(
      [&](std::uint64_t j) {
        for (const auto& cl : clauses) {
          bool sat = false;
          for (int lit : cl) {
            const bool val = (j >> (std::abs(lit) - 1)) & 1u;
            if ((lit > 0) == val) {
              sat = true;
              break;
            }
          }
          if (!sat) return false;
        }
        return true;
      },
      n);
}

struct TspTruth {
  std::int64_t length = 0;
  std::vector<int> tour;  // 1-based cities
};

inline constexpr int kMaxTspCities = 9;

/// Scans all m! orderings in lexicographic order; the first optimum wins.
inline TspTruth brute_tsp(const std::vector<std::vector<std::int64_t>>& d) {
  const int m = static_cast<int>(d.size());
  if (m < 2 || m > kMaxTspCities) throw std::invalid_argument("brute_tsp needs 2 <= m <= 9");
  std::vector<int> perm(m);
  std::iota(perm.begin(), perm.end(), 1);
  TspTruth best;
  best.length = std::numeric_limits<std::int64_t>::max();
  do {
    std::int64_t len = 0;
    for (int i = 0; i < m; ++i) len += d[perm[i] - 1][perm[(i + 1) % m] - 1];
    if (len < best.length) {
      best.length = len;
      best.tour = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

/// Smallest eigenvalue of (k+1)^2 tridiag(-1,2,-1) + diag(q(i/(k+1))) via
/// Eigen's tridiagonal QR. Absolute accuracy is about eps * 4(k+1)^2.
inline double fine_grid_lambda(const std::function<double(double)>& q, std::uint64_t k) {
  const double h = static_cast<double>(k + 1);
  Eigen::VectorXd diag(static_cast<Eigen::Index>(k));
  Eigen::VectorXd sub = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(k) - 1, -h * h);
  for (std::uint64_t i = 0; i < k; ++i) diag(static_cast<Eigen::Index>(i)) = 2.0 * h * h + q((i + 1) / h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace slred::oracle
