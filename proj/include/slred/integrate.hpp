#pragma once

// Weighted integration through one eigenvalue estimate, and the bump
// family used to encode discrete data as smooth integrands.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

#include "slred/context.hpp"
#include "slred/core.hpp"
#include "slred/oracle.hpp"
#include "slred/qpe.hpp"

namespace slred {

/// h(x) = (x(1-x))^alpha on [0,1], zero elsewhere. C^2 for alpha > 2.
class BumpProfile {
 public:
  explicit BumpProfile(double alpha = 3.0) : alpha_(alpha) {
    if (!(alpha > 2.0)) throw input_error("bump exponent alpha must exceed 2");
  }

  double alpha() const { return alpha_; }

  double operator()(double x) const {
    if (!(x > 0.0 && x < 1.0)) return 0.0;
    return std::pow(x * (1.0 - x), alpha_);
  }
  double d1(double x) const {
    if (!(x > 0.0 && x < 1.0)) return 0.0;
    const double g = x * (1.0 - x);
    return alpha_ * std::pow(g, alpha_ - 1.0) * (1.0 - 2.0 * x);
  }
  double d2(double x) const {
    if (!(x > 0.0 && x < 1.0)) return 0.0;
    const double g = x * (1.0 - x), gp = 1.0 - 2.0 * x;
    return alpha_ * (alpha_ - 1.0) * std::pow(g, alpha_ - 2.0) * gp * gp - 2.0 * alpha_ * std::pow(g, alpha_ - 1.0);
  }

  /// Sup norms of h, h', h'' on a fine uniform grid.
  SupBounds norms(int grid = 1 << 17) const {
    SupBounds s;
    for (int i = 0; i <= grid; ++i) {
      const double x = static_cast<double>(i) / grid;
      s.value = std::max(s.value, std::abs((*this)(x)));
      s.first = std::max(s.first, std::abs(d1(x)));
      s.second = std::max(s.second, std::abs(d2(x)));
    }
    return s;
  }

 private:
  double alpha_;
};

namespace detail {

/// (int h, sup norms) per exponent, computed once.
inline std::pair<double, SupBounds> profile_constants(const BumpProfile& h) {
  static std::mutex mu;
  static std::map<double, std::pair<double, SupBounds>> cache;
  std::lock_guard<std::mutex> lock(mu);
  const auto it = cache.find(h.alpha());
  if (it != cache.end()) return it->second;
  const auto q = oracle::quadrature([&h](double x) { return h(x); }, 1e-12);
  if (!q.converged) throw convergence_error("bump integral did not converge");
  return cache[h.alpha()] = {q.value, h.norms()};
}

}  // namespace detail

/// h_j(x) = h(2N(x - x_j)) / (4N^2) on cells x_j = 1/4 + j/(2N), j < N.
class BumpFamily {
 public:
  BumpFamily(std::uint64_t n_cells, BumpProfile profile) : h_(profile), n_(n_cells) {
    if (n_cells == 0 || (n_cells & (n_cells - 1)) != 0) throw input_error("bump family size N must be a power of two");
    const auto [integral, norms] = detail::profile_constants(h_);
    int_h_ = integral;
    norms_ = norms;
    const double nn = static_cast<double>(n_);
    m_const_ = std::max({norms_.value / (4.0 * nn * nn), norms_.first / (2.0 * nn), norms_.second});
  }

  const BumpProfile& profile() const { return h_; }
  std::uint64_t size() const { return n_; }
  double int_h() const { return int_h_; }
  const SupBounds& profile_norms() const { return norms_; }
  double m_const() const { return m_const_; }
  double cell_width() const { return 0.5 / static_cast<double>(n_); }
  double left(std::uint64_t j) const { return 0.25 + static_cast<double>(j) * cell_width(); }
  double cell_integral() const {
    const double nn = static_cast<double>(n_);
    return int_h_ / (8.0 * nn * nn * nn);
  }

  double operator()(std::uint64_t j, double x) const {
    const double nn = static_cast<double>(n_);
    return h_(2.0 * nn * (x - left(j))) / (4.0 * nn * nn);
  }

  /// Cell whose open interior contains x.
  std::optional<std::uint64_t> cell(double x) const {
    if (!(x > 0.25 && x < 0.75)) return std::nullopt;
    const double pos = (x - 0.25) * 2.0 * static_cast<double>(n_);
    const auto j = static_cast<std::uint64_t>(pos);
    if (j >= n_ || pos == static_cast<double>(j)) return std::nullopt;
    return j;
  }

  std::vector<double> breakpoints() const {
    std::vector<double> b;
    for (std::uint64_t j = 0; j <= n_; ++j) b.push_back(left(j));
    return b;
  }

 private:
  BumpProfile h_;
  std::uint64_t n_;
  double int_h_ = 0.0;
  SupBounds norms_;
  double m_const_ = 0.0;
};

inline BumpFamily make_bump_family(std::uint64_t n_cells, double alpha = 3.0) {
  return BumpFamily(n_cells, BumpProfile(alpha));
}

struct IntegralEstimate : EstimateWithConfidence {
  bool trivial = false;       // eps >= M: zero is already an eps-approximation
  double c = 0.0;
  bool remainder_ok = false;  // residual_constant * c * M^2 <= eps / 2
  LambdaEstimate lambda;
};

/// Approximates int_0^1 f(x) sin^2(pi x) dx to within eps with probability
/// at least 1 - delta, from one eigenvalue estimate of q = 1/2 + c f.
inline IntegralEstimate integrate_weighted(const SmoothIntegrand& f, double eps, double delta, Context& ctx) {
  check_delta(delta);
  if (!(eps > 0.0)) throw input_error("epsilon must be positive");
  if (!(f.bound_m > 0.0)) throw input_error("integrand bound M must be positive");
  const double m = f.bound_m;
  IntegralEstimate out;
  out.eta = eps;
  out.delta = delta;
  if (eps >= m) {
    out.trivial = true;
    out.remainder_ok = true;
    return out;
  }
  if (eps >= 1.0) throw input_error("epsilon must be below 1");

  const IntegrationConfig& icfg = ctx.config().integration;
  double log_term = std::log(1.0 / eps);
  if (icfg.log_base > 0.0) log_term /= std::log(icfg.log_base);
  out.c = std::min(eps / (m * m * log_term), 0.5 / m);
  out.remainder_ok = icfg.residual_constant * out.c * m * m <= eps / 2.0;

  const Potential q = potential_from_integrand(f, out.c);
  out.lambda = estimate_lambda(q, out.c * eps, delta, ctx);
  out.value = out.lambda.offset / (2.0 * out.c);
  out.ledger = out.lambda.ledger;
  return out;
}

}  // namespace slred
