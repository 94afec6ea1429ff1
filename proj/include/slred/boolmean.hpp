#pragma once

// Boolean oracles and the mean S_N(B) recovered from one weighted integral.

#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <numbers>
#include <vector>

#include "slred/context.hpp"
#include "slred/core.hpp"
#include "slred/integrate.hpp"

namespace slred {

/// B: {0..2^n-1} -> {0,1}. Copies and restrictions share one call counter.
class BooleanOracle {
 public:
  using Function = std::function<bool(std::uint64_t)>;

  BooleanOracle(int n, Function fn)
      : n_(n), fn_(std::move(fn)), calls_(std::make_shared<std::atomic<std::uint64_t>>(0)) {
    if (n < 0 || n > 62) throw input_error("oracle variable count must lie in [0, 62]");
    if (!fn_) throw input_error("oracle function is empty");
  }

  static BooleanOracle from_bits(std::vector<std::uint8_t> bits) {
    const std::size_t size = bits.size();
    if (size == 0 || (size & (size - 1)) != 0) throw input_error("bit-vector length must be a power of two");
    int n = 0;
    while ((std::size_t{1} << n) < size) ++n;
    auto shared = std::make_shared<const std::vector<std::uint8_t>>(std::move(bits));
    for (auto b : *shared)
      if (b > 1) throw input_error("bit-vector entries must be 0 or 1");
    return BooleanOracle(n, [shared](std::uint64_t j) { return (*shared)[j] != 0; });
  }

  static BooleanOracle indicator(int n, std::vector<std::uint64_t> ones) {
    for (auto j : ones)
      if (n < 64 && j >= (std::uint64_t{1} << n)) throw input_error("indicator index out of range");
    std::sort(ones.begin(), ones.end());
    auto shared = std::make_shared<const std::vector<std::uint64_t>>(std::move(ones));
    return BooleanOracle(n, [shared](std::uint64_t j) { return std::binary_search(shared->begin(), shared->end(), j); });
  }

  static BooleanOracle constant(int n, bool v) {
    return BooleanOracle(n, [v](std::uint64_t) { return v; });
  }

  int n() const { return n_; }
  std::uint64_t size() const { return std::uint64_t{1} << n_; }
  std::uint64_t calls() const { return calls_->load(std::memory_order_relaxed); }

  bool operator()(std::uint64_t j) const {
    if (j >= size()) throw input_error("oracle index out of range");
    calls_->fetch_add(1, std::memory_order_relaxed);
    return fn_(j);
  }

  /// j -> B(j + offset) on a domain of 2^n_sub points.
  BooleanOracle restrict(std::uint64_t offset, int n_sub) const {
    if (n_sub > n_ || offset + (std::uint64_t{1} << n_sub) > size())
      throw input_error("restriction leaves the oracle's domain");
    BooleanOracle r(*this);
    r.n_ = n_sub;
    r.fn_ = [fn = fn_, offset](std::uint64_t j) { return fn(j + offset); };
    return r;
  }

  BooleanOracle complement() const {
    BooleanOracle r(*this);
    r.fn_ = [fn = fn_](std::uint64_t j) { return !fn(j); };
    return r;
  }

 private:
  int n_;
  Function fn_;
  std::shared_ptr<std::atomic<std::uint64_t>> calls_;
};

namespace detail {

/// Per-cell memo of oracle answers: -1 unknown, else 0/1.
class CellMemo {
 public:
  explicit CellMemo(std::uint64_t n) : cells_(new std::atomic<signed char>[n]) {
    for (std::uint64_t i = 0; i < n; ++i) cells_[i].store(-1, std::memory_order_relaxed);
  }
  bool get(std::uint64_t j, const BooleanOracle& b) {
    signed char v = cells_[j].load(std::memory_order_acquire);
    if (v < 0) {
      v = b(j) ? 1 : 0;
      cells_[j].store(v, std::memory_order_release);
    }
    return v == 1;
  }

 private:
  std::unique_ptr<std::atomic<signed char>[]> cells_;
};

/// sum_j weight(j) h_j(x) B(j) / (2 sin^2(pi x)).
inline SmoothIntegrand assemble_cells(const BooleanOracle& b, const BumpFamily& family,
                                      std::function<double(std::uint64_t)> weight) {
  if (family.size() != b.size()) throw input_error("bump family size must equal the oracle's domain size");
  auto memo = std::make_shared<CellMemo>(b.size());
  const double nn = static_cast<double>(family.size());
  SmoothIntegrand f;
  f.bound_m = family.profile_norms().second * (1.0 + 50.0 / nn);
  f.feature_width = family.cell_width();
  f.eval = [b, family, memo, weight = std::move(weight)](double x) {
    const auto j = family.cell(x);
    if (!j) return 0.0;
    const double w = weight(*j);
    if (w == 0.0) return 0.0;
    const double hv = family(*j, x);
    if (hv == 0.0) return 0.0;
    if (!memo->get(*j, b)) return 0.0;
    const double s = std::sin(std::numbers::pi * x);
    return w * hv / (2.0 * s * s);
  };
  return f;
}

}  // namespace detail

/// f_B = h_j(x) B(j) / (2 sin^2(pi x)) on cell j.
inline SmoothIntegrand assemble_mean_integrand(const BooleanOracle& b, const BumpFamily& family) {
  return detail::assemble_cells(b, family, [](std::uint64_t) { return 1.0; });
}

struct MeanEstimate : EstimateWithConfidence {
  std::uint64_t count = 0;  // round(N * value), clamped to [0, N]
  double rounded = 0.0;     // count / N; exact when eps < 1/(2N)
  bool exact = false;
  IntegralEstimate integral;
};

/// S_N(B) to within eps with probability >= 1 - delta.
inline MeanEstimate boolean_mean(const BooleanOracle& b, double eps, double delta, Context& ctx) {
  if (!(eps > 0.0 && eps < 1.0)) throw input_error("mean accuracy epsilon must lie in (0,1)");
  check_delta(delta);
  const BumpFamily family = make_bump_family(b.size(), ctx.config().integration.bump_alpha);
  const double nn = static_cast<double>(b.size());
  const double scale = 16.0 * nn * nn / family.int_h();
  const std::uint64_t calls_before = b.calls();

  MeanEstimate out;
  out.eta = eps;
  out.delta = delta;
  out.integral = integrate_weighted(assemble_mean_integrand(b, family), eps / scale, delta, ctx);
  out.value = scale * out.integral.value;
  out.ledger = out.integral.ledger;
  out.ledger.bit_queries += b.calls() - calls_before;
  out.exact = eps < 0.5 / nn;
  const double r = std::floor(nn * out.value + 0.5);
  out.count = static_cast<std::uint64_t>(std::clamp(r, 0.0, nn));
  out.rounded = static_cast<double>(out.count) / nn;
  return out;
}

}  // namespace slred
