#pragma once

// Single-witness search: the weighted mean sum_j j B(j) / N read off one
// integral and rounded.

#include <cmath>
#include <cstdint>
#include <string>

#include "slred/boolmean.hpp"
#include "slred/context.hpp"

namespace slred {

/// g_B = j h_j(x) B(j) / (2 N sin^2(pi x)) on cell j. The j = 0 cell never
/// queries B.
inline SmoothIntegrand assemble_weighted_integrand(const BooleanOracle& b, const BumpFamily& family) {
  const double nn = static_cast<double>(family.size());
  return detail::assemble_cells(b, family, [nn](std::uint64_t j) { return static_cast<double>(j) / nn; });
}

enum class GroverStatus { found, out_of_range, not_confirmed };

inline std::string to_string(GroverStatus s) {
  switch (s) {
    case GroverStatus::found: return "found";
    case GroverStatus::out_of_range: return "promise violated or unlucky run: index out of range";
    case GroverStatus::not_confirmed: return "promise violated or unlucky run: B(index) = 0";
  }
  return "unknown";
}

struct GroverResult : EstimateWithConfidence {
  std::int64_t index = -1;
  GroverStatus status = GroverStatus::found;
  IntegralEstimate integral;
};

/// The unique j with B(j) = 1, with probability >= 1 - delta.
inline GroverResult grover_find(const BooleanOracle& b, double delta, Context& ctx) {
  check_delta(delta);
  const BumpFamily family = make_bump_family(b.size(), ctx.config().integration.bump_alpha);
  const double nn = static_cast<double>(b.size());
  const double n4 = nn * nn * nn * nn;
  const double eps = family.int_h() / (48.0 * n4);
  const std::uint64_t calls_before = b.calls();

  GroverResult out;
  out.delta = delta;
  out.integral = integrate_weighted(assemble_weighted_integrand(b, family), eps, delta, ctx);
  out.eta = out.integral.eta;
  out.value = 16.0 * n4 / family.int_h() * out.integral.value;
  out.ledger = out.integral.ledger;
  out.ledger.bit_queries += b.calls() - calls_before;
  out.index = static_cast<std::int64_t>(std::floor(out.value + 0.5));
  if (out.index < 0 || out.index >= static_cast<std::int64_t>(b.size())) {
    out.status = GroverStatus::out_of_range;
    return out;
  }
  out.ledger.verification_queries += 1;
  if (!b(static_cast<std::uint64_t>(out.index))) out.status = GroverStatus::not_confirmed;
  return out;
}

}  // namespace slred
