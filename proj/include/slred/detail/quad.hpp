#pragma once

// Thin helpers over GCC's binary128 type. Phase readouts at 50+ ancilla
// bits need more than a double's 53-bit significand.

#include <quadmath.h>

#include <cstdint>

namespace slred::detail {

using quad = __float128;

inline quad quad_pi() { return acosq(static_cast<quad>(-1)); }

/// 4(k+1)^2 sin^2(pi / (2(k+1))) in binary128.
inline quad free_eigenvalue_quad(std::uint64_t k) {
  const quad h = static_cast<quad>(k + 1);
  const quad s = sinq(quad_pi() / (2 * h));
  return 4 * h * h * s * s;
}

inline quad ldexp_quad(quad x, int e) { return ldexpq(x, e); }

}  // namespace slred::detail
