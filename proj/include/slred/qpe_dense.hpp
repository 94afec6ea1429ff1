#pragma once

// Full statevector simulation of phase estimation on W = exp(i M / 2).
// The target register has k + 1 basis states; the extra one is padding on
// which W acts as the identity and which the initial state never touches.

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "slred/core.hpp"

namespace slred {

namespace detail {

inline int log2_exact(std::uint64_t n) {
  int e = 0;
  while ((std::uint64_t{1} << e) < n) ++e;
  return e;
}

}  // namespace detail

/// Outcome distribution of b-bit phase estimation, by explicit simulation.
/// Returns 2^b probabilities.
inline std::vector<double> dense_distribution(const TridiagonalSystem& t, int b,
                                              const std::vector<double>& initial,
                                              int qubit_cap = 24) {
  using cd = std::complex<double>;
  const std::uint64_t k = t.k();
  if (initial.size() != k) throw input_error("initial state length must equal k");
  if (b < 1) throw input_error("phase estimation needs at least one ancilla qubit");
  const int target_qubits = detail::log2_exact(k + 1);
  if (b + target_qubits > qubit_cap)
    throw capacity_error("dense backend limited to " + std::to_string(qubit_cap) + " qubits; plan needs " +
                         std::to_string(b + target_qubits));

  const Eigen::Index dim = static_cast<Eigen::Index>(k + 1);
  Eigen::MatrixXcd gen = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(k); ++i) {
    gen(i, i) = cd(0.0, 0.5 * t.diagonal(static_cast<std::size_t>(i)));
    if (i + 1 < static_cast<Eigen::Index>(k)) {
      gen(i, i + 1) = cd(0.0, 0.5 * t.off_diagonal());
      gen(i + 1, i) = cd(0.0, 0.5 * t.off_diagonal());
    }
  }
  Eigen::MatrixXcd power = gen.exp();

  const std::uint64_t n_out = std::uint64_t{1} << b;
  const Eigen::Index cols = static_cast<Eigen::Index>(n_out);
  Eigen::VectorXcd start = Eigen::VectorXcd::Zero(dim);
  for (std::uint64_t i = 0; i < k; ++i) start(static_cast<Eigen::Index>(i)) = initial[i];

  // Column a holds the target register paired with ancilla basis state |a>.
  Eigen::MatrixXcd state(dim, cols);
  const double amp = std::pow(2.0, -0.5 * b);
  for (Eigen::Index a = 0; a < cols; ++a) state.col(a) = amp * start;

  for (int j = 0; j < b; ++j) {
    if (j > 0) power = (power * power).eval();
    const std::uint64_t bit = std::uint64_t{1} << j;
    for (std::uint64_t a = 0; a < n_out; ++a)
      if (a & bit) state.col(static_cast<Eigen::Index>(a)) = power * state.col(static_cast<Eigen::Index>(a));
  }

  // Inverse QFT, gate by gate. Qubit i (1 = most significant) is bit b - i.
  auto pos = [b](int qubit) { return b - qubit; };
  for (int i = 1; i <= b / 2; ++i) {
    const std::uint64_t p = std::uint64_t{1} << pos(i), q = std::uint64_t{1} << pos(b + 1 - i);
    for (std::uint64_t a = 0; a < n_out; ++a)
      if ((a & p) && !(a & q)) state.col(static_cast<Eigen::Index>(a)).swap(state.col(static_cast<Eigen::Index>(a ^ p ^ q)));
  }
  const double r2 = 1.0 / std::sqrt(2.0);
  for (int i = b; i >= 1; --i) {
    const std::uint64_t target = std::uint64_t{1} << pos(i);
    for (int m = b - i + 1; m >= 2; --m) {
      const std::uint64_t control = std::uint64_t{1} << pos(i + m - 1);
      const cd phase = std::polar(1.0, -2.0 * std::numbers::pi / std::ldexp(1.0, m));
      for (std::uint64_t a = 0; a < n_out; ++a)
        if ((a & target) && (a & control)) state.col(static_cast<Eigen::Index>(a)) *= phase;
    }
    for (std::uint64_t a = 0; a < n_out; ++a) {
      if (a & target) continue;
      const Eigen::Index lo = static_cast<Eigen::Index>(a), hi = static_cast<Eigen::Index>(a | target);
      Eigen::VectorXcd c0 = state.col(lo);
      state.col(lo) = r2 * (c0 + state.col(hi));
      state.col(hi) = r2 * (c0 - state.col(hi));
    }
  }

  std::vector<double> probs(n_out);
  for (std::uint64_t a = 0; a < n_out; ++a) probs[a] = state.col(static_cast<Eigen::Index>(a)).squaredNorm();
  return probs;
}

}  // namespace slred
