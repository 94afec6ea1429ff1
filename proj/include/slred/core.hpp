#pragma once

// Shared domain types: potentials, integrands, the discretized operator,
// and the query ledger every algorithm reports into.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace slred {

/// Malformed or out-of-contract input (CLI exit code 2).
class input_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Requested accuracy exceeds what a backend can simulate (CLI exit code 3).
class capacity_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical routine failed to meet its own stopping rule.
class convergence_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Upper bounds on sup-norms of a function and its first two derivatives.
struct SupBounds {
  double value = 0.0;
  double first = 0.0;
  double second = 0.0;

  double max() const { return std::max({value, first, second}); }
};

/// A coefficient function q on [0,1], stored as a constant level plus a
/// deviation. Eigenvalue routines work relative to the exactly known
/// spectrum of the constant level, so tiny deviations survive rounding.
class Potential {
 public:
  using Function = std::function<double(double)>;

  Potential() = default;

  /// `deviation_bound` bounds the sup-norms of q - level and its first two
  /// derivatives; a negative value means "derive it from `bounds`".
  Potential(double level, Function deviation, SupBounds bounds,
            double deviation_bound = -1.0, double feature_width = 1.0)
      : level_(level),
        deviation_(std::move(deviation)),
        bounds_(bounds),
        deviation_bound_(deviation_bound),
        feature_width_(feature_width) {
    if (!(feature_width_ > 0.0) || feature_width_ > 1.0)
      throw input_error("potential feature width must lie in (0, 1]");
    if (deviation_bound_ < 0.0) {
      deviation_bound_ = deviation_ ? std::max({std::abs(bounds_.value) + std::abs(level_),
                                                bounds_.first, bounds_.second})
                                    : 0.0;
    }
  }

  static Potential constant(double value) {
    return Potential(value, nullptr, SupBounds{std::abs(value), 0.0, 0.0}, 0.0);
  }

  /// A general q with level zero.
  static Potential from_function(Function q, SupBounds bounds, double feature_width = 1.0) {
    return Potential(0.0, std::move(q), bounds, -1.0, feature_width);
  }

  double operator()(double x) const { return level_ + deviation(x); }
  double deviation(double x) const { return deviation_ ? deviation_(x) : 0.0; }
  double level() const { return level_; }
  bool is_constant() const { return !deviation_; }
  const SupBounds& bounds() const { return bounds_; }
  double deviation_bound() const { return deviation_bound_; }
  double feature_width() const { return feature_width_; }

  /// Spot-checks class Q membership: range in [0,1] on a uniform grid and
  /// every declared sup bound at most one.
  void check_admissible(int grid = 4096) const {
    if (bounds_.max() > 1.0 + 1e-12)
      throw input_error("potential sup bounds exceed 1; not in class Q");
    for (int i = 0; i <= grid; ++i) {
      const double x = static_cast<double>(i) / grid;
      const double v = (*this)(x);
      if (!(v >= 0.0 && v <= 1.0))
        throw input_error("potential leaves [0,1] at x = " + std::to_string(x));
    }
  }

 private:
  double level_ = 0.0;
  Function deviation_;
  SupBounds bounds_{};
  double deviation_bound_ = 0.0;
  double feature_width_ = 1.0;
};

/// f in C^2([0,1]) with max_i ||f^(i)|| <= bound_m. `feature_width` is the
/// shortest length scale on which f varies; solvers resolve it.
struct SmoothIntegrand {
  std::function<double(double)> eval;
  double bound_m = 1.0;
  double feature_width = 1.0;

  double operator()(double x) const { return eval(x); }
};

/// The k x k matrix M_q = (k+1)^2 tridiag(-1, 2, -1) + diag(q(i/(k+1))).
/// The potential samples are kept split into level + deviation.
class TridiagonalSystem {
 public:
  TridiagonalSystem(std::uint64_t k, double level, std::vector<double> deviation)
      : k_(k), level_(level), deviation_(std::move(deviation)) {
    if (k_ == 0) throw input_error("matrix dimension k must be positive");
    if (deviation_.size() != k_) throw input_error("deviation sample count must equal k");
    const double h = static_cast<double>(k_ + 1);
    scale_ = h * h;
  }

  std::uint64_t k() const { return k_; }
  double scale() const { return scale_; }
  double level() const { return level_; }
  const std::vector<double>& deviation() const { return deviation_; }
  double potential(std::size_t i) const { return level_ + deviation_[i]; }
  double diagonal(std::size_t i) const { return 2.0 * scale_ + potential(i); }
  double off_diagonal() const { return -scale_; }
  double trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < k_; ++i) t += diagonal(i);
    return t;
  }
  double norm_inf() const {
    double m = 0.0;
    for (std::size_t i = 0; i < k_; ++i) {
      const double row = std::abs(diagonal(i)) + (i > 0 ? scale_ : 0.0) + (i + 1 < k_ ? scale_ : 0.0);
      m = std::max(m, row);
    }
    return m;
  }
  std::pair<double, double> gershgorin() const {
    double lo = diagonal(0), hi = diagonal(0);
    for (std::size_t i = 0; i < k_; ++i) {
      const double r = (i > 0 ? scale_ : 0.0) + (i + 1 < k_ ? scale_ : 0.0);
      lo = std::min(lo, diagonal(i) - r);
      hi = std::max(hi, diagonal(i) + r);
    }
    return {lo, hi};
  }

 private:
  std::uint64_t k_;
  double level_;
  std::vector<double> deviation_;
  double scale_ = 1.0;
};

/// Resource counts for one run. Merging sums every count except the qubit
/// peak, which takes the maximum.
struct QueryLedger {
  std::uint64_t power_queries = 0;
  std::uint64_t bit_queries = 0;
  std::uint64_t qubits_peak = 0;
  std::uint64_t classical_ops = 0;
  // Confirmation calls made after an algorithm finishes; excluded from
  // bit_queries so query-count checks see only the algorithm itself.
  std::uint64_t verification_queries = 0;

  QueryLedger& merge(const QueryLedger& o) {
    power_queries += o.power_queries;
    bit_queries += o.bit_queries;
    qubits_peak = std::max(qubits_peak, o.qubits_peak);
    classical_ops += o.classical_ops;
    verification_queries += o.verification_queries;
    return *this;
  }

  friend QueryLedger merge(QueryLedger a, const QueryLedger& b) { return a.merge(b); }
  friend bool operator==(const QueryLedger&, const QueryLedger&) = default;
};

/// A value with accuracy eta holding with probability at least 1 - delta.
struct EstimateWithConfidence {
  double value = 0.0;
  double eta = 0.0;
  double delta = 0.0;
  QueryLedger ledger;
};

inline void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw input_error("delta must lie in (0,1)");
}

/// 1 - (1-delta)^(1/parts): the per-stage failure budget when `parts`
/// independent stages must all succeed.
inline double split_confidence(double delta, double parts) {
  check_delta(delta);
  return -std::expm1(std::log1p(-delta) / parts);
}

inline TridiagonalSystem build_matrix(const Potential& q, std::uint64_t k) {
  if (k == 0) throw input_error("matrix dimension k must be positive");
  std::vector<double> dev(k);
  const double h = static_cast<double>(k + 1);
  for (std::uint64_t i = 0; i < k; ++i) {
    const double x = static_cast<double>(i + 1) / h;
    dev[i] = q.deviation(x);
    const double v = q.level() + dev[i];
    if (!(v >= 0.0 && v <= 1.0))
      throw input_error("potential sample outside [0,1] at x = " + std::to_string(x));
  }
  return TridiagonalSystem(k, q.level(), std::move(dev));
}

/// q_{f,c} = 1/2 + c f, admissible when c <= 1/(2M).
inline Potential potential_from_integrand(const SmoothIntegrand& f, double c) {
  if (!(c > 0.0)) throw input_error("scaling c must be positive");
  if (!(f.bound_m > 0.0)) throw input_error("integrand bound M must be positive");
  if (c * 2.0 * f.bound_m > 1.0 + 1e-12)
    throw input_error("scaling c exceeds 1/(2M); q would leave class Q");
  const double cm = c * f.bound_m;
  auto eval = f.eval;
  return Potential(
      0.5, [eval, c](double x) { return c * eval(x); },
      SupBounds{std::min(1.0, 0.5 + cm), std::min(1.0, cm), std::min(1.0, cm)}, cm,
      f.feature_width);
}

}  // namespace slred
