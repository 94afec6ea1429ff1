#pragma once

// Simulated phase estimation for the smallest eigenvalue of M_q, plus the
// deterministic classical stand-in. Quantum runs are read relative to the
// exactly known free spectrum, so the discretization bias of the constant
// part is removed in closed form.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <thread>
#include <vector>

#include "slred/context.hpp"
#include "slred/core.hpp"
#include "slred/detail/quad.hpp"
#include "slred/eigen.hpp"
#include "slred/qpe_dense.hpp"

namespace slred {

struct PhaseEstimationPlan {
  std::uint64_t k = 3;
  int b = 3;
  int r = 1;
  Backend backend = Backend::classical;
  std::uint64_t seed = 0;

  int target_qubits() const { return detail::log2_exact(k + 1); }
  std::uint64_t qubits() const { return static_cast<std::uint64_t>(b + target_qubits()); }
  std::uint64_t power_queries() const { return static_cast<std::uint64_t>(r) * static_cast<std::uint64_t>(b); }
};

/// `deviation_bound` scales the discretization error term: the constant
/// part of q is corrected exactly, so only q - level contributes.
/// `apply_cap` is false for the classical stand-in, whose plan is only
/// used for hypothetical query counts.
inline PhaseEstimationPlan make_plan(double eta, double delta, const QpeConfig& cfg = {},
                                     double deviation_bound = 1.0, bool apply_cap = true) {
  if (!(eta > 0.0 && eta < 1.0)) throw input_error("eta must lie in (0,1)");
  check_delta(delta);
  if (!(deviation_bound >= 0.0)) throw input_error("deviation bound must be non-negative");
  PhaseEstimationPlan plan;
  if (cfg.k_override) {
    const std::uint64_t k = *cfg.k_override;
    if (k < 1 || ((k + 1) & k) != 0) throw input_error("k override must be a power of two minus one");
    plan.k = k;
  } else {
    long double points = 4;
    const long double need = static_cast<long double>(cfg.c_disc) * deviation_bound / (eta / 2.0);
    while (points * points < need) points *= 2;
    if (points > 0x1p62L) throw capacity_error("eta too small: matrix dimension overflows");
    plan.k = static_cast<std::uint64_t>(points) - 1;
  }
  if (apply_cap && plan.k > cfg.k_cap)
    throw capacity_error("accuracy beyond backend capacity: k = " + std::to_string(plan.k) + " exceeds cap " +
                         std::to_string(cfg.k_cap));
  plan.b = std::max(3, static_cast<int>(std::ceil(std::log2(8.0 * std::numbers::pi / eta))) + cfg.guard_bits);
  const double rmin = cfg.chernoff_c * std::log(1.0 / delta) + 1.0;
  int r = static_cast<int>(std::ceil(rmin - 1e-12));
  if (r % 2 == 0) ++r;
  plan.r = std::max(1, r);
  return plan;
}

/// Normalized discrete sine vector, the ground state of the free operator.
inline std::vector<double> initial_state(std::uint64_t k) {
  if (k < 1) throw input_error("k must be positive");
  return sine_mode(k, 1);
}

struct PhaseSample {
  std::uint64_t outcome = 0;
  int bits = 0;

  double phase() const { return std::ldexp(static_cast<double>(outcome), -bits); }
  double lambda_readout() const { return static_cast<double>(lambda_readout_quad()); }
  detail::quad lambda_readout_quad() const {
    return 4 * detail::quad_pi() * detail::ldexp_quad(static_cast<detail::quad>(outcome), -bits);
  }
};

/// Eigen-decomposition of the initial state: weights w_i and scaled phases
/// 2^b * phi_i in [0, 2^b).
struct SpectralModel {
  int b = 0;
  std::vector<double> weights;
  std::vector<detail::quad> scaled_phases;
  double retained_weight = 0.0;
  double deficit = 0.0;
  std::vector<std::vector<double>> windows;  // see prepare_sampler
};

namespace detail {

/// Fejer kernel sin^2(pi d) / (N^2 sin^2(pi d / N)) at a scaled offset d.
inline double fejer(quad d, int b) {
  const quad n = ldexp_quad(1, b);
  d = fmodq(d, n);
  if (d > n / 2) d -= n;
  if (d <= -n / 2) d += n;
  if (d == 0) return 1.0;
  const quad nearest = floorq(d + quad(0.5));
  const double frac = static_cast<double>(d - nearest);
  const double num = std::sin(std::numbers::pi * frac);
  const double den = std::ldexp(std::sin(std::numbers::pi * static_cast<double>(d / n)), b);
  return (num * num) / (den * den);
}

inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace detail

inline SpectralModel make_spectral_model(const TridiagonalSystem& t, int b, double truncation_weight) {
  if (b < 1 || b > 62) throw capacity_error("spectral backend supports 1..62 ancilla bits");
  SpectralModel m;
  m.b = b;
  const std::vector<double> s = initial_state(t.k());
  // bisect to the limit of double precision; phases at b > 50 need it
  const double tol = std::numeric_limits<double>::min();
  std::uint64_t count = 1;
  std::vector<EigenPair> pairs;
  for (;;) {
    pairs = leading_eigenpairs(t, count, tol);
    double total = 0.0;
    for (const auto& p : pairs) {
      double dot = 0.0;
      for (std::size_t i = 0; i < s.size(); ++i) dot += p.vector[i] * s[i];
      total += dot * dot;
    }
    const double residual = std::max(0.0, 1.0 - total);
    if (residual < truncation_weight || count == t.k()) break;
    count = std::min<std::uint64_t>(2 * count, t.k());
  }
  const detail::quad four_pi = 4 * detail::quad_pi();
  const detail::quad n = detail::ldexp_quad(1, b);
  for (const auto& p : pairs) {
    double dot = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) dot += p.vector[i] * s[i];
    m.weights.push_back(dot * dot);
    detail::quad lambda;
    if (p.index == 0)
      lambda = detail::free_eigenvalue_quad(t.k()) + static_cast<detail::quad>(t.level()) +
               static_cast<detail::quad>(p.offset);
    else
      lambda = static_cast<detail::quad>(p.value);
    detail::quad phi = lambda / four_pi;
    phi -= floorq(phi);
    m.scaled_phases.push_back(phi * n);
  }
  for (double w : m.weights) m.retained_weight += w;
  m.deficit = std::max(0.0, 1.0 - m.retained_weight);
  return m;
}

/// All 2^b outcome probabilities, renormalized over the retained weight.
inline std::vector<double> spectral_distribution(const SpectralModel& m) {
  if (m.b > 24) throw capacity_error("outcome enumeration limited to 24 ancilla bits");
  const std::uint64_t n = std::uint64_t{1} << m.b;
  std::vector<double> p(n, 0.0);
  for (std::uint64_t out = 0; out < n; ++out) {
    double acc = 0.0;
    for (std::size_t i = 0; i < m.weights.size(); ++i)
      acc += m.weights[i] * detail::fejer(m.scaled_phases[i] - static_cast<detail::quad>(out), m.b);
    p[out] = acc / m.retained_weight;
  }
  return p;
}

inline std::uint64_t sample_from_distribution(const std::vector<double>& p, double u) {
  double total = 0.0;
  for (double x : p) total += x;
  const double target = u * total;
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    acc += p[i];
    if (target < acc) return i;
  }
  return p.size() - 1;
}

namespace detail {

inline std::int64_t window_half(int b) { return std::int64_t{1} << std::min(b - 1, 15); }

/// Cumulative kernel mass at offsets -W+1..W from floor(2^b phi), where
/// `frac` is the fractional part of 2^b phi.
inline std::vector<double> window_cdf(double frac, int b) {
  const std::int64_t w = window_half(b);
  const double s = std::sin(std::numbers::pi * frac);
  const double num = s * s;
  std::vector<double> cdf(static_cast<std::size_t>(2 * w));
  double acc = 0.0;
  for (std::int64_t ell = -w + 1; ell <= w; ++ell) {
    const double d = frac - static_cast<double>(ell);
    double v;
    if (d == 0.0) {
      v = 1.0;
    } else {
      const double den = std::ldexp(std::sin(std::numbers::pi * std::ldexp(d, -b)), b);
      v = num / (den * den);
    }
    acc += v;
    cdf[static_cast<std::size_t>(ell + w - 1)] = acc;
  }
  return cdf;
}

}  // namespace detail

/// Caches window tables for the heaviest components so repeated draws are cheap.
inline void prepare_sampler(SpectralModel& m, std::size_t max_components = 64) {
  m.windows.clear();
  for (std::size_t i = 0; i < m.weights.size() && i < max_components; ++i) {
    const detail::quad f = m.scaled_phases[i];
    m.windows.push_back(detail::window_cdf(static_cast<double>(f - floorq(f)), m.b));
  }
}

/// Draws one outcome from the kernel mixture without enumerating 2^b
/// outcomes: exact probabilities in a window around the chosen phase, a
/// 1/d^2 tail beyond it. For b <= 16 the window is the whole outcome space.
inline std::uint64_t sample_spectral_mixture(const SpectralModel& m, std::mt19937_64& rng) {
  const std::int64_t window = detail::window_half(m.b);
  const double u = detail::uniform01(rng) * m.retained_weight;
  std::size_t comp = 0;
  for (double acc = 0.0; comp + 1 < m.weights.size(); ++comp) {
    acc += m.weights[comp];
    if (u < acc) break;
  }
  const detail::quad f_scaled = m.scaled_phases[comp];
  const detail::quad base = floorq(f_scaled);
  const double frac = static_cast<double>(f_scaled - base);
  const std::uint64_t mask = (std::uint64_t{1} << m.b) - 1;
  auto wrap = [&](std::int64_t ell) {
    return (static_cast<std::uint64_t>(static_cast<std::int64_t>(base)) + static_cast<std::uint64_t>(ell)) & mask;
  };

  std::vector<double> local;
  const std::vector<double>* cdf = &local;
  if (comp < m.windows.size())
    cdf = &m.windows[comp];
  else
    local = detail::window_cdf(frac, m.b);
  const double in_window = cdf->back();
  const double v = detail::uniform01(rng);
  const bool whole_space = 2 * window == static_cast<std::int64_t>(mask + 1);
  if (v < in_window || whole_space) {
    const auto it = std::upper_bound(cdf->begin(), cdf->end(), v * (whole_space ? in_window : 1.0));
    const auto idx = std::min<std::int64_t>(it - cdf->begin(), 2 * window - 1);
    return wrap(idx - window + 1);
  }
  const double far = std::ldexp(1.0, m.b - 1);
  const double right_near = static_cast<double>(window) + 0.5 - frac;
  const double left_near = static_cast<double>(window) - 0.5 + frac;
  const double right_mass = 1.0 / right_near - 1.0 / far;
  const double left_mass = 1.0 / left_near - 1.0 / far;
  const double w = detail::uniform01(rng) * (right_mass + left_mass);
  const double z = detail::uniform01(rng);
  if (w < right_mass) {
    const double d = 1.0 / (1.0 / right_near - z * right_mass);
    return wrap(std::max<std::int64_t>(window + 1, std::llround(d + frac)));
  }
  const double d = 1.0 / (1.0 / left_near - z * left_mass);
  return wrap(std::min<std::int64_t>(-window, std::llround(frac - d)));
}

/// Phase estimation on one matrix, reused across repetitions.
class PhaseEstimator {
 public:
  PhaseEstimator(const TridiagonalSystem& t, const PhaseEstimationPlan& plan, const QpeConfig& cfg = {},
                 double delta = 0.1)
      : plan_(plan) {
    if (plan.k != t.k()) throw input_error("plan k does not match the matrix");
    if (plan.b > cfg.max_phase_bits) throw capacity_error("ancilla count exceeds the simulator's phase precision");
    switch (plan.backend) {
      case Backend::dense:
        distribution_ = dense_distribution(t, plan.b, initial_state(t.k()), cfg.dense_qubit_cap);
        break;
      case Backend::spectral:
        model_ = make_spectral_model(t, plan.b, cfg.truncation_weight.value_or(delta / 10.0));
        if (plan.b <= 16)
          distribution_ = spectral_distribution(*model_);
        else
          prepare_sampler(*model_);
        break;
      case Backend::classical:
        throw input_error("phase sampling needs a quantum backend");
    }
  }

  PhaseSample sample(std::mt19937_64& rng) const {
    PhaseSample s;
    s.bits = plan_.b;
    s.outcome = distribution_.empty() ? sample_spectral_mixture(*model_, rng)
                                      : sample_from_distribution(distribution_, detail::uniform01(rng));
    return s;
  }

  /// Substream for repetition `rep` of a plan.
  static std::mt19937_64 stream(std::uint64_t seed, std::uint64_t rep) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(rep), static_cast<std::uint32_t>(rep >> 32)};
    return std::mt19937_64(seq);
  }

  const std::vector<double>& distribution() const { return distribution_; }
  double truncation_deficit() const { return model_ ? model_->deficit : 0.0; }

 private:
  PhaseEstimationPlan plan_;
  std::vector<double> distribution_;
  std::optional<SpectralModel> model_;
};

inline PhaseSample qpe_sample(const TridiagonalSystem& t, const PhaseEstimationPlan& plan, std::mt19937_64& rng,
                              const QpeConfig& cfg = {}, double delta = 0.1) {
  return PhaseEstimator(t, plan, cfg, delta).sample(rng);
}

/// Probability that the median of r runs is wrong when each run is right
/// with probability p.
inline double median_failure_probability(double p, int r) {
  double tail = 0.0;
  for (int s = 0; 2 * s < r; ++s) {
    const double logc = std::lgamma(r + 1.0) - std::lgamma(s + 1.0) - std::lgamma(r - s + 1.0);
    tail += std::exp(logc + s * std::log(p) + (r - s) * std::log1p(-p));
  }
  return tail;
}

struct LambdaEstimate : EstimateWithConfidence {
  double level = 0.0;
  double offset = 0.0;  // value - pi^2 - level, carried at full relative precision
  PhaseEstimationPlan plan;
  double truncation_deficit = 0.0;
  std::vector<std::uint64_t> outcomes;
};

/// An eta-approximation of lambda(q) with probability >= 1 - delta.
inline LambdaEstimate estimate_lambda(const Potential& q, double eta, double delta, Context& ctx) {
  const QpeConfig& cfg = ctx.config().qpe;
  const Backend backend = ctx.backend();
  LambdaEstimate est;
  est.eta = eta;
  est.delta = delta;
  est.level = q.level();
  est.plan = make_plan(eta, delta, cfg, q.deviation_bound(), backend != Backend::classical);
  est.plan.backend = backend;
  est.plan.seed = ctx.next_stream();
  const PhaseEstimationPlan& plan = est.plan;
  est.ledger.power_queries = plan.power_queries();
  est.ledger.qubits_peak = plan.qubits();

  if (backend == Backend::classical) {
    const ReferenceLambda ref = reference_lambda(q, eta / 2.0);
    if (!ref.converged)
      throw capacity_error("classical eigenvalue solver reached its grid cap at accuracy " +
                           std::to_string(ref.achieved_tol) + " > " + std::to_string(eta / 2.0));
    est.offset = ref.offset;
    est.value = ref.value;
    est.ledger.classical_ops = ref.sweeps;
    return est;
  }

  const TridiagonalSystem t = build_matrix(q, plan.k);
  const PhaseEstimator estimator(t, plan, cfg, delta);
  est.truncation_deficit = estimator.truncation_deficit();
  est.outcomes.assign(static_cast<std::size_t>(plan.r), 0);
  auto run = [&](int from, int to) {
    for (int rep = from; rep < to; ++rep) {
      auto rng = PhaseEstimator::stream(plan.seed, static_cast<std::uint64_t>(rep));
      est.outcomes[static_cast<std::size_t>(rep)] = estimator.sample(rng).outcome;
    }
  };
  const int threads = static_cast<int>(std::clamp<unsigned>(cfg.threads, 1, static_cast<unsigned>(plan.r)));
  if (threads == 1) {
    run(0, plan.r);
  } else {
    std::vector<std::thread> pool;
    const int chunk = (plan.r + threads - 1) / threads;
    for (int from = 0; from < plan.r; from += chunk) pool.emplace_back(run, from, std::min(plan.r, from + chunk));
    for (auto& th : pool) th.join();
  }

  std::vector<std::uint64_t> sorted = est.outcomes;
  std::nth_element(sorted.begin(), sorted.begin() + plan.r / 2, sorted.end());
  const PhaseSample median{sorted[static_cast<std::size_t>(plan.r / 2)], plan.b};
  const detail::quad off =
      median.lambda_readout_quad() - detail::free_eigenvalue_quad(plan.k) - static_cast<detail::quad>(q.level());
  est.offset = static_cast<double>(off);
  est.value = std::numbers::pi * std::numbers::pi + q.level() + est.offset;
  est.ledger.classical_ops = static_cast<std::uint64_t>(plan.r);
  return est;
}

}  // namespace slred
