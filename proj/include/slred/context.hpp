#pragma once

// Backend selection, tunable constants, and the per-run seed stream shared
// by every reduction.

#include <cstdint>
#include <optional>
#include <string>

#include "slred/core.hpp"

namespace slred {

enum class Backend { classical, spectral, dense };

inline std::string to_string(Backend b) {
  switch (b) {
    case Backend::classical: return "classical";
    case Backend::spectral: return "spectral";
    case Backend::dense: return "dense";
  }
  return "unknown";
}

inline Backend parse_backend(const std::string& s) {
  if (s == "classical") return Backend::classical;
  if (s == "spectral") return Backend::spectral;
  if (s == "dense") return Backend::dense;
  throw input_error("unknown backend '" + s + "' (expected classical, spectral or dense)");
}

struct QpeConfig {
  double c_disc = 20.0;     // discretization constant in the k rule
  int guard_bits = 2;       // extra ancilla bits beyond the eta/2 resolution
  double chernoff_c = 8.0;  // repetitions r >= chernoff_c ln(1/delta) + 1
  std::uint64_t k_cap = (std::uint64_t{1} << 24) - 1;
  int dense_qubit_cap = 24;
  int max_phase_bits = 62;  // outcomes are stored in 64-bit integers
  std::optional<std::uint64_t> k_override;
  // Residual eigen-weight allowed to be dropped by the spectral sampler;
  // unset means delta/10.
  std::optional<double> truncation_weight;
  unsigned threads = 1;
};

struct IntegrationConfig {
  double bump_alpha = 3.0;         // profile (x(1-x))^alpha
  double log_base = 0.0;           // base of the log in c; 0 means natural log
  double residual_constant = 2.0;  // bound on the eigenvalue-to-integral remainder constant
};

struct Config {
  QpeConfig qpe;
  IntegrationConfig integration;
};

/// Carries the backend, constants, and a deterministic stream of seeds.
/// Every randomized call draws a fresh seed, so a whole pipeline is
/// reproducible from the root seed alone.
class Context {
 public:
  explicit Context(Backend backend = Backend::classical, std::uint64_t seed = 0, Config config = {})
      : backend_(backend), seed_(seed), config_(config) {}

  Backend backend() const { return backend_; }
  std::uint64_t seed() const { return seed_; }
  const Config& config() const { return config_; }
  Config& config() { return config_; }

  std::uint64_t next_stream() { return mix(seed_ + 0x9e3779b97f4a7c15ULL * ++streams_); }
  std::uint64_t streams_used() const { return streams_; }

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  Backend backend_;
  std::uint64_t seed_;
  Config config_;
  std::uint64_t streams_ = 0;
};

}  // namespace slred
