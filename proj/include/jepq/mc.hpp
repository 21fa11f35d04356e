#pragma once

// Seeded simulation of the juggler's exclusion process.
//
// RngStream is counter based: draw i of stream (seed, index) is
//   mix(mix(key_lo + i * gamma) ^ key_hi)
// where mix is the SplitMix64 finalizer and (key_lo, key_hi) are hashed from
// (seed, index). Streams with distinct indices never share state, so
// replica r of a batch always uses RngStream(seed, r) regardless of
// scheduling.

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "jepq/dist.hpp"
#include "jepq/jep.hpp"
#include "jepq/state.hpp"

namespace jepq {

class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();
  result_type operator()() { return next_u64(); }
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform_open();

  [[nodiscard]] std::uint64_t seed() const { return seed_; }
  [[nodiscard]] std::uint64_t stream() const { return stream_; }
  [[nodiscard]] std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t key_lo_;
  std::uint64_t key_hi_;
  std::uint64_t counter_ = 0;
};

/// floor(log U / log q): P(xi = x) = (1-q) q^x.
int sample_geometric(RngStream& rng, double q);

/// Inverse CDF of the ell-truncated geometric law on {0..ell-1}.
int sample_truncated_geometric(RngStream& rng, double q, int ell);

/// eta = theta_{X*}(xi) with xi drawn from the model's throw-index law.
Height sample_throw(RngStream& rng, const JugglerState& after_shift, const ThrowModel<double>& model);

/// One step of the dynamics.
JugglerState step(RngStream& rng, const JugglerState& b, const ThrowModel<double>& model);

struct Trajectory {
  JugglerState initial;
  std::vector<JugglerState> states;  // t = 0..T
  long long throw_count = 0;         // steps t < T with 0 in X_t
};

Trajectory simulate(const ThrowModel<double>& model, const JugglerState& start, long long steps,
                    std::uint64_t seed);
Trajectory simulate(const ThrowModel<double>& model, const JugglerState& start, long long steps,
                    RngStream& rng);

/// Visit frequencies over states[burn_in..T].
DistVector<double, JugglerState> empirical_distribution(const Trajectory& traj, long long burn_in);

/// Fraction of steps t in [burn_in, T] with 0 in X_t.
double occupancy_of_zero(const Trajectory& traj, long long burn_in);

/// Empirical law of X_T across independent replicas started at `start`;
/// replica r uses RngStream(seed, r).
DistVector<double, JugglerState> sample_states_at(const ThrowModel<double>& model,
                                                  const JugglerState& start, long long steps,
                                                  long long replicas, std::uint64_t seed);

struct CoupledThrow {
  int xi = 0;      // untruncated geometric index
  int xi_hat = 0;  // ell-truncated geometric index
  bool agreed = true;
};

/// Maximal coupling of geometric(q) and its ell-truncation: xi is drawn
/// first, xi_hat = xi when xi < ell, otherwise xi_hat is a fresh truncated
/// draw. P(xi != xi_hat) = q^ell, the total variation between the two laws.
CoupledThrow coupled_throw_pair(RngStream& rng, int ell, double q);

struct CoupledRun {
  /// First step s >= 1 whose coupled throw indices disagree.
  std::optional<long long> first_decouple_step;
  /// First time t at which the two paths differ.
  std::optional<long long> first_divergence_step;
  std::vector<JugglerState> bounded_path;    // t = 0..T
  std::vector<JugglerState> unbounded_path;  // t = 0..T
};

/// Bounded (m, n, q) and unbounded (n, q) chains from the same start, driven
/// by one coupled index pair per step. Throws std::logic_error if the paths
/// differ before the first disagreement.
CoupledRun coupled_simulate(int m, int n, double q, const JugglerState& start, long long steps,
                            std::uint64_t seed);
CoupledRun coupled_simulate(int m, int n, double q, const JugglerState& start, long long steps,
                            RngStream& rng);

struct CouplingEstimate {
  long long replicas = 0;
  double all_agree = 0.0;         // fraction with no index disagreement through t
  double paths_identical = 0.0;   // fraction with X_s = X^_s for all s <= t
  double predicted = 0.0;         // (1 - q^ell)^t
};

CouplingEstimate estimate_coupling(int m, int n, double q, const JugglerState& start,
                                   long long steps, long long replicas, std::uint64_t seed);

}  // namespace jepq
