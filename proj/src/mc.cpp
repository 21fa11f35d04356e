#include "jepq/mc.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace jepq {
namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30U)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27U)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31U);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed),
      stream_(stream),
      key_lo_(mix64(seed ^ mix64(stream + kGamma))),
      key_hi_(mix64(key_lo_ + 0xD1B54A32D192ED03ULL)) {}

std::uint64_t RngStream::next_u64() {
  const std::uint64_t i = counter_++;
  return mix64(mix64(key_lo_ + i * kGamma) ^ key_hi_);
}

double RngStream::uniform_open() {
  return (static_cast<double>(next_u64() >> 11U) + 0.5) * 0x1.0p-53;
}

int sample_geometric(RngStream& rng, double q) {
  if (!(q > 0.0 && q < 1.0)) {
    throw std::invalid_argument("sample_geometric: require 0 < q < 1");
  }
  const double x = std::floor(std::log(rng.uniform_open()) / std::log(q));
  return x >= static_cast<double>(std::numeric_limits<int>::max())
             ? std::numeric_limits<int>::max()
             : static_cast<int>(x);
}

int sample_truncated_geometric(RngStream& rng, double q, int ell) {
  if (ell < 1) {
    throw std::invalid_argument("sample_truncated_geometric: ell must be positive");
  }
  if (!(q > 0.0 && q < 1.0)) {
    throw std::invalid_argument("sample_truncated_geometric: require 0 < q < 1");
  }
  if (ell == 1) {
    rng.next_u64();  // keep one draw per throw regardless of ell
    return 0;
  }
  const double mass = -std::expm1(static_cast<double>(ell) * std::log(q));  // 1 - q^ell
  const double x = std::floor(std::log1p(-rng.uniform_open() * mass) / std::log(q));
  return std::clamp(static_cast<int>(x), 0, ell - 1);
}

Height sample_throw(RngStream& rng, const JugglerState& after_shift, const ThrowModel<double>& model) {
  if (model.n < 1 || after_shift.size() != static_cast<std::size_t>(model.n - 1)) {
    throw std::invalid_argument("sample_throw: X* must hold n-1 particles");
  }
  if (model.bounded() && after_shift.max() > model.m - 2) {
    throw std::invalid_argument("sample_throw: X* occupies a height above m-2");
  }
  int index = 0;
  switch (model.kind) {
    case ModelKind::BoundedGeometric:
      index = sample_truncated_geometric(rng, model.q, model.ell());
      break;
    case ModelKind::UnboundedGeometric:
      index = sample_geometric(rng, model.q);
      break;
    case ModelKind::BoundedUniform: {
      const int ell = model.ell();
      index = std::min(static_cast<int>(rng.uniform_open() * ell), ell - 1);
      break;
    }
  }
  return theta(after_shift, index);
}

JugglerState step(RngStream& rng, const JugglerState& b, const ThrowModel<double>& model) {
  if (!b.contains(0)) {
    return b.shifted(-1);
  }
  JugglerState rest = b.without(0).shifted(-1);
  const Height eta = sample_throw(rng, rest, model);
  return rest.with(eta);
}

Trajectory simulate(const ThrowModel<double>& model, const JugglerState& start, long long steps,
                    RngStream& rng) {
  model.validate_state(start);
  if (steps < 0) {
    throw std::invalid_argument("simulate: negative step count");
  }
  Trajectory traj;
  traj.initial = start;
  traj.states.reserve(static_cast<std::size_t>(steps) + 1);
  traj.states.push_back(start);
  for (long long t = 0; t < steps; ++t) {
    const JugglerState& current = traj.states.back();
    if (current.contains(0)) {
      ++traj.throw_count;
    }
    traj.states.push_back(step(rng, current, model));
  }
  return traj;
}

Trajectory simulate(const ThrowModel<double>& model, const JugglerState& start, long long steps,
                    std::uint64_t seed) {
  RngStream rng(seed);
  return simulate(model, start, steps, rng);
}

namespace {

DistVector<double, JugglerState> normalize_counts(const std::map<JugglerState, long long>& counts,
                                                  long long total) {
  DistVector<double, JugglerState> d;
  d.support.reserve(counts.size());
  d.prob.reserve(counts.size());
  for (const auto& [state, c] : counts) {
    d.support.push_back(state);
    d.prob.push_back(static_cast<double>(c) / static_cast<double>(total));
  }
  return d;
}

}  // namespace

DistVector<double, JugglerState> empirical_distribution(const Trajectory& traj, long long burn_in) {
  const auto size = static_cast<long long>(traj.states.size());
  if (burn_in < 0 || burn_in >= size) {
    throw std::invalid_argument("empirical_distribution: empty sample after burn-in");
  }
  std::map<JugglerState, long long> counts;
  for (long long t = burn_in; t < size; ++t) {
    ++counts[traj.states[static_cast<std::size_t>(t)]];
  }
  return normalize_counts(counts, size - burn_in);
}

double occupancy_of_zero(const Trajectory& traj, long long burn_in) {
  const auto size = static_cast<long long>(traj.states.size());
  if (burn_in < 0 || burn_in >= size) {
    throw std::invalid_argument("occupancy_of_zero: empty sample after burn-in");
  }
  long long hits = 0;
  for (long long t = burn_in; t < size; ++t) {
    hits += traj.states[static_cast<std::size_t>(t)].contains(0) ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(size - burn_in);
}

DistVector<double, JugglerState> sample_states_at(const ThrowModel<double>& model,
                                                  const JugglerState& start, long long steps,
                                                  long long replicas, std::uint64_t seed) {
  model.validate_state(start);
  if (replicas < 1) {
    throw std::invalid_argument("sample_states_at: need at least one replica");
  }
  std::map<JugglerState, long long> counts;
  for (long long r = 0; r < replicas; ++r) {
    RngStream rng(seed, static_cast<std::uint64_t>(r));
    JugglerState x = start;
    for (long long t = 0; t < steps; ++t) {
      x = step(rng, x, model);
    }
    ++counts[x];
  }
  return normalize_counts(counts, replicas);
}

CoupledThrow coupled_throw_pair(RngStream& rng, int ell, double q) {
  if (ell < 1) {
    throw std::invalid_argument("coupled_throw_pair: ell must be positive");
  }
  CoupledThrow out;
  out.xi = sample_geometric(rng, q);
  if (out.xi < ell) {
    out.xi_hat = out.xi;
    out.agreed = true;
  } else {
    out.xi_hat = sample_truncated_geometric(rng, q, ell);
    out.agreed = false;
  }
  return out;
}

CoupledRun coupled_simulate(int m, int n, double q, const JugglerState& start, long long steps,
                            RngStream& rng) {
  const auto bounded = ThrowModel<double>::bounded_geometric(m, n, q);
  bounded.validate_state(start);
  if (steps < 0) {
    throw std::invalid_argument("coupled_simulate: negative step count");
  }
  const int ell = bounded.ell();
  CoupledRun run;
  run.bounded_path.reserve(static_cast<std::size_t>(steps) + 1);
  run.unbounded_path.reserve(static_cast<std::size_t>(steps) + 1);
  run.bounded_path.push_back(start);
  run.unbounded_path.push_back(start);
  for (long long s = 1; s <= steps; ++s) {
    const CoupledThrow pair = coupled_throw_pair(rng, ell, q);
    if (!pair.agreed && !run.first_decouple_step) {
      run.first_decouple_step = s;
    }
    auto advance = [](const JugglerState& x, int index) {
      if (!x.contains(0)) {
        return x.shifted(-1);
      }
      JugglerState rest = x.without(0).shifted(-1);
      return rest.with(theta(rest, index));
    };
    run.bounded_path.push_back(advance(run.bounded_path.back(), pair.xi_hat));
    run.unbounded_path.push_back(advance(run.unbounded_path.back(), pair.xi));
    if (!run.first_divergence_step && run.bounded_path.back() != run.unbounded_path.back()) {
      run.first_divergence_step = s;
      if (!run.first_decouple_step) {
        throw std::logic_error("coupled_simulate: paths diverged while throws agreed");
      }
    }
  }
  return run;
}

CoupledRun coupled_simulate(int m, int n, double q, const JugglerState& start, long long steps,
                            std::uint64_t seed) {
  RngStream rng(seed);
  return coupled_simulate(m, n, q, start, steps, rng);
}

CouplingEstimate estimate_coupling(int m, int n, double q, const JugglerState& start,
                                   long long steps, long long replicas, std::uint64_t seed) {
  if (replicas < 1) {
    throw std::invalid_argument("estimate_coupling: need at least one replica");
  }
  long long agree = 0;
  long long identical = 0;
  for (long long r = 0; r < replicas; ++r) {
    RngStream rng(seed, static_cast<std::uint64_t>(r));
    const CoupledRun run = coupled_simulate(m, n, q, start, steps, rng);
    agree += run.first_decouple_step ? 0 : 1;
    identical += run.first_divergence_step ? 0 : 1;
  }
  CouplingEstimate est;
  est.replicas = replicas;
  est.all_agree = static_cast<double>(agree) / static_cast<double>(replicas);
  est.paths_identical = static_cast<double>(identical) / static_cast<double>(replicas);
  est.predicted = std::pow(1.0 - std::pow(q, m - n + 1), static_cast<double>(steps));
  return est;
}

}  // namespace jepq
