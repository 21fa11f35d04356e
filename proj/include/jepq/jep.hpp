#pragma once

// Juggler's exclusion process: throw laws, one-step kernels and the
// closed-form stationary laws of the three supported throw models.
//
// Dynamics on a height set B: if 0 is not in B every particle falls by one;
// otherwise the particle at 0 is rethrown and B becomes X* u {eta} with
// X* = (B \ {0}) - 1 and eta = theta_{X*}(xi) for a throw index xi.

#include <functional>
#include <string>

#include "jepq/dist.hpp"
#include "jepq/scalar.hpp"
#include "jepq/state.hpp"

namespace jepq {

enum class ModelKind { BoundedGeometric, UnboundedGeometric, BoundedUniform };

std::string to_string(ModelKind kind);
/// Accepts the CLI spellings "bounded-geometric", "unbounded-geometric", "bounded-uniform".
ModelKind parse_model_kind(std::string_view name);

template <Scalar S>
struct ThrowModel {
  ModelKind kind = ModelKind::BoundedGeometric;
  int m = 0;  // admissible heights {0..m-1}; unused for UnboundedGeometric
  int n = 0;  // particle count
  S q{0};     // unused for BoundedUniform

  static ThrowModel bounded_geometric(int m, int n, S q);
  static ThrowModel unbounded_geometric(int n, S q);
  static ThrowModel bounded_uniform(int m, int n);

  [[nodiscard]] bool bounded() const { return kind != ModelKind::UnboundedGeometric; }
  /// Number of vacant throw heights, m - n + 1 (bounded models only).
  [[nodiscard]] int ell() const { return m - n + 1; }

  /// Throws std::invalid_argument if B is not a state of this model.
  void validate_state(const JugglerState& b) const;
  [[nodiscard]] bool admits(const JugglerState& b) const;
};

/// Rational parameters converted to the requested scalar field.
template <Scalar S>
ThrowModel<S> convert_model(const ThrowModel<Rational>& model);

/// P(xi = x) = (1-q) q^x / (1 - q^ell) on {0..ell-1}.
template <Scalar S>
DistVector<S, Height> truncated_geometric_pmf(int ell, const S& q);

/// P(xi = x) = (1-q) q^x materialized on {0..ceiling-1}; tail = q^ceiling.
template <Scalar S>
DistVector<S, Height> geometric_pmf(const S& q, Height ceiling);

/// h^{A}(y): probability that a throw lands at y when the other particles
/// sit at A = X*. Returns 0 when y is not a legal target.
template <Scalar S>
S throw_prob(const JugglerState& after_shift, Height target, const ThrowModel<S>& model);

/// Law of eta given X*. For the unbounded model targets at or above
/// `ceiling` are folded into the exact tail mass.
template <Scalar S>
DistVector<S, Height> throw_pmf(const JugglerState& after_shift, const ThrowModel<S>& model,
                                Height ceiling = 64);

/// One row of the transition kernel. Unbounded rows use the same ceiling
/// convention as throw_pmf.
template <Scalar S>
DistVector<S, JugglerState> step_kernel_row(const JugglerState& b, const ThrowModel<S>& model,
                                            Height ceiling = 64);

/// Unnormalized stationary weight of B:
///   bounded geometric:   prod_{x in B} [1 + v_B(x)]_q q^x
///   bounded uniform:     prod_{x in B} (1 + v_B(x))
///   unbounded geometric: prod_{x in B} q^x
template <Scalar S>
S stationary_weight(const JugglerState& b, const ThrowModel<S>& model);

/// Normalized stationary probability. Bounded geometric divides by
/// partition_Z, uniform by the enumerated weight sum, and unbounded uses the
/// prefactor (q;q)_n / q^{binom(n,2)}.
template <Scalar S>
S stationary_prob(const JugglerState& b, const ThrowModel<S>& model);

/// Stationary law over every state of a bounded model, in canonical order.
template <Scalar S>
DistVector<S, JugglerState> stationary_distribution(const ThrowModel<S>& model);

template <Scalar S>
struct ClosedFormStats {
  S ground;          // pi({0..n-1})
  S top;             // pi({m-n..m-1})
  S throw_fraction;  // pi(0 in B) = q^{n-1} [m-n+1]_q Z(m-1,n-1) / Z(m,n)
  /// The same ratio without the q^{n-1} factor, as commonly printed. It
  /// agrees with throw_fraction only for n = 1 and can exceed 1.
  S throw_fraction_paper;
};

template <Scalar S>
ClosedFormStats<S> closed_form_stats(int m, int n, const S& q);

template <Scalar S>
using StateFunction = std::function<S(const JugglerState&)>;

/// pi(B) - pi(B+1) - sum_k pi({0} u (B\{i_k} + 1)) h^{B\{i_k}}(i_k).
/// Predecessors that are not states of the model contribute nothing.
template <Scalar S>
S balance_residual(const JugglerState& b, const StateFunction<S>& pi, const ThrowModel<S>& model);

}  // namespace jepq
