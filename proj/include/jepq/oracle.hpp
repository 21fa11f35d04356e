#pragma once

// Brute-force machinery used to check the closed forms: assembled transition
// matrices, stationary solves, total variation and the coupling bounds for
// the bounded-vs-unbounded comparison.

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "jepq/dist.hpp"
#include "jepq/jep.hpp"
#include "jepq/rook.hpp"
#include "jepq/scalar.hpp"

namespace jepq {

inline constexpr std::size_t kDefaultStateCap = 100000;

/// kDefaultStateCap unless JEPQ_STATE_CAP holds a positive integer.
std::size_t state_cap();

class StateCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Row-stochastic matrix over an ordered state list; rows are sparse with
/// ascending column indices.
template <Scalar S, class Key>
struct TransitionMatrix {
  std::vector<Key> states;
  std::vector<std::vector<std::pair<std::size_t, S>>> rows;

  [[nodiscard]] std::size_t size() const { return states.size(); }

  [[nodiscard]] std::size_t index_of(const Key& key) const {
    auto it = std::lower_bound(states.begin(), states.end(), key);
    if (it == states.end() || *it != key) {
      throw std::out_of_range("TransitionMatrix: unknown state");
    }
    return static_cast<std::size_t>(it - states.begin());
  }

  [[nodiscard]] S row_sum(std::size_t i) const {
    S sum(0);
    for (const auto& [j, p] : rows[i]) {
      sum += p;
    }
    return sum;
  }
};

/// Full kernel of a bounded model over enumerate_states(m, n).
template <Scalar S>
TransitionMatrix<S, JugglerState> build_transition_matrix(const ThrowModel<S>& model,
                                                          std::size_t cap = state_cap());

/// Full kernel of the rook-placement chain over enumerate_configs(m, n).
template <Scalar S>
TransitionMatrix<S, RookConfig> build_extended_matrix(int m, int n, const S& q,
                                                      std::size_t cap = state_cap());

class SolveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unique pi with pi P = pi and sum(pi) = 1. Exact scalars use Gaussian
/// elimination on (P^T - I) with one balance row replaced by the
/// normalization row; doubles use power iteration from the uniform vector
/// until the l1 residual drops below 1e-14 (at most 10^6 sweeps).
template <Scalar S, class Key>
DistVector<S, Key> solve_stationary(const TransitionMatrix<S, Key>& matrix);

/// pi P for a vector aligned with matrix.states.
template <Scalar S, class Key>
std::vector<S> apply_left(const std::vector<S>& pi, const TransitionMatrix<S, Key>& matrix);

/// l1 norm of pi P - pi.
template <Scalar S, class Key>
S stationarity_residual(const std::vector<S>& pi, const TransitionMatrix<S, Key>& matrix);

template <Scalar S>
struct ConvergenceRow {
  int m = 0;
  int n = 0;
  S q{0};
  S tv{0};            // ||pi_{m,n,q} - pi_{inf,n,q}||
  S bound_exact{0};   // 1 - (1 - q^ell)^m
  S bound_simple{0};  // m q^ell
};

/// Exact distance between the bounded law and the unbounded law. The
/// unbounded mass outside {0..m-1} is added as 1 minus the enumerated mass.
template <Scalar S>
ConvergenceRow<S> tv_to_unbounded(int m, int n, const S& q, std::size_t cap = state_cap());

/// 1 - (1 - d_init)(1 - d_throw)^t
template <Scalar S>
S coupling_bound(long long t, const S& d_init, const S& d_throw);

template <Scalar S>
struct LimitRow {
  int m = 0;
  int n = 0;
  S literal{0};    // Z^{-1} [m-n+1]_q^n
  S corrected{0};  // literal * q^{binom(n,2)}, the ground-state probability
  S target{0};     // (q;q)_n, or phi(q) for the growing-n table
  S corrected_error{0};
  S literal_error{0};
  /// m q^{m-n+1}; growing-n rows add |(q;q)_n - target|.
  S bound{0};
};

/// Fixed n, one row per m in m_values.
template <Scalar S>
std::vector<LimitRow<S>> limit_tables(int n, const S& q, const std::vector<int>& m_values);

/// n grows with m = 2n, compared against the Euler function.
template <Scalar S>
std::vector<LimitRow<S>> limit_tables_growing(const S& q, const std::vector<int>& n_values,
                                              double phi_eps = 1e-15);

}  // namespace jepq
