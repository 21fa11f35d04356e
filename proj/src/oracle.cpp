#include "jepq/oracle.hpp"

#include <charconv>
#include <cstdlib>
#include <cstring>
#include <string>

#include "jepq/qcomb.hpp"

namespace jepq {

std::size_t state_cap() {
  const char* env = std::getenv("JEPQ_STATE_CAP");
  if (env == nullptr) {
    return kDefaultStateCap;
  }
  std::size_t value = 0;
  const char* end = env + std::strlen(env);
  auto [ptr, ec] = std::from_chars(env, end, value);
  if (ec != std::errc() || ptr != end || value == 0) {
    return kDefaultStateCap;
  }
  return value;
}

namespace {

template <Scalar S, class Key>
void fill_row(TransitionMatrix<S, Key>& matrix, std::size_t i, const DistVector<S, Key>& row) {
  auto& out = matrix.rows[i];
  out.reserve(row.size());
  for (std::size_t k = 0; k < row.size(); ++k) {
    out.emplace_back(matrix.index_of(row.support[k]), row.prob[k]);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
}

void check_cap(std::size_t count, std::size_t cap) {
  if (count > cap) {
    throw StateCapExceeded("state space of " + std::to_string(count) +
                           " states exceeds the cap of " + std::to_string(cap) +
                           " (set JEPQ_STATE_CAP to raise it)");
  }
}

}  // namespace

template <Scalar S>
TransitionMatrix<S, JugglerState> build_transition_matrix(const ThrowModel<S>& model,
                                                          std::size_t cap) {
  if (!model.bounded()) {
    throw std::invalid_argument("build_transition_matrix: unbounded model has no finite matrix");
  }
  check_cap(state_count(model.m, model.n), cap);
  TransitionMatrix<S, JugglerState> matrix;
  matrix.states = enumerate_states(model.m, model.n);
  matrix.rows.resize(matrix.size());
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    fill_row(matrix, i, step_kernel_row(matrix.states[i], model));
  }
  return matrix;
}

template <Scalar S>
TransitionMatrix<S, RookConfig> build_extended_matrix(int m, int n, const S& q, std::size_t cap) {
  check_geometric_params<S>(m, n, q);
  // |C_n(S_{m+1})| is the classical Stirling number S(m+1, m+1-n).
  const double count = gould_stirling<double>(m + 1, m - n + 1, 1.0);
  if (count > static_cast<double>(cap)) {
    check_cap(static_cast<std::size_t>(std::min(count, 1e18)), cap);
  }
  TransitionMatrix<S, RookConfig> matrix;
  matrix.states = enumerate_configs(m, n);
  matrix.rows.resize(matrix.size());
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    fill_row(matrix, i, extended_kernel_row(matrix.states[i], q));
  }
  return matrix;
}

template <Scalar S, class Key>
std::vector<S> apply_left(const std::vector<S>& pi, const TransitionMatrix<S, Key>& matrix) {
  if (pi.size() != matrix.size()) {
    throw std::invalid_argument("apply_left: dimension mismatch");
  }
  std::vector<S> out(matrix.size(), S(0));
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    if (pi[i] == 0) {
      continue;
    }
    for (const auto& [j, p] : matrix.rows[i]) {
      out[j] += pi[i] * p;
    }
  }
  return out;
}

template <Scalar S, class Key>
S stationarity_residual(const std::vector<S>& pi, const TransitionMatrix<S, Key>& matrix) {
  const auto next = apply_left(pi, matrix);
  S sum(0);
  for (std::size_t i = 0; i < pi.size(); ++i) {
    sum += abs_value<S>(next[i] - pi[i]);
  }
  return sum;
}

namespace {

// Solves A x = e_last where A = (P^T - I) with its last row replaced by ones.
// Dense storage, but each elimination step only touches the nonzero columns
// of the pivot row and the rows with a nonzero in the pivot column.
std::vector<Rational> exact_stationary(const std::vector<std::vector<std::pair<std::size_t, Rational>>>& rows) {
  const std::size_t n = rows.size();
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i) {
    a[i][i] = -1;
  }
  for (std::size_t j = 0; j < n; ++j) {
    for (const auto& [i, p] : rows[j]) {
      a[i][j] += p;
    }
  }
  std::vector<Rational> b(n);
  for (std::size_t j = 0; j < n; ++j) {
    a[n - 1][j] = 1;
  }
  b[n - 1] = 1;

  std::vector<std::size_t> nonzero;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = n;
    for (std::size_t i = k; i < n; ++i) {
      if (sgn(a[i][k]) != 0) {
        pivot = i;
        break;
      }
    }
    if (pivot == n) {
      throw SolveError("solve_stationary: singular balance system (chain not irreducible?)");
    }
    if (pivot != k) {
      std::swap(a[pivot], a[k]);
      std::swap(b[pivot], b[k]);
    }
    nonzero.clear();
    for (std::size_t j = k + 1; j < n; ++j) {
      if (sgn(a[k][j]) != 0) {
        nonzero.push_back(j);
      }
    }
    const Rational inv_pivot = 1 / a[k][k];
    for (std::size_t i = k + 1; i < n; ++i) {
      if (sgn(a[i][k]) == 0) {
        continue;
      }
      const Rational factor = a[i][k] * inv_pivot;
      for (std::size_t j : nonzero) {
        a[i][j] -= factor * a[k][j];
      }
      a[i][k] = 0;
      if (sgn(b[k]) != 0) {
        b[i] -= factor * b[k];
      }
    }
  }
  std::vector<Rational> x(n);
  for (std::size_t k = n; k-- > 0;) {
    Rational acc = b[k];
    for (std::size_t j = k + 1; j < n; ++j) {
      if (sgn(a[k][j]) != 0) {
        acc -= a[k][j] * x[j];
      }
    }
    x[k] = acc / a[k][k];
  }
  return x;
}

template <class Key>
std::vector<double> power_iteration(const TransitionMatrix<double, Key>& matrix) {
  constexpr double kTolerance = 1e-14;
  constexpr long kMaxSweeps = 1000000;
  const std::size_t n = matrix.size();
  std::vector<double> pi(n, 1.0 / static_cast<double>(n));
  for (long sweep = 0; sweep < kMaxSweeps; ++sweep) {
    auto next = apply_left(pi, matrix);
    double total = 0.0;
    for (double v : next) {
      total += v;
    }
    double residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      next[i] /= total;
      residual += std::abs(next[i] - pi[i]);
    }
    pi = std::move(next);
    if (residual < kTolerance) {
      return pi;
    }
  }
  throw SolveError("solve_stationary: power iteration did not converge");
}

}  // namespace

template <Scalar S, class Key>
DistVector<S, Key> solve_stationary(const TransitionMatrix<S, Key>& matrix) {
  if (matrix.size() == 0) {
    throw std::invalid_argument("solve_stationary: empty state space");
  }
  DistVector<S, Key> d;
  d.support = matrix.states;
  if constexpr (is_exact_v<S>) {
    d.prob = exact_stationary(matrix.rows);
  } else {
    d.prob = power_iteration(matrix);
  }
  return d;
}

template <Scalar S>
ConvergenceRow<S> tv_to_unbounded(int m, int n, const S& q, std::size_t cap) {
  check_geometric_params<S>(m, n, q);
  check_cap(state_count(m, n), cap);
  const auto bounded = ThrowModel<S>::bounded_geometric(m, n, q);
  const auto unbounded = ThrowModel<S>::unbounded_geometric(n, q);
  const auto pi_m = stationary_distribution(bounded);
  S diff(0);
  S covered(0);
  for (std::size_t i = 0; i < pi_m.size(); ++i) {
    const S p_inf = stationary_prob(pi_m.support[i], unbounded);
    covered += p_inf;
    diff += abs_value<S>(pi_m.prob[i] - p_inf);
  }
  ConvergenceRow<S> row;
  row.m = m;
  row.n = n;
  row.q = q;
  row.tv = (diff + (S(1) - covered)) / 2;
  const S q_ell = ipow(q, m - n + 1);
  row.bound_exact = coupling_bound<S>(m, S(0), q_ell);
  row.bound_simple = S(m) * q_ell;
  return row;
}

template <Scalar S>
S coupling_bound(long long t, const S& d_init, const S& d_throw) {
  if (t < 0) {
    throw std::invalid_argument("coupling_bound: negative t");
  }
  for (const S* d : {&d_init, &d_throw}) {
    if (*d < 0 || *d > 1) {
      throw std::invalid_argument("coupling_bound: distances must lie in [0,1]");
    }
  }
  return S(1) - (S(1) - d_init) * ipow(S(S(1) - d_throw), t);
}

namespace {

template <Scalar S>
LimitRow<S> limit_row(int m, int n, const S& q, const S& target, const S& extra_bound) {
  check_geometric_params<S>(m, n, q);
  LimitRow<S> row;
  row.m = m;
  row.n = n;
  row.literal = ipow(q_int(m - n + 1, q), n) / normalizing_Z<S>(m, n, q);
  row.corrected = row.literal * ipow(q, binom2(n));
  row.target = target;
  row.corrected_error = abs_value<S>(row.corrected - target);
  row.literal_error = abs_value<S>(row.literal - target);
  row.bound = S(m) * ipow(q, m - n + 1) + extra_bound;
  return row;
}

}  // namespace

template <Scalar S>
std::vector<LimitRow<S>> limit_tables(int n, const S& q, const std::vector<int>& m_values) {
  const S target = q_pochhammer(n, q);
  std::vector<LimitRow<S>> rows;
  rows.reserve(m_values.size());
  for (int m : m_values) {
    rows.push_back(limit_row(m, n, q, target, S(0)));
  }
  return rows;
}

template <Scalar S>
std::vector<LimitRow<S>> limit_tables_growing(const S& q, const std::vector<int>& n_values,
                                              double phi_eps) {
  const auto phi = euler_phi(q, phi_eps);
  std::vector<LimitRow<S>> rows;
  rows.reserve(n_values.size());
  for (int n : n_values) {
    // |corrected - phi| <= |corrected - (q;q)_n| + |(q;q)_n - phi|
    const S gap = abs_value<S>(S(q_pochhammer(n, q) - phi.value));
    rows.push_back(limit_row(2 * n, n, q, phi.value, gap));
  }
  return rows;
}

#define JEPQ_INSTANTIATE_KEY(S, K)                                                           \
  template DistVector<S, K> solve_stationary<S, K>(const TransitionMatrix<S, K>&);           \
  template std::vector<S> apply_left<S, K>(const std::vector<S>&, const TransitionMatrix<S, K>&); \
  template S stationarity_residual<S, K>(const std::vector<S>&, const TransitionMatrix<S, K>&);

#define JEPQ_INSTANTIATE(S)                                                                    \
  template TransitionMatrix<S, JugglerState> build_transition_matrix<S>(const ThrowModel<S>&, \
                                                                        std::size_t);          \
  template TransitionMatrix<S, RookConfig> build_extended_matrix<S>(int, int, const S&,        \
                                                                    std::size_t);              \
  template ConvergenceRow<S> tv_to_unbounded<S>(int, int, const S&, std::size_t);              \
  template S coupling_bound<S>(long long, const S&, const S&);                                 \
  template std::vector<LimitRow<S>> limit_tables<S>(int, const S&, const std::vector<int>&);   \
  template std::vector<LimitRow<S>> limit_tables_growing<S>(const S&, const std::vector<int>&, \
                                                            double);                           \
  JEPQ_INSTANTIATE_KEY(S, JugglerState)                                                        \
  JEPQ_INSTANTIATE_KEY(S, RookConfig)

JEPQ_INSTANTIATE(Rational)
JEPQ_INSTANTIATE(double)

#undef JEPQ_INSTANTIATE
#undef JEPQ_INSTANTIATE_KEY

}  // namespace jepq
