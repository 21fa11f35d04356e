#pragma once

// q-analogue arithmetic evaluated at a concrete scalar q.

#include "jepq/scalar.hpp"

namespace jepq {

/// [k]_q = 1 + q + ... + q^{k-1}. Sum form, so [k]_1 = k and [0]_q = 0.
template <Scalar S>
S q_int(long long k, const S& q);

/// (q;q)_n = (1-q)(1-q^2)...(1-q^n); (q;q)_0 = 1.
template <Scalar S>
S q_pochhammer(long long n, const S& q);

template <Scalar S>
struct EulerPhi {
  S value;            // (q;q)_terms
  long long terms;    // truncation index N
  double tail_bound;  // 0 <= value - phi(q) <= tail_bound
};

/// Euler function phi(q) = prod_{k>=1} (1-q^k), truncated at the first N for
/// which q^{N+1} / ((1-q)(1-q^{N+1})) <= eps. That quantity bounds
/// -log prod_{k>N}(1-q^k), which in turn bounds (q;q)_N - phi(q).
template <Scalar S>
EulerPhi<S> euler_phi(const S& q, double eps);

/// q-Stirling numbers of the second kind:
///   S_q[a+1,b] = q^{b-1} S_q[a,b-1] + [b]_q S_q[a,b],  S_q[0,0] = 1,
/// and zero outside 0 <= b <= a. Any q (including q > 1) is accepted.
template <Scalar S>
S q_stirling(long long a, long long b, const S& q);

/// Gould q-Stirling numbers: G_q[a+1,b] = G_q[a,b-1] + [b]_q G_q[a,b].
template <Scalar S>
S gould_stirling(long long a, long long b, const S& q);

/// Z(m,n,q) = q^{-n + binom(m+1,2)} S_{1/q}[m+1, m-n+1].
///
/// Note: the normalizing denominator in the derivation of the product form is
/// sometimes printed with exponent n + binom(m+1,2); only the -n sign matches
/// the brute-force weight sums (e.g. Z(2,1,q) = 1 + 2q).
template <Scalar S>
S partition_Z(long long m, long long n, const S& q);

/// Same value as partition_Z, computed by the positive recursion
///   Z(m,n) = q^n Z(m-1,n) + q^{n-1} [m-n+1]_q Z(m-1,n-1),  Z(m,0) = 1,
/// which splits states on whether height 0 is occupied. Every term is
/// nonnegative, so it stays finite in double precision where the closed form
/// under/overflows (roughly m > 40 at q = 1/2).
template <Scalar S>
S partition_Z_stable(long long m, long long n, const S& q);

/// partition_Z for exact scalars, partition_Z_stable for doubles.
template <Scalar S>
S normalizing_Z(long long m, long long n, const S& q) {
  if constexpr (is_exact_v<S>) {
    return partition_Z(m, n, q);
  } else {
    return partition_Z_stable(m, n, q);
  }
}

/// Throws std::invalid_argument unless 0 <= n <= m and 0 < q < 1.
template <Scalar S>
void check_geometric_params(long long m, long long n, const S& q);

}  // namespace jepq
