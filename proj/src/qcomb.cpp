#include "jepq/qcomb.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace jepq {

template <Scalar S>
S q_int(long long k, const S& q) {
  if (k < 0) {
    throw std::invalid_argument("q_int: negative k = " + std::to_string(k));
  }
  S sum(0);
  S power(1);
  for (long long i = 0; i < k; ++i) {
    sum += power;
    power *= q;
  }
  return sum;
}

template <Scalar S>
S q_pochhammer(long long n, const S& q) {
  if (n < 0) {
    throw std::invalid_argument("q_pochhammer: negative n");
  }
  S product(1);
  S power(1);
  for (long long k = 1; k <= n; ++k) {
    power *= q;
    product *= S(1) - power;
  }
  return product;
}

template <Scalar S>
EulerPhi<S> euler_phi(const S& q, double eps) {
  if (!(q > 0 && q < 1)) {
    throw std::invalid_argument("euler_phi: q must lie in (0,1)");
  }
  if (!(eps > 0)) {
    throw std::invalid_argument("euler_phi: eps must be positive");
  }
  const double qd = to_double(q);
  // bound(N) = q^{N+1} / ((1-q)(1-q^{N+1})) is decreasing in N.
  long long terms = 0;
  double q_next = qd;  // q^{terms+1}
  double bound = q_next / ((1.0 - qd) * (1.0 - q_next));
  while (bound > eps) {
    ++terms;
    q_next *= qd;
    bound = q_next / ((1.0 - qd) * (1.0 - q_next));
  }
  return {q_pochhammer(terms, q), terms, bound};
}

namespace {

// Bottom-up table for recursions of the form
//   T[a+1,b] = coeff(b) T[a,b-1] + [b]_q T[a,b].
template <Scalar S, class Coeff>
S stirling_table(long long a, long long b, const S& q, Coeff coeff) {
  if (a < 0) {
    throw std::invalid_argument("stirling: negative a");
  }
  if (b < 0 || b > a) {
    return S(0);
  }
  std::vector<S> q_ints(static_cast<std::size_t>(b) + 1);
  std::vector<S> coeffs(static_cast<std::size_t>(b) + 1);
  for (long long j = 0; j <= b; ++j) {
    q_ints[j] = q_int(j, q);
    coeffs[j] = coeff(j);
  }
  // row[j] holds T[i, j] for the current i.
  std::vector<S> row(static_cast<std::size_t>(b) + 1, S(0));
  row[0] = S(1);
  for (long long i = 0; i < a; ++i) {
    const long long top = std::min(i + 1, b);
    for (long long j = top; j >= 0; --j) {
      S next = q_ints[j] * row[j];
      if (j > 0) {
        next += coeffs[j] * row[j - 1];
      }
      row[j] = next;
    }
  }
  return row[b];
}

}  // namespace

template <Scalar S>
S q_stirling(long long a, long long b, const S& q) {
  return stirling_table(a, b, q, [&q](long long j) { return ipow(q, j - 1); });
}

template <Scalar S>
S gould_stirling(long long a, long long b, const S& q) {
  return stirling_table(a, b, q, [](long long) { return S(1); });
}

template <Scalar S>
void check_geometric_params(long long m, long long n, const S& q) {
  if (n < 0 || m < n) {
    throw std::invalid_argument("require 0 <= n <= m (got m=" + std::to_string(m) +
                                ", n=" + std::to_string(n) + ")");
  }
  if (!(q > 0 && q < 1)) {
    throw std::invalid_argument("require 0 < q < 1");
  }
}

template <Scalar S>
S partition_Z(long long m, long long n, const S& q) {
  check_geometric_params(m, n, q);
  const S inv_q = S(1) / q;
  return ipow(q, -n + binom2(m + 1)) * q_stirling(m + 1, m - n + 1, inv_q);
}

template <Scalar S>
S partition_Z_stable(long long m, long long n, const S& q) {
  check_geometric_params(m, n, q);
  // z[j] = Z(i, j) for the current i, j <= n.
  std::vector<S> z(static_cast<std::size_t>(n) + 1, S(0));
  z[0] = S(1);
  for (long long i = 1; i <= m; ++i) {
    for (long long j = std::min(i, n); j >= 1; --j) {
      z[j] = ipow(q, j) * z[j] + ipow(q, j - 1) * q_int(i - j + 1, q) * z[j - 1];
    }
  }
  return z[n];
}

#define JEPQ_INSTANTIATE(S)                                        \
  template S q_int<S>(long long, const S&);                        \
  template S q_pochhammer<S>(long long, const S&);                 \
  template EulerPhi<S> euler_phi<S>(const S&, double);             \
  template S q_stirling<S>(long long, long long, const S&);        \
  template S gould_stirling<S>(long long, long long, const S&);    \
  template S partition_Z<S>(long long, long long, const S&);       \
  template S partition_Z_stable<S>(long long, long long, const S&); \
  template void check_geometric_params<S>(long long, long long, const S&);

JEPQ_INSTANTIATE(Rational)
JEPQ_INSTANTIATE(double)

#undef JEPQ_INSTANTIATE

}  // namespace jepq
