#pragma once

// Two scalar fields are supported: exact GMP rationals for identity checks and
// IEEE doubles for large parameter sweeps. Every templated routine in jepq is
// explicitly instantiated for exactly these two types.

#include <gmpxx.h>

#include <concepts>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace jepq {

using Rational = mpq_class;

template <class T>
concept Scalar = std::same_as<T, Rational> || std::same_as<T, double>;

template <Scalar S>
inline constexpr bool is_exact_v = std::same_as<S, Rational>;

/// Parses "p/r", a base-10 integer, or a decimal literal ("0.25", "-1.5e-3")
/// into an exact rational. Throws std::invalid_argument on malformed input.
Rational parse_rational(std::string_view text);

/// Canonical "p/r" form ("p" when the denominator is one).
std::string to_string(const Rational& x);

inline double to_double(const Rational& x) { return x.get_d(); }
inline double to_double(double x) { return x; }

template <Scalar S>
S from_rational(const Rational& x) {
  if constexpr (is_exact_v<S>) {
    return x;
  } else {
    return x.get_d();
  }
}

template <Scalar S>
S from_int(long long v) {
  if constexpr (is_exact_v<S>) {
    return Rational(static_cast<long>(v));
  } else {
    return static_cast<double>(v);
  }
}

/// base^exponent for any integer exponent; negative exponents divide.
template <Scalar S>
S ipow(const S& base, long long exponent) {
  if (exponent < 0) {
    if (base == 0) {
      throw std::domain_error("ipow: zero raised to a negative power");
    }
    S inv = S(1) / base;
    return ipow(inv, -exponent);
  }
  S result(1);
  S b = base;
  auto e = static_cast<unsigned long long>(exponent);
  while (e != 0) {
    if (e & 1U) {
      result *= b;
    }
    e >>= 1U;
    if (e != 0) {
      b *= b;
    }
  }
  return result;
}

template <Scalar S>
S abs_value(const S& x) {
  return x < 0 ? S(-x) : x;
}

inline long long binom2(long long k) { return k * (k - 1) / 2; }

}  // namespace jepq
