#include "jepq/scalar.hpp"

#include <cctype>

namespace jepq {
namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) {
    return false;
  }
  for (char c : s) {
    if (std::isdigit(static_cast<unsigned char>(c)) == 0) {
      return false;
    }
  }
  return true;
}

mpz_class parse_integer(std::string_view s) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) {
    throw std::invalid_argument("not an integer: '" + std::string(s) + "'");
  }
  mpz_class v(std::string(s), 10);
  return negative ? mpz_class(-v) : v;
}

Rational parse_decimal(std::string_view s) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long long exp10 = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    mpz_class e_val = parse_integer(s.substr(e + 1));
    if (!e_val.fits_slong_p() || abs(e_val) > 4096) {
      throw std::invalid_argument("decimal exponent out of range");
    }
    exp10 = e_val.get_si();
    s = s.substr(0, e);
  }
  std::string digits;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view whole = s.substr(0, dot);
    std::string_view frac = s.substr(dot + 1);
    if ((whole.empty() && frac.empty()) || (!whole.empty() && !all_digits(whole)) ||
        (!frac.empty() && !all_digits(frac))) {
      throw std::invalid_argument("malformed decimal");
    }
    digits = std::string(whole) + std::string(frac);
    exp10 -= static_cast<long long>(frac.size());
  } else {
    if (!all_digits(s)) {
      throw std::invalid_argument("malformed decimal");
    }
    digits = std::string(s);
  }
  Rational r(mpz_class(digits, 10));
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
  if (exp10 < 0) {
    r /= scale;
  } else {
    r *= scale;
  }
  r.canonicalize();
  return negative ? Rational(-r) : r;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())) != 0) {
    text.remove_prefix(1);
  }
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())) != 0) {
    text.remove_suffix(1);
  }
  if (text.empty()) {
    throw std::invalid_argument("empty rational literal");
  }
  try {
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
      mpz_class num = parse_integer(text.substr(0, slash));
      mpz_class den = parse_integer(text.substr(slash + 1));
      if (den == 0) {
        throw std::invalid_argument("zero denominator");
      }
      Rational r(num, den);
      r.canonicalize();
      return r;
    }
    return parse_decimal(text);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument("cannot parse rational '" + std::string(text) + "': " + e.what());
  }
}

std::string to_string(const Rational& x) { return x.get_str(10); }

}  // namespace jepq
