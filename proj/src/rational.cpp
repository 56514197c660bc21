#include "orbergman/rational.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace orbergman {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char ch : s)
    if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
  return true;
}

Integer parse_integer(std::string_view s) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw std::invalid_argument("malformed integer");
  Integer value(std::string(s), 10);
  return negative ? Integer(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("empty rational literal");

  try {
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
      Integer num = parse_integer(text.substr(0, slash));
      Integer den = parse_integer(text.substr(slash + 1));
      if (den == 0) throw std::invalid_argument("zero denominator");
      Rational r(num, den);
      r.canonicalize();
      return r;
    }

    // Decimal literal: [sign] digits [. digits] [e [sign] digits]
    std::string_view mantissa = text;
    long exponent = 0;
    if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
      mantissa = text.substr(0, e);
      Integer ex = parse_integer(text.substr(e + 1));
      if (!ex.fits_slong_p() || abs(ex) > 100000) throw std::invalid_argument("exponent out of range");
      exponent = ex.get_si();
    }
    bool negative = false;
    if (!mantissa.empty() && (mantissa.front() == '-' || mantissa.front() == '+')) {
      negative = mantissa.front() == '-';
      mantissa.remove_prefix(1);
    }
    std::string digits;
    if (auto dot = mantissa.find('.'); dot != std::string_view::npos) {
      std::string_view whole = mantissa.substr(0, dot);
      std::string_view frac = mantissa.substr(dot + 1);
      if ((whole.empty() && frac.empty()) || (!whole.empty() && !all_digits(whole)) ||
          (!frac.empty() && !all_digits(frac)))
        throw std::invalid_argument("malformed decimal");
      digits = std::string(whole) + std::string(frac);
      exponent -= static_cast<long>(frac.size());
    } else {
      if (!all_digits(mantissa)) throw std::invalid_argument("malformed decimal");
      digits = std::string(mantissa);
    }
    if (digits.empty()) digits = "0";
    Integer num(digits, 10);
    if (negative) num = -num;
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
    Rational r = exponent >= 0 ? Rational(num * scale) : Rational(num, scale);
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("cannot parse rational '" + std::string(text) + "'");
  }
}

std::string to_string(const Rational& value) {
  Rational v = value;
  v.canonicalize();
  if (v.get_den() == 1) return v.get_num().get_str();
  return v.get_num().get_str() + "/" + v.get_den().get_str();
}

double to_double(const Rational& value) {
  // Split mantissa/exponent so quotients of huge integers neither overflow nor
  // lose range (mpq_get_d would do the same but truncates toward zero).
  const Integer& num = value.get_num();
  const Integer& den = value.get_den();
  long num_exp = 0, den_exp = 0;
  double n = mpz_get_d_2exp(&num_exp, num.get_mpz_t());
  double d = mpz_get_d_2exp(&den_exp, den.get_mpz_t());
  if (n == 0.0) return 0.0;
  long shift = num_exp - den_exp;
  return std::ldexp(n / d, static_cast<int>(std::clamp(shift, -4000L, 4000L)));
}

std::string format_decimal(double value, int digits) {
  if (value == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, value);
  return buf;
}

Integer factorial(long n) {
  if (n < 0) throw std::invalid_argument("factorial of negative number");
  Integer out;
  mpz_fac_ui(out.get_mpz_t(), static_cast<unsigned long>(n));
  return out;
}

Integer binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  Integer out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return out;
}

Rational power(const Rational& base, unsigned long exponent) {
  Integer num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), exponent);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), exponent);
  Rational out(num, den);
  out.canonicalize();
  return out;
}

long floor_div(long numerator, long divisor) {
  long q = numerator / divisor;
  if ((numerator % divisor != 0) && ((numerator < 0) != (divisor < 0))) --q;
  return q;
}

long mod_floor(long value, long modulus) {
  long r = value % modulus;
  return r < 0 ? r + modulus : r;
}

}  // namespace orbergman
