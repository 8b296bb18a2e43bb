#pragma once

// Exact rational arithmetic backed by GMP.

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

#include "fractalkit/error.hpp"

namespace fractalkit {

using Integer = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(long num, unsigned long den) {
  if (den == 0) throw InvalidArgument("zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline Integer ipow(unsigned long base, unsigned long exp) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, exp);
  return r;
}

/// base^-exp as an exact rational.
inline Rational inv_pow(unsigned long base, unsigned long exp) {
  Rational r(Integer(1), ipow(base, exp));
  r.canonicalize();
  return r;
}

inline Rational rpow(const Rational& x, unsigned long exp) {
  Rational r;
  mpz_pow_ui(r.get_num_mpz_t(), x.get_num_mpz_t(), exp);
  mpz_pow_ui(r.get_den_mpz_t(), x.get_den_mpz_t(), exp);
  r.canonicalize();
  return r;
}

inline Rational floor_rat(const Rational& x) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return Rational(q);
}

/// Natural log of a positive rational, valid for operands far beyond double range.
inline double log_rat(const Rational& x) {
  if (sgn(x) <= 0) throw InvalidArgument("log of non-positive rational");
  auto log_int = [](const Integer& z) {
    long exp = 0;
    double mant = mpz_get_d_2exp(&exp, z.get_mpz_t());
    return std::log(mant) + static_cast<double>(exp) * std::log(2.0);
  };
  return log_int(x.get_num()) - log_int(x.get_den());
}

inline bool is_power_of_two(const Integer& z) {
  return z > 0 && mpz_popcount(z.get_mpz_t()) == 1;
}

/// Accepts "p/q", "n" or a plain decimal such as "0.6" (converted exactly).
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw InvalidArgument("empty rational");
  try {
    if (auto dot = s.find('.'); dot != std::string::npos) {
      if (s.find('/') != std::string::npos) throw InvalidArgument("mixed decimal and fraction");
      bool neg = s[0] == '-';
      std::string intpart = s.substr(neg ? 1 : 0, dot - (neg ? 1 : 0));
      std::string frac = s.substr(dot + 1);
      if (intpart.empty()) intpart = "0";
      for (char c : intpart + frac)
        if (c < '0' || c > '9') throw InvalidArgument("malformed decimal: " + s);
      Integer num(intpart + frac, 10);
      Rational r(num, ipow(10, frac.size()));
      r.canonicalize();
      return neg ? Rational(-r) : r;
    }
    Rational r(s, 10);
    if (r.get_den() == 0) throw InvalidArgument("zero denominator: " + s);
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    throw InvalidArgument("malformed rational: " + s);
  }
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

inline double to_double(const Rational& r) { return r.get_d(); }

}  // namespace fractalkit
