#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace d2match {

/// Exact arbitrary-precision rational. All closed-form quantities in this
/// library are carried as Rationals; doubles appear only in reports.
using Rational = mpq_class;
using Integer = mpz_class;

/// 2^e as a Rational, e may be negative. Exponent magnitudes up to a few
/// million are routine (certified series tails); GMP handles them.
inline Rational pow2(long e) {
  Rational r(1);
  if (e >= 0) {
    mpz_ui_pow_ui(r.get_num_mpz_t(), 2u, static_cast<unsigned long>(e));
  } else {
    mpz_ui_pow_ui(r.get_den_mpz_t(), 2u, static_cast<unsigned long>(-e));
  }
  return r;  // canonical either way: the other side stays 1
}

inline Rational rational_from_int(long v) { return Rational(v); }

inline bool is_power_of_two_denominator(const Rational& r) {
  const mpz_class& den = r.get_den();
  return mpz_scan1(den.get_mpz_t(), 0) == mpz_sizeinbase(den.get_mpz_t(), 2) - 1;
}

inline double to_double(const Rational& r) { return r.get_d(); }

inline std::string to_string(const Rational& r) { return r.get_str(); }

/// Exact decimal expansion of r truncated toward zero to `digits` places,
/// e.g. decimal_string(3/2, 3) == "1.500".
std::string decimal_string(const Rational& r, int digits);

}  // namespace d2match
