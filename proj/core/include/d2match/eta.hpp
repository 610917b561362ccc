#pragma once

#include <cstdint>
#include <string>

#include "d2match/rational.hpp"

namespace d2match {

// eta = 1 - sum_{i>=1} 2^-(2^i + i - 1) ~= 0.717772, the optimal competitive
// ratio for randomized integral matching when online degrees are at most 2.

/// i-th series term 2^-(2^i + i - 1), i >= 1.
Rational eta_series_term(int i);

/// Partial value 1 - sum_{i=1..terms}; an upper bound on eta.
Rational eta_partial(int terms);

/// Rigorous tail bound: eta_partial(terms) - eta < eta_tail_bound(terms).
/// Equal to twice the next term (the series decays faster than 2x).
Rational eta_tail_bound(int terms);

/// Certified truncation of eta.
struct EtaConstant {
  Rational value;       // partial sum; eta in (value - tail_bound, value]
  Rational tail_bound;
  int terms_used = 0;

  double to_double() const { return d2match::to_double(value); }
};

/// Partial sum with at least `min_terms` terms and its certified tail.
EtaConstant eta(int min_terms);

/// Exact element of the algebra Q + Q*eta. Every table entry of the integral
/// analysis lives here (e.g. 11/4 - 3*eta); arithmetic is exact in the
/// coefficient pair and only sign queries consult the eta enclosure.
struct EtaLinear {
  Rational a;  // rational part
  Rational b;  // coefficient of eta

  EtaLinear() : a(0), b(0) {}
  EtaLinear(Rational a_, Rational b_) : a(std::move(a_)), b(std::move(b_)) {}

  static EtaLinear rational(Rational r) { return EtaLinear(std::move(r), Rational(0)); }
  static EtaLinear eta_times(Rational c) { return EtaLinear(Rational(0), std::move(c)); }
  static EtaLinear one_eta() { return EtaLinear(Rational(0), Rational(1)); }

  bool is_rational() const { return b == 0; }
  double to_double() const;
  std::string to_string() const;  // e.g. "11/4 - 3*eta"
};

EtaLinear operator+(const EtaLinear& x, const EtaLinear& y);
EtaLinear operator-(const EtaLinear& x, const EtaLinear& y);
EtaLinear operator-(const EtaLinear& x);
EtaLinear operator*(const Rational& c, const EtaLinear& x);
bool operator==(const EtaLinear& x, const EtaLinear& y);  // coefficient equality

/// Exact sign of a + b*eta. For b != 0 the value is never zero (eta's binary
/// expansion has ones exactly at positions 2^i + i - 1, so eta is
/// irrational); the certified enclosure is refined adaptively from width
/// < 2^-60 until the sign is decided, up to a hard refinement cap beyond
/// which UndecidableComparison is thrown. With the level guard in place,
/// every comparison a certificate run can produce is decidable well below
/// the cap.
int sign(const EtaLinear& x);

inline bool is_negative(const EtaLinear& x) { return sign(x) < 0; }
inline bool is_positive(const EtaLinear& x) { return sign(x) > 0; }
inline bool geq(const EtaLinear& x, const EtaLinear& y) { return sign(x - y) >= 0; }
inline bool leq(const EtaLinear& x, const EtaLinear& y) { return sign(x - y) <= 0; }

/// min under the exact order (ties resolved by coefficient equality).
EtaLinear eta_min(const EtaLinear& x, const EtaLinear& y);

}  // namespace d2match
