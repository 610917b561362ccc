#include "d2match/eta.hpp"

#include <mutex>
#include <sstream>
#include <vector>

#include "d2match/errors.hpp"

namespace d2match {

namespace {

// Refinement schedule for sign queries. The last level's tail is below
// 2^-(2^25), far under any margin a certificate run can produce once levels
// are capped; hitting the end means something is genuinely wrong.
constexpr int kRefinementTerms[] = {2, 5, 8, 12, 16, 20, 24};

struct PartialCache {
  std::mutex mu;
  // partials[t] = eta_partial(t); grown on demand.
  std::vector<Rational> partials{Rational(1)};

  Rational get(int terms) {
    std::lock_guard<std::mutex> lock(mu);
    while (static_cast<int>(partials.size()) <= terms) {
      const int i = static_cast<int>(partials.size());
      partials.push_back(partials.back() - eta_series_term(i));
    }
    return partials[static_cast<std::size_t>(terms)];
  }
};

PartialCache& partial_cache() {
  static PartialCache cache;
  return cache;
}

}  // namespace

Rational eta_series_term(int i) {
  if (i < 1) throw Error("eta series terms start at i = 1");
  // term(26) alone would occupy ~8 MB; nothing in the library needs the
  // series past the refinement cap's tail term.
  if (i > 25) throw Error("eta series term index out of supported range");
  const long exponent = (long{1} << i) + i - 1;
  return pow2(-exponent);
}

Rational eta_partial(int terms) {
  if (terms < 0) throw Error("negative term count");
  return partial_cache().get(terms);
}

Rational eta_tail_bound(int terms) { return 2 * eta_series_term(terms + 1); }

EtaConstant eta(int min_terms) {
  if (min_terms < 1) throw Error("eta needs at least one series term");
  if (min_terms > 24) throw Error("eta truncations beyond 24 terms are not supported");
  EtaConstant c;
  c.terms_used = min_terms;
  c.value = eta_partial(min_terms);
  c.tail_bound = eta_tail_bound(min_terms);
  return c;
}

double EtaLinear::to_double() const {
  static const double eta_approx = d2match::to_double(eta_partial(8));
  return d2match::to_double(a) + d2match::to_double(b) * eta_approx;
}

std::string EtaLinear::to_string() const {
  if (b == 0) return d2match::to_string(a);
  std::ostringstream os;
  const Rational abs_b = b < 0 ? Rational(-b) : b;
  const std::string bs = abs_b == 1 ? "eta" : d2match::to_string(abs_b) + "*eta";
  if (a == 0) {
    os << (b < 0 ? "-" : "") << bs;
  } else {
    os << d2match::to_string(a) << (b < 0 ? " - " : " + ") << bs;
  }
  return os.str();
}

EtaLinear operator+(const EtaLinear& x, const EtaLinear& y) {
  return EtaLinear(x.a + y.a, x.b + y.b);
}

EtaLinear operator-(const EtaLinear& x, const EtaLinear& y) {
  return EtaLinear(x.a - y.a, x.b - y.b);
}

EtaLinear operator-(const EtaLinear& x) { return EtaLinear(-x.a, -x.b); }

EtaLinear operator*(const Rational& c, const EtaLinear& x) {
  return EtaLinear(c * x.a, c * x.b);
}

bool operator==(const EtaLinear& x, const EtaLinear& y) { return x.a == y.a && x.b == y.b; }

int sign(const EtaLinear& x) {
  const int sa = sgn(x.a);
  const int sb = sgn(x.b);
  if (sb == 0) return sa;
  if (sa == 0 || sa == sb) return sb;  // eta > 0, so no cancellation possible

  // Opposite-sign parts: bracket a + b*eta with the certified enclosure
  // eta in [partial - tail, partial] and refine until the sign is decided.
  // For b != 0 the value is never exactly zero: eta's binary expansion has
  // ones exactly at positions 2^i + i - 1, which is aperiodic, so eta is
  // irrational and a + b*eta = 0 has no rational solution.
  for (const int terms : kRefinementTerms) {
    const Rational hi = eta_partial(terms);
    const Rational lo = hi - eta_tail_bound(terms);
    const Rational at_lo = x.a + x.b * (x.b > 0 ? lo : hi);
    const Rational at_hi = x.a + x.b * (x.b > 0 ? hi : lo);
    if (sgn(at_lo) > 0) return 1;
    if (sgn(at_hi) < 0) return -1;
  }
  throw UndecidableComparison("sign of " + x.to_string() +
                              " undecided at maximum eta refinement");
}

EtaLinear eta_min(const EtaLinear& x, const EtaLinear& y) {
  if (x == y) return x;
  return sign(x - y) < 0 ? x : y;
}

}  // namespace d2match
