#include "d2match/reduced_oracle.hpp"

#include <sstream>
#include <vector>

#include "d2match/errors.hpp"

namespace d2match {

namespace {

// Local state of one copy: bitmask of its matched offline vertices. The
// shared vertex lstar enters only through the alive/dead mode split; all
// per-copy DPs below are over these 2^n0 masks.

int popcount(std::uint32_t v) { return __builtin_popcount(v); }

// Dead-mode transition (lstar gone): plain Half-Half on the copy.
// Alive-mode no-consume transition differs only at degree-1 arrivals, where
// the surviving branch keeps half the mass (the other half matched lstar).
void add_degree2_transitions(std::vector<Rational>& next, std::uint32_t mask, const Rational& p,
                             const Arrival& a) {
  const std::uint32_t b1 = std::uint32_t{1} << a.first;
  const std::uint32_t b2 = std::uint32_t{1} << a.second;
  const bool free1 = (mask & b1) == 0;
  const bool free2 = (mask & b2) == 0;
  if (free1 && free2) {
    const Rational split = p / 2;
    next[mask | b1] += split;
    next[mask | b2] += split;
  } else if (free1) {
    next[mask | b1] += p;
  } else if (free2) {
    next[mask | b2] += p;
  } else {
    next[mask] += p;
  }
}

}  // namespace

ReducedHalfHalfStats exact_reduced_half_half(const Instance& source, std::int32_t m) {
  if (m < 1) throw Error("copy count m must be >= 1");
  if (source.offline_count() > 12)
    throw GuardExceeded("reduced-instance oracle guard: source offline count exceeds 12");
  const int n0 = source.offline_count();
  const std::int32_t A = source.arrival_count();
  const std::size_t states = std::size_t{1} << n0;
  const Rational half(1, 2);

  ReducedHalfHalfStats stats{Rational(0), Rational(0), Rational(0)};
  if (A == 0) return stats;

  // Backward dead-mode values: V[a][mask] = E[final matched count | state
  // mask entering source arrival a with lstar gone].
  std::vector<std::vector<Rational>> V(static_cast<std::size_t>(A) + 1,
                                       std::vector<Rational>(states, Rational(0)));
  for (std::size_t mask = 0; mask < states; ++mask)
    V[static_cast<std::size_t>(A)][mask] = Rational(popcount(static_cast<std::uint32_t>(mask)));
  for (std::int32_t a = A - 1; a >= 0; --a) {
    const Arrival& arr = source.arrival(a);
    for (std::size_t mask = 0; mask < states; ++mask) {
      const std::uint32_t b1 = std::uint32_t{1} << arr.first;
      if (arr.degree() == 1) {
        const std::size_t to = (mask & b1) == 0 ? (mask | b1) : mask;
        V[static_cast<std::size_t>(a)][mask] = V[static_cast<std::size_t>(a) + 1][to];
        continue;
      }
      const std::uint32_t b2 = std::uint32_t{1} << arr.second;
      const bool free1 = (mask & b1) == 0;
      const bool free2 = (mask & b2) == 0;
      const auto& nxt = V[static_cast<std::size_t>(a) + 1];
      Rational v;
      if (free1 && free2) {
        v = (nxt[mask | b1] + nxt[mask | b2]) * half;
      } else if (free1) {
        v = nxt[mask | b1];
      } else if (free2) {
        v = nxt[mask | b2];
      } else {
        v = nxt[mask];
      }
      V[static_cast<std::size_t>(a)][mask] = v;
    }
  }

  // Forward alive no-consume measures, one source arrival at a time.
  //   NC[a]    : total mass of no-consumption through arrival a (NC[-1]=1)
  //   CM[a]    : mass consuming lstar exactly at arrival a
  //   Wpre[a]  : sum d_a[mask] * V[a+1][mask]   (bystander, alive through a)
  //   U[a]     : sum d_{a-1}[mask] * V[a][mask] (bystander, dead from a on)
  //   Wcons[a] : sum cons_a[mask] * V[a+1][mask] (the consumer copy)
  std::vector<Rational> NC(static_cast<std::size_t>(A), Rational(0));
  std::vector<Rational> CM(static_cast<std::size_t>(A), Rational(0));
  std::vector<Rational> Wpre(static_cast<std::size_t>(A), Rational(0));
  std::vector<Rational> U(static_cast<std::size_t>(A), Rational(0));
  std::vector<Rational> Wcons(static_cast<std::size_t>(A), Rational(0));

  std::vector<Rational> d_prev(states, Rational(0));
  d_prev[0] = Rational(1);
  for (std::int32_t a = 0; a < A; ++a) {
    const Arrival& arr = source.arrival(a);
    for (std::size_t mask = 0; mask < states; ++mask)
      U[static_cast<std::size_t>(a)] += d_prev[mask] * V[static_cast<std::size_t>(a)][mask];

    std::vector<Rational> d_cur(states, Rational(0));
    std::vector<Rational> cons(states, Rational(0));
    for (std::size_t mask = 0; mask < states; ++mask) {
      const Rational& p = d_prev[mask];
      if (p == 0) continue;
      if (arr.degree() == 2) {
        add_degree2_transitions(d_cur, static_cast<std::uint32_t>(mask), p, arr);
        continue;
      }
      const std::uint32_t b1 = std::uint32_t{1} << arr.first;
      if ((mask & b1) == 0) {
        d_cur[mask | b1] += p * half;  // coin matched the copy vertex
        cons[mask] += p * half;        // coin matched lstar
      } else {
        cons[mask] += p;  // forced grab of lstar
      }
    }

    for (std::size_t mask = 0; mask < states; ++mask) {
      NC[static_cast<std::size_t>(a)] += d_cur[mask];
      CM[static_cast<std::size_t>(a)] += cons[mask];
      Wpre[static_cast<std::size_t>(a)] += d_cur[mask] * V[static_cast<std::size_t>(a) + 1][mask];
      Wcons[static_cast<std::size_t>(a)] += cons[mask] * V[static_cast<std::size_t>(a) + 1][mask];
    }
    d_prev = std::move(d_cur);
  }

  // Assembly over the consumption slot tau = (source arrival a, copy c).
  // Copies are independent once tau is fixed: copies before c in the block
  // already processed arrival a alive (factor NC[a]), copies after are still
  // at a-1 (factor NC[a-1]); the slot itself carries CM[a].
  auto nc_at = [&](std::int32_t a) { return a < 0 ? Rational(1) : NC[static_cast<std::size_t>(a)]; };

  Rational e_size(0);
  Rational p_consumed(0);
  Rational e_consumer(0);
  for (std::int32_t a = 0; a < A; ++a) {
    if (CM[static_cast<std::size_t>(a)] == 0) continue;
    std::vector<Rational> pow_cur(static_cast<std::size_t>(m), Rational(1));
    std::vector<Rational> pow_prev(static_cast<std::size_t>(m), Rational(1));
    for (std::int32_t c = 1; c < m; ++c) {
      pow_cur[static_cast<std::size_t>(c)] = pow_cur[static_cast<std::size_t>(c) - 1] * nc_at(a);
      pow_prev[static_cast<std::size_t>(c)] =
          pow_prev[static_cast<std::size_t>(c) - 1] * nc_at(a - 1);
    }
    const Rational& cm = CM[static_cast<std::size_t>(a)];
    for (std::int32_t c = 0; c < m; ++c) {
      const Rational base = pow_cur[static_cast<std::size_t>(c)] *
                            pow_prev[static_cast<std::size_t>(m - 1 - c)];
      const Rational p_tau = base * cm;
      p_consumed += p_tau;
      e_size += p_tau;  // lstar itself is matched
      e_size += Wcons[static_cast<std::size_t>(a)] * base;
      e_consumer += Wcons[static_cast<std::size_t>(a)] * base;
      if (c > 0)
        e_size += Rational(c) * Wpre[static_cast<std::size_t>(a)] *
                  pow_cur[static_cast<std::size_t>(c) - 1] * cm *
                  pow_prev[static_cast<std::size_t>(m - 1 - c)];
      if (m - 1 - c > 0)
        e_size += Rational(m - 1 - c) * U[static_cast<std::size_t>(a)] *
                  pow_cur[static_cast<std::size_t>(c)] * cm *
                  pow_prev[static_cast<std::size_t>(m - 2 - c)];
    }
  }

  // Never-consumed world: all m copies alive end to end.
  Rational never_pow(1);
  for (std::int32_t c = 0; c + 1 < m; ++c) never_pow *= nc_at(A - 1);
  e_size += Rational(m) * Wpre[static_cast<std::size_t>(A) - 1] * never_pow;
  const Rational p_never = never_pow * nc_at(A - 1);

  if (p_consumed + p_never != 1) {
    std::ostringstream os;
    os << "reduced oracle internal accounting error: consumption probabilities sum to "
       << to_string(p_consumed + p_never);
    throw Error(os.str());
  }

  stats.expected_size = e_size;
  stats.p_lstar_matched = p_consumed;
  const Rational e_total_local = e_size - p_consumed;
  stats.expected_avg_lifted_size = (e_total_local - e_consumer) / Rational(m);
  return stats;
}

}  // namespace d2match
