#include "d2match/phase_graph.hpp"

#include "d2match/errors.hpp"
#include "d2match/eta.hpp"

namespace d2match {

PhaseGraph build_phase_graph(int k) {
  if (k < 1 || k > 24) throw Error("phase graph supported for 1 <= k <= 24");
  const std::int64_t n = std::int64_t{1} << k;

  PhaseGraph pg;
  pg.k = k;
  pg.phase_of_arrival.assign(static_cast<std::size_t>(n - 1), 0);
  pg.last_phase_of_offline.assign(static_cast<std::size_t>(n), 0);

  std::vector<Arrival> arrivals(static_cast<std::size_t>(n - 1));
  for (int j = 1; j <= k; ++j) {
    const std::int64_t count = n >> j;
    const std::int64_t online_start = n - (n >> (j - 1));  // 0-based arrival offset
    const std::int64_t second_base = n - count;
    for (std::int64_t i = 1; i <= count; ++i) {
      const std::int64_t t = online_start + i - 1;  // 0-based arrival index
      Arrival a;
      a.first = static_cast<std::int32_t>(t);  // online t always sees offline t
      a.second = static_cast<std::int32_t>(second_base + i - 1);
      arrivals[static_cast<std::size_t>(t)] = a;
      pg.phase_of_arrival[static_cast<std::size_t>(t)] = j;
      // The first neighbor retires here: it appeared as a second neighbor in
      // every earlier phase and never appears again.
      pg.last_phase_of_offline[static_cast<std::size_t>(t)] = j;
    }
  }
  pg.last_phase_of_offline[static_cast<std::size_t>(n - 1)] = k;  // second-neighbor-only vertex
  pg.instance = Instance(static_cast<std::int32_t>(n), std::move(arrivals));
  return pg;
}

Rational predicted_unmatched_probability(int i) {
  if (i < 1 || i > 24) throw Error("phase index supported for 1 <= i <= 24");
  return pow2(-((long{1} << i) - 1));
}

Rational predicted_ratio_tail(int k) {
  if (k < 1 || k > 24) throw Error("ratio tail supported for 1 <= k <= 24");
  return eta_partial(k);
}

Rational phase_graph_expected_half_half(int k) {
  if (k < 1 || k > 24) throw Error("phase graph supported for 1 <= k <= 24");
  const std::int64_t n = std::int64_t{1} << k;
  Rational unmatched(0);
  for (int i = 1; i <= k; ++i)
    unmatched += Rational(n >> i) * predicted_unmatched_probability(i);
  // Both final-phase vertices (the last retiring vertex and the
  // second-neighbor-only vertex) stay unmatched with the phase-k
  // probability; the sum above counts only one of them.
  unmatched += predicted_unmatched_probability(k);
  return Rational(n) - unmatched;
}

std::int64_t phase_graph_opt(int k) {
  if (k < 1 || k > 24) throw Error("phase graph supported for 1 <= k <= 24");
  // Matching every arrival to its first neighbor is a perfect matching of
  // the online side: first neighbors are pairwise distinct.
  return (std::int64_t{1} << k) - 1;
}

Instance sample_permuted(const PhaseGraph& pg, RandomStream& stream) {
  const OfflinePermutation perm = OfflinePermutation::random(pg.instance.offline_count(), stream);
  return apply_permutation(pg.instance, perm);
}

}  // namespace d2match
