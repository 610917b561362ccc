#pragma once

#include <cstdint>
#include <vector>

#include "d2match/instance.hpp"
#include "d2match/random.hpp"
#include "d2match/rational.hpp"

namespace d2match {

/// The adversarial phased family: 2^k offline vertices and 2^k - 1 arrivals
/// in k geometrically shrinking phases. Arrival t (0-based) has first
/// neighbor t; in phase j with within-phase index i (1-based), its second
/// neighbor is (n - n/2^j) + i - 1. When a phase-j arrival comes, both its
/// neighbors' degrees move from j-1 to j.
struct PhaseGraph {
  int k = 0;
  Instance instance;
  std::vector<int> phase_of_arrival;       // arrival -> phase in [1, k]
  std::vector<int> last_phase_of_offline;  // offline vertex -> last phase seen
};

/// Builds the k-phase graph, 1 <= k <= 24.
PhaseGraph build_phase_graph(int k);

/// Terminal P[unmatched] under Half-Half for an offline vertex whose last
/// appearance is phase i (open-ended phases): 2^-(2^i - 1).
Rational predicted_unmatched_probability(int i);

/// 1 - sum_{i=1..k} 2^-(2^i + i - 1): the k-truncated eta. This treats every
/// phase as open-ended and normalizes by n, so it is an asymptotic quantity;
/// finite graphs have boundary effects at the last phase.
Rational predicted_ratio_tail(int k);

/// Exact E[|half_half matching|] on the k-phase graph, from the per-phase
/// recurrence with the final phase handled exactly: both vertices whose last
/// phase is k stay unmatched with probability 2^-(2^k - 1), so
///   E = n - sum_{i=1..k} (n/2^i) 2^-(2^i - 1) - 2^-(2^k - 1).
/// Validated against the distribution oracle for k <= 4.
Rational phase_graph_expected_half_half(int k);

/// OPT of the k-phase graph: all 2^k - 1 arrivals are matchable.
std::int64_t phase_graph_opt(int k);

/// Applies a uniformly random offline permutation drawn from `stream`.
Instance sample_permuted(const PhaseGraph& pg, RandomStream& stream);

}  // namespace d2match
