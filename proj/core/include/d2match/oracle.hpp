#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "d2match/instance.hpp"
#include "d2match/rational.hpp"

namespace d2match {

/// Exact maximum-cardinality matching via augmenting-path search, with a
/// witness. Desk scale only (no Hopcroft-Karp asymptotics).
struct MaxMatchingResult {
  std::int64_t size = 0;
  IntegralMatching witness;
};

MaxMatchingResult max_matching(const Instance& inst);

struct OracleOptions {
  std::int32_t max_offline = 24;       // state-space guard
  std::size_t max_support = 1u << 22;  // hard cap on distribution support
};

/// Distribution over matched offline-vertex sets (bitset-encoded) with exact
/// dyadic probabilities. Probabilities always sum to exactly 1.
struct MatchedSetDistribution {
  std::unordered_map<std::uint64_t, Rational> support;

  Rational probability_sum() const;
};

/// Step-by-step distribution dynamic program over Half-Half's coin space.
/// Each both-free degree-2 arrival splits probability mass 1/2-1/2; states
/// with identical matched sets are merged after every arrival.
class DistributionDP {
 public:
  DistributionDP(const Instance& inst, const OracleOptions& opts = {});

  bool done() const { return next_arrival_ >= inst_.arrival_count(); }
  std::int32_t next_arrival() const { return next_arrival_; }
  void step();
  void run_to_end();

  const MatchedSetDistribution& distribution() const { return dist_; }

  Rational probability_matched(std::int32_t offline_vertex) const;
  Rational probability_unmatched(std::int32_t offline_vertex) const;
  /// P[both u and v currently unmatched].
  Rational probability_both_unmatched(std::int32_t u, std::int32_t v) const;
  /// Sum over states of P(S) * |S| = expected matching size so far.
  Rational expected_matched_count() const;

 private:
  Instance inst_;
  OracleOptions opts_;
  MatchedSetDistribution dist_;
  std::int32_t next_arrival_ = 0;
};

/// Exact E[|half_half matching|] over the coin space.
Rational exact_expected_half_half(const Instance& inst, const OracleOptions& opts = {});

/// Exact terminal P[offline_vertex unmatched] under Half-Half.
Rational unmatched_probability(const Instance& inst, std::int32_t offline_vertex,
                               const OracleOptions& opts = {});

}  // namespace d2match
