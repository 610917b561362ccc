#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "d2match/instance.hpp"
#include "d2match/random.hpp"
#include "d2match/rational.hpp"

namespace d2match {

/// Exact fractional matching state produced by water_level. Edge weights are
/// stored per arrival; vertex_load[i] is the total mass on offline vertex i
/// and online_load[j] the total mass routed to arrival j.
struct FractionalAssignment {
  struct EdgeWeight {
    std::int32_t offline;
    Rational weight;
  };

  std::vector<Rational> vertex_load;              // size offline_count
  std::vector<Rational> online_load;              // size arrival_count
  std::vector<std::vector<EdgeWeight>> edge_weight;  // per arrival

  Rational total_value() const;
};

/// The Half-Half online algorithm: on a both-free degree-2 arrival, match a
/// uniformly random neighbor; otherwise match the unique free neighbor if
/// any. Consumes exactly one random bit per both-free degree-2 arrival, in
/// arrival order, and no other randomness.
IntegralMatching half_half(const Instance& inst, RandomStream& stream);

/// Deterministic baseline: like half_half but a both-free arrival matches
/// its lowest-index neighbor. The stream argument keeps the integral
/// algorithm interface uniform; greedy never draws from it.
IntegralMatching greedy(const Instance& inst, RandomStream& stream);

/// The Water-Level fractional algorithm in exact rational arithmetic.
/// Per arrival with neighborhood S, the level l solves
///   sum_{i in S} max(0, l - x_i) = 1;
/// if l <= 1 every x_i < l is raised to l (charged to edge (i, j)),
/// otherwise all of S is raised to 1 and j stays partially matched.
FractionalAssignment water_level(const Instance& inst);

enum class AlgorithmId { kHalfHalf, kGreedy, kWaterLevel };

std::string to_string(AlgorithmId id);
AlgorithmId algorithm_from_string(const std::string& name);

}  // namespace d2match
