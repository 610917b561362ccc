#pragma once

#include <cstdint>

#include "d2match/instance.hpp"
#include "d2match/rational.hpp"

namespace d2match {

/// Exact Half-Half statistics on reduce_to_exact_degree2(source, m),
/// computed without materializing the reduced instance's coin space.
///
/// The m copies interact only through the shared vertex lstar, which is
/// matched at most once. Conditioning on the slot (source arrival, copy) at
/// which lstar is consumed factorizes the coin space into independent
/// per-copy processes, so everything reduces to per-copy forward/backward
/// DPs over local matched sets (2^offline states) plus closed-form powers of
/// the per-copy no-consumption mass. Feasible for any m; the generic
/// distribution DP is exponential in m.
struct ReducedHalfHalfStats {
  Rational expected_size;            // E[|matching on reduced instance|]
  Rational p_lstar_matched;          // P[lstar ends matched]
  Rational expected_avg_lifted_size; // E over coins and a uniform copy choice
                                     // of |lift_matching| (0 when gave up)
};

ReducedHalfHalfStats exact_reduced_half_half(const Instance& source, std::int32_t m);

}  // namespace d2match
