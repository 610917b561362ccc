#pragma once

#include <cstdint>
#include <string>

#include "d2match/algorithms.hpp"
#include "d2match/instance.hpp"
#include "d2match/rational.hpp"

namespace d2match {

/// What estimate_ratio samples from: a fixed instance, or the orbit of one
/// under uniformly random offline permutations. JSON form:
///   {"kind": "fixed"|"permuted", "instance": <inline object or file path>}
struct DistributionSpec {
  enum class Kind { kFixed, kPermuted };
  Kind kind = Kind::kFixed;
  Instance instance;
};

DistributionSpec parse_distribution_spec(const std::string& text);

/// Monte Carlo competitive-ratio estimate with a normal-approximation 99%
/// confidence interval. Fully determined by (spec, algorithm, trials, seed).
struct RatioEstimate {
  double mean = 0.0;
  double half_width = 0.0;  // z_{0.01} * sample stddev / sqrt(trials)
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

/// Mean of algorithm_size / OPT over `trials` independent trials, each with
/// its own derived random stream (fresh permutation when the spec says so,
/// fresh coins always). `threads` controls trial parallelism only; the
/// result is bitwise independent of it. Requires trials >= 100.
RatioEstimate estimate_ratio(AlgorithmId algorithm, const DistributionSpec& spec,
                             std::uint64_t trials, std::uint64_t seed, int threads = 1);

}  // namespace d2match
