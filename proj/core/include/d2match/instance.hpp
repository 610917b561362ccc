#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace d2match {

class RandomStream;

/// One online vertex: its neighborhood of 1 or 2 distinct offline indices.
/// Canonical form keeps first <= second; second == kNone for degree 1.
struct Arrival {
  static constexpr std::int32_t kNone = -1;

  std::int32_t first = kNone;
  std::int32_t second = kNone;

  int degree() const { return second == kNone ? 1 : 2; }
  bool contains(std::int32_t v) const { return first == v || second == v; }
};

bool operator==(const Arrival& a, const Arrival& b);

/// An online bipartite instance: |L| offline vertices known upfront plus the
/// ordered list of online arrivals. Arrival order is semantically
/// significant. Instances are immutable after construction and safe to share
/// across threads.
class Instance {
 public:
  /// The trivial valid instance: one offline vertex, no arrivals.
  Instance() : offline_count_(1) {}
  Instance(std::int32_t offline_count, std::vector<Arrival> arrivals);

  std::int32_t offline_count() const { return offline_count_; }
  std::int32_t arrival_count() const { return static_cast<std::int32_t>(arrivals_.size()); }
  const std::vector<Arrival>& arrivals() const { return arrivals_; }
  const Arrival& arrival(std::int32_t j) const { return arrivals_[static_cast<std::size_t>(j)]; }

  bool has_degree1_arrival() const;

 private:
  std::int32_t offline_count_;
  std::vector<Arrival> arrivals_;
};

bool operator==(const Instance& a, const Instance& b);

/// Bijection on [0, n). apply(i) relabels offline vertex i.
class OfflinePermutation {
 public:
  explicit OfflinePermutation(std::vector<std::int32_t> mapping);

  static OfflinePermutation identity(std::int32_t n);
  /// Unbiased Fisher-Yates shuffle driven by `stream`.
  static OfflinePermutation random(std::int32_t n, RandomStream& stream);

  std::int32_t size() const { return static_cast<std::int32_t>(mapping_.size()); }
  std::int32_t apply(std::int32_t i) const { return mapping_[static_cast<std::size_t>(i)]; }
  OfflinePermutation inverse() const;

 private:
  std::vector<std::int32_t> mapping_;
};

/// Matching produced by an integral online run: for each offline vertex,
/// the arrival it is matched to (or kUnmatched).
struct IntegralMatching {
  static constexpr std::int32_t kUnmatched = -1;

  std::vector<std::int32_t> partner;  // offline vertex -> arrival index
  std::int64_t size = 0;

  static IntegralMatching empty(std::int32_t offline_count);

  /// True iff partners are instance edges, no arrival is used twice, and
  /// `size` equals the number of matched offline vertices.
  bool valid_for(const Instance& inst) const;
};

/// Parses the JSON instance interchange format
///   {"offline": <int>, "arrivals": [[i] | [i1,i2], ...]}
/// rejecting malformed syntax, out-of-range indices, duplicate indices
/// within an arrival, empty arrivals and degree > 2.
Instance parse_instance(const std::string& text);

/// Canonical serialization; indices within an arrival are sorted.
/// parse_instance(serialize_instance(x)) == x.
std::string serialize_instance(const Instance& inst);

/// Relabels every arrival's offline indices through `perm`;
/// arrival order is unchanged.
Instance apply_permutation(const Instance& inst, const OfflinePermutation& perm);

/// Records how reduce_to_exact_degree2 laid out its output: entry t is the
/// (copy, source arrival) pair of output arrival t. Copy c of source offline
/// vertex v lives at index c*source_offline_count + v; the shared degree-fix
/// vertex lstar is the last offline index.
struct ReductionMap {
  std::int32_t m = 0;
  std::int32_t source_offline_count = 0;
  std::int32_t source_arrival_count = 0;
  struct Entry {
    std::int32_t copy;
    std::int32_t source_arrival;
  };
  std::vector<Entry> entries;

  std::int32_t lstar() const { return m * source_offline_count; }
};

/// The degree-<=2 to degree-exactly-2 transform: m disjoint copies of `inst`
/// plus one shared offline vertex lstar added as second neighbor of every
/// degree-1 arrival. Output arrival order is copy-major per source arrival:
/// all m copies of arrival 0, then all m copies of arrival 1, ...
std::pair<Instance, ReductionMap> reduce_to_exact_degree2(const Instance& inst, std::int32_t m);

/// Restriction of a matching on the reduced instance to one copy, relabeled
/// to the source instance. Returns nullopt ("gave up") exactly when the
/// chosen copy's restriction uses lstar.
std::optional<IntegralMatching> lift_matching(const IntegralMatching& reduced_matching,
                                              const ReductionMap& map,
                                              std::int32_t chosen_copy);

/// Seed-deterministic random instance: each arrival independently has degree
/// 2 with probability `degree2_probability`, neighbors uniform without
/// replacement. Rejects offline_count < 2 with degree2_probability > 0.
Instance gen_random(std::int32_t offline_count, std::int32_t arrival_count,
                    double degree2_probability, std::uint64_t seed);

}  // namespace d2match
