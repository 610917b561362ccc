#include "d2match/oracle.hpp"

#include <sstream>

#include "d2match/errors.hpp"

namespace d2match {

namespace {

// Augmenting-path search from one arrival (Kuhn's algorithm). The bipartite
// structure is arrival -> (1 or 2 offline neighbors); arrival_of[i] is the
// current partner of offline vertex i.
bool try_augment(const Instance& inst, std::int32_t arrival, std::vector<std::int32_t>& arrival_of,
                 std::vector<std::int32_t>& visited, std::int32_t stamp) {
  const Arrival& a = inst.arrival(arrival);
  const std::int32_t nbrs[2] = {a.first, a.second};
  for (int t = 0; t < a.degree(); ++t) {
    const std::int32_t i = nbrs[t];
    if (visited[static_cast<std::size_t>(i)] == stamp) continue;
    visited[static_cast<std::size_t>(i)] = stamp;
    if (arrival_of[static_cast<std::size_t>(i)] == IntegralMatching::kUnmatched ||
        try_augment(inst, arrival_of[static_cast<std::size_t>(i)], arrival_of, visited, stamp)) {
      arrival_of[static_cast<std::size_t>(i)] = arrival;
      return true;
    }
  }
  return false;
}

}  // namespace

MaxMatchingResult max_matching(const Instance& inst) {
  std::vector<std::int32_t> arrival_of(static_cast<std::size_t>(inst.offline_count()),
                                       IntegralMatching::kUnmatched);
  std::vector<std::int32_t> visited(static_cast<std::size_t>(inst.offline_count()), -1);
  std::int64_t size = 0;
  for (std::int32_t j = 0; j < inst.arrival_count(); ++j) {
    if (try_augment(inst, j, arrival_of, visited, j)) ++size;
  }
  MaxMatchingResult result;
  result.size = size;
  result.witness.partner = std::move(arrival_of);
  result.witness.size = size;
  return result;
}

Rational MatchedSetDistribution::probability_sum() const {
  Rational sum(0);
  for (const auto& [mask, p] : support) sum += p;
  return sum;
}

DistributionDP::DistributionDP(const Instance& inst, const OracleOptions& opts)
    : inst_(inst), opts_(opts) {
  if (inst.offline_count() > opts_.max_offline) {
    std::ostringstream os;
    os << "exact engine guard: " << inst.offline_count() << " offline vertices exceed the limit of "
       << opts_.max_offline;
    throw GuardExceeded(os.str());
  }
  dist_.support.emplace(0u, Rational(1));
}

void DistributionDP::step() {
  const Arrival& a = inst_.arrival(next_arrival_);
  MatchedSetDistribution next;
  next.support.reserve(dist_.support.size() * 2);
  const Rational half(1, 2);

  auto add = [&next](std::uint64_t mask, const Rational& p) {
    auto [it, inserted] = next.support.emplace(mask, p);
    if (!inserted) it->second += p;
  };

  const std::uint64_t bit1 = std::uint64_t{1} << a.first;
  const std::uint64_t bit2 = a.degree() == 2 ? std::uint64_t{1} << a.second : 0u;

  for (const auto& [mask, p] : dist_.support) {
    if (a.degree() == 1) {
      add(mask | bit1, p);  // match if free, no-op otherwise
      continue;
    }
    const bool free1 = (mask & bit1) == 0;
    const bool free2 = (mask & bit2) == 0;
    if (free1 && free2) {
      const Rational split = p * half;
      add(mask | bit1, split);
      add(mask | bit2, split);
    } else if (free1) {
      add(mask | bit1, p);
    } else if (free2) {
      add(mask | bit2, p);
    } else {
      add(mask, p);
    }
  }

  if (next.support.size() > opts_.max_support) {
    std::ostringstream os;
    os << "exact engine guard: distribution support " << next.support.size()
       << " exceeds the cap of " << opts_.max_support << " at arrival " << next_arrival_;
    throw GuardExceeded(os.str());
  }
  dist_ = std::move(next);
  ++next_arrival_;
}

void DistributionDP::run_to_end() {
  while (!done()) step();
}

Rational DistributionDP::probability_matched(std::int32_t offline_vertex) const {
  const std::uint64_t bit = std::uint64_t{1} << offline_vertex;
  Rational p(0);
  for (const auto& [mask, prob] : dist_.support)
    if (mask & bit) p += prob;
  return p;
}

Rational DistributionDP::probability_unmatched(std::int32_t offline_vertex) const {
  return Rational(1) - probability_matched(offline_vertex);
}

Rational DistributionDP::probability_both_unmatched(std::int32_t u, std::int32_t v) const {
  const std::uint64_t bits = (std::uint64_t{1} << u) | (std::uint64_t{1} << v);
  Rational p(0);
  for (const auto& [mask, prob] : dist_.support)
    if ((mask & bits) == 0) p += prob;
  return p;
}

Rational DistributionDP::expected_matched_count() const {
  Rational e(0);
  for (const auto& [mask, prob] : dist_.support)
    e += Rational(static_cast<long>(__builtin_popcountll(mask))) * prob;
  return e;
}

Rational exact_expected_half_half(const Instance& inst, const OracleOptions& opts) {
  DistributionDP dp(inst, opts);
  dp.run_to_end();
  return dp.expected_matched_count();
}

Rational unmatched_probability(const Instance& inst, std::int32_t offline_vertex,
                               const OracleOptions& opts) {
  if (offline_vertex < 0 || offline_vertex >= inst.offline_count())
    throw ParseError("offline vertex out of range");
  DistributionDP dp(inst, opts);
  dp.run_to_end();
  return dp.probability_unmatched(offline_vertex);
}

}  // namespace d2match
