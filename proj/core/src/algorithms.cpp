#include "d2match/algorithms.hpp"

#include <cassert>

#include "d2match/errors.hpp"

namespace d2match {

Rational FractionalAssignment::total_value() const {
  Rational total(0);
  for (const Rational& v : online_load) total += v;
  return total;
}

namespace {

void match(IntegralMatching& m, std::int32_t offline, std::int32_t arrival) {
  m.partner[static_cast<std::size_t>(offline)] = arrival;
  ++m.size;
}

bool is_free(const IntegralMatching& m, std::int32_t offline) {
  return m.partner[static_cast<std::size_t>(offline)] == IntegralMatching::kUnmatched;
}

}  // namespace

IntegralMatching half_half(const Instance& inst, RandomStream& stream) {
  IntegralMatching m = IntegralMatching::empty(inst.offline_count());
  for (std::int32_t j = 0; j < inst.arrival_count(); ++j) {
    const Arrival& a = inst.arrival(j);
    if (a.degree() == 1) {
      if (is_free(m, a.first)) match(m, a.first, j);
      continue;
    }
    const bool free1 = is_free(m, a.first);
    const bool free2 = is_free(m, a.second);
    if (free1 && free2) {
      match(m, stream.next_bit() ? a.second : a.first, j);
    } else if (free1) {
      match(m, a.first, j);
    } else if (free2) {
      match(m, a.second, j);
    }
  }
  return m;
}

IntegralMatching greedy(const Instance& inst, RandomStream&) {
  IntegralMatching m = IntegralMatching::empty(inst.offline_count());
  for (std::int32_t j = 0; j < inst.arrival_count(); ++j) {
    const Arrival& a = inst.arrival(j);
    if (is_free(m, a.first)) {
      match(m, a.first, j);
    } else if (a.degree() == 2 && is_free(m, a.second)) {
      match(m, a.second, j);
    }
  }
  return m;
}

FractionalAssignment water_level(const Instance& inst) {
  FractionalAssignment f;
  f.vertex_load.assign(static_cast<std::size_t>(inst.offline_count()), Rational(0));
  f.online_load.assign(static_cast<std::size_t>(inst.arrival_count()), Rational(0));
  f.edge_weight.resize(static_cast<std::size_t>(inst.arrival_count()));

  const Rational one(1);
  for (std::int32_t j = 0; j < inst.arrival_count(); ++j) {
    const Arrival& a = inst.arrival(j);
    auto charge = [&](std::int32_t i, const Rational& w) {
      if (w == 0) return;
      f.edge_weight[static_cast<std::size_t>(j)].push_back({i, w});
      f.vertex_load[static_cast<std::size_t>(i)] += w;
      f.online_load[static_cast<std::size_t>(j)] += w;
    };

    if (a.degree() == 1) {
      // max(0, l - x) = 1 has l = x + 1; l <= 1 only for a fresh vertex.
      const Rational& x = f.vertex_load[static_cast<std::size_t>(a.first)];
      charge(a.first, one - x);
    } else {
      const Rational& x1 = f.vertex_load[static_cast<std::size_t>(a.first)];
      const Rational& x2 = f.vertex_load[static_cast<std::size_t>(a.second)];
      // With two neighbors the unit of water always reaches a common level
      // l = (1 + x1 + x2) / 2: l >= max(x1, x2) since loads stay <= 1.
      const Rational level = (one + x1 + x2) / 2;
      if (level <= one) {
        charge(a.first, level - x1);
        charge(a.second, level - x2);
      } else {
        charge(a.first, one - x1);
        charge(a.second, one - x2);
      }
    }

    assert(f.online_load[static_cast<std::size_t>(j)] <= one);
    assert(f.vertex_load[static_cast<std::size_t>(a.first)] <= one);
  }
  return f;
}

std::string to_string(AlgorithmId id) {
  switch (id) {
    case AlgorithmId::kHalfHalf: return "half-half";
    case AlgorithmId::kGreedy: return "greedy";
    case AlgorithmId::kWaterLevel: return "water-level";
  }
  return "?";
}

AlgorithmId algorithm_from_string(const std::string& name) {
  if (name == "half-half") return AlgorithmId::kHalfHalf;
  if (name == "greedy") return AlgorithmId::kGreedy;
  if (name == "water-level") return AlgorithmId::kWaterLevel;
  throw ParseError("unknown algorithm id: " + name);
}

}  // namespace d2match
