#include "d2match/instance.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "d2match/errors.hpp"
#include "d2match/random.hpp"

namespace d2match {

namespace {

Arrival make_canonical_arrival(std::int32_t offline_count, std::vector<std::int64_t> idx,
                               std::size_t position) {
  const auto fail = [&](const std::string& why) {
    std::ostringstream os;
    os << "arrival " << position << ": " << why;
    throw ParseError(os.str());
  };
  if (idx.empty()) fail("empty neighbor set");
  if (idx.size() > 2) fail("online degree > 2 is not supported");
  for (std::int64_t v : idx) {
    if (v < 0 || v >= offline_count) {
      std::ostringstream os;
      os << "offline index " << v << " out of range [0, " << offline_count << ")";
      fail(os.str());
    }
  }
  Arrival a;
  if (idx.size() == 1) {
    a.first = static_cast<std::int32_t>(idx[0]);
  } else {
    if (idx[0] == idx[1]) fail("duplicate offline index within arrival");
    a.first = static_cast<std::int32_t>(std::min(idx[0], idx[1]));
    a.second = static_cast<std::int32_t>(std::max(idx[0], idx[1]));
  }
  return a;
}

}  // namespace

bool operator==(const Arrival& a, const Arrival& b) {
  return a.first == b.first && a.second == b.second;
}

Instance::Instance(std::int32_t offline_count, std::vector<Arrival> arrivals)
    : offline_count_(offline_count), arrivals_(std::move(arrivals)) {
  if (offline_count_ <= 0) throw ParseError("offline count must be a positive integer");
  for (std::size_t t = 0; t < arrivals_.size(); ++t) {
    Arrival& a = arrivals_[t];
    if (a.second != Arrival::kNone && a.first > a.second) std::swap(a.first, a.second);
    std::vector<std::int64_t> idx{a.first};
    if (a.second != Arrival::kNone) idx.push_back(a.second);
    arrivals_[t] = make_canonical_arrival(offline_count_, idx, t);
  }
}

bool Instance::has_degree1_arrival() const {
  return std::any_of(arrivals_.begin(), arrivals_.end(),
                     [](const Arrival& a) { return a.degree() == 1; });
}

bool operator==(const Instance& a, const Instance& b) {
  return a.offline_count() == b.offline_count() && a.arrivals() == b.arrivals();
}

OfflinePermutation::OfflinePermutation(std::vector<std::int32_t> mapping)
    : mapping_(std::move(mapping)) {
  std::vector<bool> seen(mapping_.size(), false);
  for (std::int32_t v : mapping_) {
    if (v < 0 || static_cast<std::size_t>(v) >= mapping_.size() || seen[static_cast<std::size_t>(v)])
      throw ParseError("permutation mapping is not a bijection on [0, n)");
    seen[static_cast<std::size_t>(v)] = true;
  }
}

OfflinePermutation OfflinePermutation::identity(std::int32_t n) {
  std::vector<std::int32_t> mapping(static_cast<std::size_t>(n));
  std::iota(mapping.begin(), mapping.end(), 0);
  return OfflinePermutation(std::move(mapping));
}

OfflinePermutation OfflinePermutation::random(std::int32_t n, RandomStream& stream) {
  std::vector<std::int32_t> mapping(static_cast<std::size_t>(n));
  std::iota(mapping.begin(), mapping.end(), 0);
  for (std::size_t i = mapping.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(stream.below(i));
    std::swap(mapping[i - 1], mapping[j]);
  }
  return OfflinePermutation(std::move(mapping));
}

OfflinePermutation OfflinePermutation::inverse() const {
  std::vector<std::int32_t> inv(mapping_.size());
  for (std::size_t i = 0; i < mapping_.size(); ++i)
    inv[static_cast<std::size_t>(mapping_[i])] = static_cast<std::int32_t>(i);
  return OfflinePermutation(std::move(inv));
}

IntegralMatching IntegralMatching::empty(std::int32_t offline_count) {
  IntegralMatching m;
  m.partner.assign(static_cast<std::size_t>(offline_count), kUnmatched);
  m.size = 0;
  return m;
}

bool IntegralMatching::valid_for(const Instance& inst) const {
  if (partner.size() != static_cast<std::size_t>(inst.offline_count())) return false;
  std::vector<bool> arrival_used(static_cast<std::size_t>(inst.arrival_count()), false);
  std::int64_t matched = 0;
  for (std::size_t i = 0; i < partner.size(); ++i) {
    const std::int32_t j = partner[i];
    if (j == kUnmatched) continue;
    if (j < 0 || j >= inst.arrival_count()) return false;
    if (!inst.arrival(j).contains(static_cast<std::int32_t>(i))) return false;
    if (arrival_used[static_cast<std::size_t>(j)]) return false;
    arrival_used[static_cast<std::size_t>(j)] = true;
    ++matched;
  }
  return matched == size;
}

Instance parse_instance(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("offline") || !j.contains("arrivals"))
    throw ParseError("instance JSON must be an object with \"offline\" and \"arrivals\"");
  if (!j["offline"].is_number_integer() || j["offline"].get<std::int64_t>() <= 0)
    throw ParseError("\"offline\" must be a positive integer");
  const std::int64_t offline = j["offline"].get<std::int64_t>();
  if (offline > (std::int64_t{1} << 30)) throw ParseError("\"offline\" is implausibly large");
  if (!j["arrivals"].is_array()) throw ParseError("\"arrivals\" must be an array");

  std::vector<Arrival> arrivals;
  arrivals.reserve(j["arrivals"].size());
  for (std::size_t t = 0; t < j["arrivals"].size(); ++t) {
    const auto& entry = j["arrivals"][t];
    if (!entry.is_array()) throw ParseError("each arrival must be an array of offline indices");
    std::vector<std::int64_t> idx;
    for (const auto& v : entry) {
      if (!v.is_number_integer()) throw ParseError("arrival entries must be integers");
      idx.push_back(v.get<std::int64_t>());
    }
    arrivals.push_back(make_canonical_arrival(static_cast<std::int32_t>(offline), idx, t));
  }
  return Instance(static_cast<std::int32_t>(offline), std::move(arrivals));
}

std::string serialize_instance(const Instance& inst) {
  nlohmann::ordered_json j;
  j["offline"] = inst.offline_count();
  auto arr = nlohmann::ordered_json::array();
  for (const Arrival& a : inst.arrivals()) {
    auto entry = nlohmann::ordered_json::array();
    entry.push_back(a.first);
    if (a.second != Arrival::kNone) entry.push_back(a.second);
    arr.push_back(std::move(entry));
  }
  j["arrivals"] = std::move(arr);
  return j.dump();
}

Instance apply_permutation(const Instance& inst, const OfflinePermutation& perm) {
  if (perm.size() != inst.offline_count())
    throw ParseError("permutation size does not match offline count");
  std::vector<Arrival> arrivals = inst.arrivals();
  for (Arrival& a : arrivals) {
    a.first = perm.apply(a.first);
    if (a.second != Arrival::kNone) a.second = perm.apply(a.second);
  }
  return Instance(inst.offline_count(), std::move(arrivals));
}

std::pair<Instance, ReductionMap> reduce_to_exact_degree2(const Instance& inst, std::int32_t m) {
  if (m < 1) throw ParseError("copy count m must be >= 1");
  const std::int32_t n0 = inst.offline_count();
  const std::int32_t lstar = m * n0;

  ReductionMap map;
  map.m = m;
  map.source_offline_count = n0;
  map.source_arrival_count = inst.arrival_count();
  map.entries.reserve(static_cast<std::size_t>(m) * inst.arrivals().size());

  std::vector<Arrival> arrivals;
  arrivals.reserve(map.entries.capacity());
  for (std::int32_t a = 0; a < inst.arrival_count(); ++a) {
    const Arrival& src = inst.arrival(a);
    for (std::int32_t c = 0; c < m; ++c) {
      Arrival out;
      out.first = c * n0 + src.first;
      out.second = src.degree() == 2 ? c * n0 + src.second : lstar;
      arrivals.push_back(out);
      map.entries.push_back({c, a});
    }
  }
  return {Instance(m * n0 + 1, std::move(arrivals)), std::move(map)};
}

std::optional<IntegralMatching> lift_matching(const IntegralMatching& reduced_matching,
                                              const ReductionMap& map,
                                              std::int32_t chosen_copy) {
  const std::int32_t n0 = map.source_offline_count;
  if (map.m < 1 || n0 < 1 ||
      map.entries.size() != static_cast<std::size_t>(map.m) *
                                static_cast<std::size_t>(map.source_arrival_count))
    throw ParseError("inconsistent copy map");
  if (chosen_copy < 0 || chosen_copy >= map.m) throw ParseError("chosen copy out of range");
  if (reduced_matching.partner.size() != static_cast<std::size_t>(map.m) * n0 + 1)
    throw ParseError("matching size does not fit the copy map");

  // Gave up: the chosen copy's restriction uses lstar.
  const std::int32_t lstar_arrival = reduced_matching.partner[static_cast<std::size_t>(map.lstar())];
  if (lstar_arrival != IntegralMatching::kUnmatched) {
    const auto& entry = map.entries[static_cast<std::size_t>(lstar_arrival)];
    if (entry.copy == chosen_copy) return std::nullopt;
  }

  IntegralMatching lifted = IntegralMatching::empty(n0);
  for (std::int32_t v = 0; v < n0; ++v) {
    const std::int32_t j = reduced_matching.partner[static_cast<std::size_t>(chosen_copy * n0 + v)];
    if (j == IntegralMatching::kUnmatched) continue;
    if (j < 0 || static_cast<std::size_t>(j) >= map.entries.size())
      throw ParseError("inconsistent copy map");
    const auto& entry = map.entries[static_cast<std::size_t>(j)];
    if (entry.copy != chosen_copy) throw ParseError("inconsistent copy map");
    lifted.partner[static_cast<std::size_t>(v)] = entry.source_arrival;
    ++lifted.size;
  }
  return lifted;
}

Instance gen_random(std::int32_t offline_count, std::int32_t arrival_count,
                    double degree2_probability, std::uint64_t seed) {
  if (degree2_probability < 0.0 || degree2_probability > 1.0)
    throw ParseError("degree2 probability must lie in [0, 1]");
  if (offline_count < 2 && degree2_probability > 0.0)
    throw ParseError("degree-2 arrivals need at least 2 offline vertices");
  if (offline_count < 1 || arrival_count < 0) throw ParseError("bad generator parameters");

  RandomStream stream(seed);
  std::vector<Arrival> arrivals;
  arrivals.reserve(static_cast<std::size_t>(arrival_count));
  for (std::int32_t t = 0; t < arrival_count; ++t) {
    Arrival a;
    const bool degree2 = stream.next_double() < degree2_probability;
    a.first = static_cast<std::int32_t>(stream.below(static_cast<std::uint64_t>(offline_count)));
    if (degree2) {
      std::int32_t other =
          static_cast<std::int32_t>(stream.below(static_cast<std::uint64_t>(offline_count) - 1));
      if (other >= a.first) ++other;
      a.second = other;
    }
    arrivals.push_back(a);
  }
  return Instance(offline_count, std::move(arrivals));
}

}  // namespace d2match
