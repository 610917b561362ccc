#include <doctest.h>

#include <set>

#include "d2match/errors.hpp"
#include "d2match/instance.hpp"
#include "d2match/oracle.hpp"
#include "d2match/random.hpp"

using namespace d2match;

namespace {

Instance two_vertex_instance() {
  // Two offline vertices; first arrival sees both, second sees only vertex 0.
  return parse_instance(R"({"offline":2,"arrivals":[[0,1],[0]]})");
}

}  // namespace

TEST_CASE("parse accepts the interchange format") {
  const Instance inst = two_vertex_instance();
  CHECK(inst.offline_count() == 2);
  REQUIRE(inst.arrival_count() == 2);
  CHECK(inst.arrival(0).degree() == 2);
  CHECK(inst.arrival(0).first == 0);
  CHECK(inst.arrival(0).second == 1);
  CHECK(inst.arrival(1).degree() == 1);
  CHECK(inst.arrival(1).first == 0);
}

TEST_CASE("parse accepts an empty arrival list") {
  const Instance inst = parse_instance(R"({"offline":1,"arrivals":[]})");
  CHECK(inst.offline_count() == 1);
  CHECK(inst.arrival_count() == 0);
}

TEST_CASE("parse rejects invariant violations") {
  CHECK_THROWS_AS(parse_instance(R"({"offline":2,"arrivals":[[0,0]]})"), ParseError);
  CHECK_THROWS_AS(parse_instance(R"({"offline":2,"arrivals":[[0,2]]})"), ParseError);
  CHECK_THROWS_AS(parse_instance(R"({"offline":2,"arrivals":[[-1]]})"), ParseError);
  CHECK_THROWS_AS(parse_instance(R"({"offline":2,"arrivals":[[]]})"), ParseError);
  CHECK_THROWS_AS(parse_instance(R"({"offline":2,"arrivals":[[0,1,0]]})"), ParseError);
  CHECK_THROWS_AS(parse_instance(R"({"offline":0,"arrivals":[]})"), ParseError);
  CHECK_THROWS_AS(parse_instance(R"({"offline":2)"), ParseError);
  CHECK_THROWS_AS(parse_instance(R"({"arrivals":[]})"), ParseError);
}

TEST_CASE("serialization is canonical and stable") {
  CHECK(serialize_instance(Instance(1, {})) == R"({"offline":1,"arrivals":[]})");
  // Indices within an arrival come out sorted regardless of input order.
  const Instance inst = parse_instance(R"({"offline":3,"arrivals":[[2,0],[1]]})");
  CHECK(serialize_instance(inst) == R"({"offline":3,"arrivals":[[0,2],[1]]})");
}

TEST_CASE("parse of serialize is the identity") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Instance inst = gen_random(2 + static_cast<std::int32_t>(seed % 9),
                                     static_cast<std::int32_t>(seed % 17), 0.6, seed);
    CHECK(parse_instance(serialize_instance(inst)) == inst);
  }
}

TEST_CASE("apply_permutation relabels and preserves arrival order") {
  const Instance inst = two_vertex_instance();
  const Instance same = apply_permutation(inst, OfflinePermutation::identity(2));
  CHECK(same == inst);

  const Instance swapped = apply_permutation(inst, OfflinePermutation({1, 0}));
  CHECK(swapped.arrival(0) == Arrival{0, 1});  // re-canonicalized
  CHECK(swapped.arrival(1).degree() == 1);
  CHECK(swapped.arrival(1).first == 1);

  CHECK_THROWS_AS(apply_permutation(inst, OfflinePermutation::identity(3)), ParseError);
}

TEST_CASE("permutations invert and reject non-bijections") {
  RandomStream stream(7);
  const OfflinePermutation perm = OfflinePermutation::random(12, stream);
  const OfflinePermutation inv = perm.inverse();
  for (std::int32_t i = 0; i < 12; ++i) CHECK(inv.apply(perm.apply(i)) == i);
  CHECK_THROWS_AS(OfflinePermutation({0, 0, 1}), ParseError);
}

TEST_CASE("OPT is invariant under offline permutation") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Instance inst = gen_random(6, 9, 0.7, seed);
    RandomStream stream(seed + 1000);
    const OfflinePermutation perm = OfflinePermutation::random(6, stream);
    CHECK(max_matching(inst).size == max_matching(apply_permutation(inst, perm)).size);
  }
}

TEST_CASE("degree-2 reduction structure") {
  const Instance inst = two_vertex_instance();
  const auto [reduced, map] = reduce_to_exact_degree2(inst, 2);

  CHECK(reduced.offline_count() == 2 * 2 + 1);
  REQUIRE(reduced.arrival_count() == 4);
  CHECK(map.lstar() == 4);
  for (const Arrival& a : reduced.arrivals()) CHECK(a.degree() == 2);

  // Copy-major order per source arrival: (0,0), (1,0), (0,1), (1,1).
  CHECK(map.entries[0].copy == 0);
  CHECK(map.entries[0].source_arrival == 0);
  CHECK(map.entries[1].copy == 1);
  CHECK(map.entries[1].source_arrival == 0);
  CHECK(map.entries[2].copy == 0);
  CHECK(map.entries[2].source_arrival == 1);
  CHECK(map.entries[3].copy == 1);
  CHECK(map.entries[3].source_arrival == 1);

  // Both copies of the degree-1 arrival picked up lstar.
  CHECK(reduced.arrival(2) == Arrival{0, 4});
  CHECK(reduced.arrival(3) == Arrival{2, 4});
}

TEST_CASE("reduction of an all-degree-2 instance leaves lstar isolated") {
  const Instance inst = parse_instance(R"({"offline":3,"arrivals":[[0,1],[1,2]]})");
  const auto [reduced, map] = reduce_to_exact_degree2(inst, 3);
  CHECK(reduced.offline_count() == 10);
  CHECK(reduced.arrival_count() == 6);
  for (const Arrival& a : reduced.arrivals()) {
    CHECK(a.degree() == 2);
    CHECK_FALSE(a.contains(map.lstar()));
  }
}

TEST_CASE("reduction multiplies OPT") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Instance inst = gen_random(5, 7, 0.5, seed);
    const std::int64_t opt = max_matching(inst).size;
    for (std::int32_t m : {1, 2, 3}) {
      const auto [reduced, map] = reduce_to_exact_degree2(inst, m);
      CHECK(max_matching(reduced).size >= m * opt);
    }
  }
}

TEST_CASE("lift_matching restricts, relabels, and gives up on lstar") {
  const Instance inst = two_vertex_instance();
  const auto [reduced, map] = reduce_to_exact_degree2(inst, 2);

  // Arrivals: 0:{0,1} 1:{2,3} 2:{0,lstar} 3:{2,lstar}. Match copy 0 fully
  // without lstar, copy 1's degree-1 copy onto lstar.
  IntegralMatching reduced_m = IntegralMatching::empty(reduced.offline_count());
  reduced_m.partner[1] = 0;
  reduced_m.partner[3] = 1;
  reduced_m.partner[0] = 2;
  reduced_m.partner[4] = 3;  // lstar matched by copy 1's arrival
  reduced_m.size = 4;
  REQUIRE(reduced_m.valid_for(reduced));

  const auto lifted0 = lift_matching(reduced_m, map, 0);
  REQUIRE(lifted0.has_value());
  CHECK(lifted0->valid_for(inst));
  CHECK(lifted0->size == 2);
  CHECK(lifted0->partner[1] == 0);
  CHECK(lifted0->partner[0] == 1);

  const auto lifted1 = lift_matching(reduced_m, map, 1);
  CHECK_FALSE(lifted1.has_value());  // copy 1's restriction uses lstar

  CHECK_THROWS_AS(lift_matching(reduced_m, map, 2), ParseError);
  ReductionMap broken = map;
  broken.entries.pop_back();
  CHECK_THROWS_AS(lift_matching(reduced_m, broken, 0), ParseError);
}

TEST_CASE("gen_random is a pure function of its seed") {
  const Instance a = gen_random(10, 12, 0.8, 7);
  const Instance b = gen_random(10, 12, 0.8, 7);
  CHECK(a == b);
  const Instance c = gen_random(10, 12, 0.8, 8);
  CHECK_FALSE(a == c);
}

TEST_CASE("gen_random honors the degree parameter") {
  const Instance all_deg1 = gen_random(5, 20, 0.0, 3);
  for (const Arrival& a : all_deg1.arrivals()) CHECK(a.degree() == 1);
  const Instance all_deg2 = gen_random(5, 20, 1.0, 3);
  for (const Arrival& a : all_deg2.arrivals()) CHECK(a.degree() == 2);
  CHECK_THROWS_AS(gen_random(1, 5, 0.5, 0), ParseError);
  CHECK_NOTHROW(gen_random(1, 5, 0.0, 0));
}

TEST_CASE("generated instances always pass validation") {
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    const std::int32_t offline = 2 + static_cast<std::int32_t>(seed % 29);
    const std::int32_t arrivals = static_cast<std::int32_t>(seed % 40);
    const double p2 = static_cast<double>(seed % 11) / 10.0;
    // Round-trips through the validating parser.
    const Instance inst = gen_random(offline, arrivals, p2, seed);
    CHECK(parse_instance(serialize_instance(inst)).offline_count() == offline);
  }
}

TEST_CASE("matching validity checks") {
  const Instance inst = two_vertex_instance();
  IntegralMatching m = IntegralMatching::empty(2);
  CHECK(m.valid_for(inst));
  m.partner[0] = 1;
  m.size = 1;
  CHECK(m.valid_for(inst));
  m.partner[1] = 1;  // arrival 1 does not contain vertex 1
  m.size = 2;
  CHECK_FALSE(m.valid_for(inst));
  m.partner[1] = IntegralMatching::kUnmatched;
  m.size = 2;  // size lies
  CHECK_FALSE(m.valid_for(inst));
}
