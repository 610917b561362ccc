#include <doctest.h>

#include <vector>

#include "d2match/errors.hpp"
#include "d2match/eta.hpp"
#include "d2match/instance.hpp"
#include "d2match/oracle.hpp"
#include "d2match/phase_graph.hpp"
#include "d2match/random.hpp"

using namespace d2match;

TEST_CASE("small phase graphs match the spelled-out construction") {
  const PhaseGraph k1 = build_phase_graph(1);
  CHECK(k1.instance.offline_count() == 2);
  REQUIRE(k1.instance.arrival_count() == 1);
  CHECK(k1.instance.arrival(0) == Arrival{0, 1});

  const PhaseGraph k2 = build_phase_graph(2);
  CHECK(k2.instance.offline_count() == 4);
  REQUIRE(k2.instance.arrival_count() == 3);
  CHECK(k2.instance.arrival(0) == Arrival{0, 2});
  CHECK(k2.instance.arrival(1) == Arrival{1, 3});
  CHECK(k2.instance.arrival(2) == Arrival{2, 3});
  CHECK(k2.phase_of_arrival == std::vector<int>{1, 1, 2});
  CHECK(k2.last_phase_of_offline == std::vector<int>{1, 1, 2, 2});

  const PhaseGraph k3 = build_phase_graph(3);
  CHECK(k3.instance.offline_count() == 8);
  CHECK(k3.instance.arrival_count() == 7);

  CHECK_THROWS_AS(build_phase_graph(0), Error);
  CHECK_THROWS_AS(build_phase_graph(25), Error);
}

TEST_CASE("phase sizes, neighbor formulas and degree progression") {
  for (int k = 1; k <= 14; ++k) {
    const PhaseGraph pg = build_phase_graph(k);
    const std::int64_t n = std::int64_t{1} << k;
    REQUIRE(pg.instance.arrival_count() == n - 1);

    std::vector<std::int64_t> phase_count(static_cast<std::size_t>(k) + 1, 0);
    std::vector<int> degree(static_cast<std::size_t>(n), 0);
    for (std::int32_t t = 0; t < pg.instance.arrival_count(); ++t) {
      const Arrival& a = pg.instance.arrival(t);
      const int j = pg.phase_of_arrival[static_cast<std::size_t>(t)];
      ++phase_count[static_cast<std::size_t>(j)];
      CHECK(a.degree() == 2);
      CHECK(a.first == t);  // online t always sees offline t
      // Both neighbors move from degree j-1 to degree j.
      CHECK(degree[static_cast<std::size_t>(a.first)] == j - 1);
      CHECK(degree[static_cast<std::size_t>(a.second)] == j - 1);
      ++degree[static_cast<std::size_t>(a.first)];
      ++degree[static_cast<std::size_t>(a.second)];
    }
    for (int j = 1; j <= k; ++j) CHECK(phase_count[static_cast<std::size_t>(j)] == n >> j);
  }
}

TEST_CASE("large phase graphs still satisfy the arrival formula") {
  for (const int k : {20, 24}) {
    const PhaseGraph pg = build_phase_graph(k);
    const std::int64_t n = std::int64_t{1} << k;
    CHECK(pg.instance.arrival_count() == n - 1);
    // Spot-check the first and last arrival of each phase.
    for (int j = 1; j <= k; ++j) {
      const std::int64_t first = n - (n >> (j - 1));
      const std::int64_t last = n - (n >> j) - 1;
      const Arrival& a = pg.instance.arrival(static_cast<std::int32_t>(first));
      CHECK(a.first == first);
      CHECK(a.second == n - (n >> j));
      CHECK(pg.phase_of_arrival[static_cast<std::size_t>(first)] == j);
      const Arrival& b = pg.instance.arrival(static_cast<std::int32_t>(last));
      CHECK(b.first == last);
      CHECK(b.second == n - 1);
      CHECK(pg.phase_of_arrival[static_cast<std::size_t>(last)] == j);
    }
  }
}

TEST_CASE("predicted unmatched probabilities") {
  CHECK(predicted_unmatched_probability(1) == Rational(1, 2));
  CHECK(predicted_unmatched_probability(2) == Rational(1, 8));
  CHECK(predicted_unmatched_probability(3) == Rational(1, 128));
  CHECK(predicted_unmatched_probability(3) ==
        Rational(1, 2) * Rational(1, 8) * Rational(1, 8));
}

TEST_CASE("oracle confirms the per-phase probabilities for k <= 4") {
  for (int k = 1; k <= 4; ++k) {
    const PhaseGraph pg = build_phase_graph(k);
    DistributionDP dp(pg.instance);
    dp.run_to_end();
    for (std::int32_t v = 0; v < pg.instance.offline_count(); ++v) {
      const int last = pg.last_phase_of_offline[static_cast<std::size_t>(v)];
      if (last < k)
        CHECK(dp.probability_unmatched(v) == predicted_unmatched_probability(last));
    }
  }
}

TEST_CASE("ratio tail is the truncated eta and decreases toward it") {
  CHECK(predicted_ratio_tail(2) == Rational(23, 32));
  for (int k = 1; k <= 15; ++k) {
    CHECK(predicted_ratio_tail(k + 1) < predicted_ratio_tail(k));
    // Bounded below by eta: the enclosure's lower end sits under every tail.
    CHECK(predicted_ratio_tail(k) > eta(20).value - eta(20).tail_bound);
  }
}

TEST_CASE("closed-form expectation matches the oracle for k <= 4") {
  for (int k = 1; k <= 4; ++k)
    CHECK(phase_graph_expected_half_half(k) ==
          exact_expected_half_half(build_phase_graph(k).instance));
}

TEST_CASE("finite-k boundary effects: the k=2 exact ratio is 11/12") {
  CHECK(phase_graph_expected_half_half(2) == Rational(11, 4));
  CHECK(phase_graph_opt(2) == 3);
  // 11/12 is far from the asymptotic tail value 23/32; the tail formula is
  // an asymptotic quantity, not a finite-k prediction.
  CHECK(Rational(11, 4) / Rational(3) == Rational(11, 12));
  CHECK(predicted_ratio_tail(2) == Rational(23, 32));
}

TEST_CASE("phase graph OPT matches the oracle") {
  for (int k = 1; k <= 10; ++k)
    CHECK(max_matching(build_phase_graph(k).instance).size == phase_graph_opt(k));
}

TEST_CASE("sample_permuted preserves OPT and degrees") {
  const PhaseGraph pg = build_phase_graph(4);
  RandomStream stream(3);
  for (int rep = 0; rep < 10; ++rep) {
    const Instance permuted = sample_permuted(pg, stream);
    CHECK(max_matching(permuted).size == phase_graph_opt(4));
    for (const Arrival& a : permuted.arrivals()) CHECK(a.degree() == 2);
  }
}
