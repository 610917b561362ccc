#include <doctest.h>

#include <vector>

#include "d2match/certificates.hpp"
#include "d2match/errors.hpp"
#include "d2match/instance.hpp"
#include "d2match/oracle.hpp"
#include "d2match/phase_graph.hpp"

using namespace d2match;

namespace {

Instance two_vertex_instance() {
  return parse_instance(R"({"offline":2,"arrivals":[[0,1],[0]]})");
}

Instance repeated_pair(std::int32_t times) {
  std::vector<Arrival> arrivals(static_cast<std::size_t>(times), Arrival{0, 1});
  return Instance(2, std::move(arrivals));
}

const EtaLinear kEta = EtaLinear::one_eta();

}  // namespace

TEST_CASE("primal_update reproduces the level arithmetic") {
  const PrimalUpdate u0 = primal_update(0, 0);
  CHECK(u0.new_level == 1);
  CHECK(u0.delta_p == Rational(1));

  const PrimalUpdate u1 = primal_update(1, 1);
  CHECK(u1.new_level == 3);
  CHECK(u1.delta_p == Rational(3, 4));

  const PrimalUpdate u3 = primal_update(3, 3);
  CHECK(u3.new_level == 7);
  CHECK(u3.delta_p == Rational(15, 64));

  CHECK_THROWS_AS(primal_update(kLevelCap / 2, kLevelCap / 2), GuardExceeded);
}

TEST_CASE("alpha table holds the boundary sequence and eta elsewhere") {
  CHECK(alpha_value(0) == EtaLinear());
  CHECK(alpha_value(1) == EtaLinear(Rational(1), Rational(-1)));
  CHECK(alpha_value(2) == EtaLinear(Rational(2), Rational(-2)));
  CHECK(alpha_value(3) == EtaLinear(Rational(11, 4), Rational(-3)));
  for (int k : {4, 5, 6, 8, 9, 12, 14}) CHECK(alpha_value(k) == kEta);
  CHECK(alpha_value(7) == EtaLinear(Rational(367, 64), Rational(-7)));

  const std::vector<EtaLinear> table = alpha_table(7);
  REQUIRE(table.size() == 7);
  CHECK(table[2] == alpha_value(3));
  CHECK(table[6] == alpha_value(7));
}

TEST_CASE("the closed form reproduces the boundary values") {
  CHECK(alpha_boundary_closed_form(1) == alpha_value(1));
  CHECK(alpha_boundary_closed_form(2) == EtaLinear(Rational(11, 4), Rational(-3)));
  CHECK(alpha_boundary_closed_form(3) == EtaLinear(Rational(367, 64), Rational(-7)));
}

TEST_CASE("alpha bounds: below eta, within 2^-k, increasing on the boundary") {
  for (std::int64_t k = 1; k <= 64; ++k) {
    const EtaLinear a = alpha_value(k);
    CHECK(sign(kEta - a) >= 0);
    // eta - alpha_(k) <= 2^-k; at k = 63 the margin is ~2^-128, which
    // exercises the deep refinement of the enclosure.
    CHECK(sign(a - (kEta - EtaLinear::rational(pow2(-static_cast<long>(k))))) >= 0);
  }
  for (int m = 1; m <= 15; ++m) {
    const EtaLinear lo = alpha_value((std::int64_t{1} << m) - 1);
    const EtaLinear hi = alpha_value((std::int64_t{1} << (m + 1)) - 1);
    CHECK(sign(hi - lo) > 0);
  }
}

TEST_CASE("alpha_candidate reproduces the worked dual updates") {
  const EtaLinear zero;
  const AlphaUpdate u1 = alpha_candidate(EtaLinear::rational(Rational(1)), zero, zero);
  CHECK(u1.alpha_new == EtaLinear(Rational(1), Rational(-1)));
  CHECK(u1.beta == EtaLinear(Rational(-1), Rational(2)));

  const AlphaUpdate u2 =
      alpha_candidate(EtaLinear::rational(Rational(1)), EtaLinear(Rational(1), Rational(-1)), zero);
  CHECK(u2.alpha_new == EtaLinear(Rational(2), Rational(-2)));
  CHECK(u2.beta == EtaLinear(Rational(-2), Rational(3)));

  const EtaLinear a3(Rational(11, 4), Rational(-3));
  const AlphaUpdate u7 = alpha_candidate(EtaLinear::rational(Rational(15, 64)), a3, a3);
  CHECK(u7.alpha_new == EtaLinear(Rational(367, 64), Rational(-7)));
  CHECK(u7.beta == EtaLinear(Rational(-367, 64), Rational(8)));
}

TEST_CASE("alpha_candidate flags decreasing alphas as infeasible") {
  // deltaP = 0 with alphas below eta cannot hold the line.
  const EtaLinear a1(Rational(1), Rational(-1));
  CHECK_THROWS_AS(alpha_candidate(EtaLinear(), a1, a1), CertificateViolation);
}

TEST_CASE("hand tables verify exactly") {
  const HandTableReport report = verify_hand_tables();
  for (const std::string& f : report.failures) {
    CAPTURE(f);
    CHECK(false);
  }
  CHECK(report.ok);
  CHECK(report.rows.size() == 16);
}

TEST_CASE("split minimization matches the alpha table up to level 127") {
  for (std::int64_t T = 1; T <= 127; ++T) {
    const SplitMinimum sm = alpha_split_minimum(T);
    const EtaLinear expected = eta_min(kEta, sm.value);
    CHECK(expected == alpha_value(T));
    int m = 0;
    for (std::int64_t v = T + 1; v > 1; v >>= 1) ++m;
    if ((T & (T + 1)) == 0 && T > 1) {
      // Boundary levels: the minimum is achieved at k = 2^(m-1) - 1.
      const std::int64_t expected_argmin = (std::int64_t{1} << (m - 1)) - 1;
      bool found = false;
      for (const std::int64_t k : sm.argmin) found = found || k == expected_argmin;
      CHECK(found);
      CHECK(sign(sm.value - kEta) < 0);
    }
  }
}

TEST_CASE("claim margins are non-negative with exact tails") {
  // m = 1 collapses to 2 eta - 1.
  CHECK(check_claim_case1(1) == EtaLinear(Rational(-1), Rational(2)));
  EtaLinear previous;
  for (int m = 1; m <= 20; ++m) {
    const EtaLinear margin = check_claim_case1(m);
    CHECK(sign(margin) >= 0);
    // The margins shrink toward zero from above as the dominant term decays.
    if (m > 1) CHECK(sign(previous - margin) > 0);
    previous = margin;
  }
  for (int m1 = 2; m1 <= 12; ++m1)
    for (int m2 = 1; m2 < m1; ++m2) {
      const EtaLinear margin = check_claim_case2(m1, m2);
      CHECK(sign(margin) >= 0);
    }
  CHECK_THROWS_AS(check_claim_case1(0), GuardExceeded);
  CHECK_THROWS_AS(check_claim_case2(1, 1), GuardExceeded);
}

TEST_CASE("integral certificate replays the two-vertex instance") {
  CertificateOptions opts;
  opts.with_trace = true;
  opts.with_oracle = true;
  const CertificateReport report = certify_integral_run(two_vertex_instance(), opts);

  CHECK(report.primal == EtaLinear::rational(Rational(3, 2)));
  CHECK(report.dual == report.primal);  // both arrivals spend all of deltaP
  CHECK(report.opt == 2);
  CHECK(report.saturation_events == 0);
  REQUIRE(report.exact_expected.has_value());
  CHECK(*report.exact_expected == Rational(3, 2));

  REQUIRE(report.trace.size() == 2);
  CHECK(report.trace[0].beta == EtaLinear(Rational(-1), Rational(2)));   // 2 eta - 1
  CHECK(report.trace[1].beta == EtaLinear(Rational(3, 2), Rational(-2)));  // 3/2 - 2 eta
  CHECK(report.trace[1].delta_p == EtaLinear::rational(Rational(1, 2)));
  // The edge (vertex 1, arrival 0) is tight: alpha + beta = eta exactly.
  CHECK(report.slack_min == EtaLinear());
}

TEST_CASE("integral certificate handles degree-1-only instances") {
  const Instance inst = parse_instance(R"({"offline":2,"arrivals":[[0],[1],[0]]})");
  const CertificateReport report = certify_integral_run(inst);
  CHECK(report.primal == EtaLinear::rational(Rational(2)));
  CHECK(report.opt == 2);
  CHECK(sign(report.slack_min) >= 0);
}

TEST_CASE("integral certificate on random instances") {
  // The certifier must never raise infeasibility on a valid degree-<=2
  // instance; swept at scale because its failure mode is a disproof.
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    const Instance inst = gen_random(2 + static_cast<std::int32_t>(seed % 12),
                                     static_cast<std::int32_t>(seed % 26),
                                     0.05 * static_cast<double>(seed % 21), seed);
    const CertificateReport report = certify_integral_run(inst);
    CHECK(sign(report.slack_min) >= 0);
    CHECK(sign(EtaLinear::rational(Rational(report.opt)) - report.primal) >= 0);  // P <= OPT
    // gamma-feasibility turns the certificate into a ratio guarantee:
    // P >= eta * OPT exactly.
    CHECK(sign(report.primal - Rational(report.opt) * kEta) >= 0);
  }
}

TEST_CASE("the level cap saturates the repeated-pair chain soundly") {
  // Levels walk the boundary sequence 1, 3, 7, ..., 2^16 - 1 and the 17th
  // update crosses the cap.
  CertificateOptions opts;
  opts.with_oracle = true;
  const CertificateReport report = certify_integral_run(repeated_pair(20), opts);
  CHECK(report.saturation_events == 1);
  CHECK(report.primal == EtaLinear::rational(Rational(2)));
  CHECK(sign(report.primal - report.dual) >= 0);
  REQUIRE(report.exact_expected.has_value());
  CHECK(*report.exact_expected == Rational(2));
  CHECK(sign(report.slack_min) >= 0);
}

TEST_CASE("a saturated vertex promotes its partner soundly") {
  // Saturate {0,1}, then pair the saturated vertex 1 with fresh vertex 2 and
  // finish with a degree-1 arrival on saturated vertex 0.
  std::vector<Arrival> arrivals(17, Arrival{0, 1});
  arrivals.push_back(Arrival{1, 2});
  arrivals.push_back(Arrival{0, Arrival::kNone});
  CertificateOptions opts;
  opts.with_oracle = true;
  const CertificateReport report = certify_integral_run(Instance(3, std::move(arrivals)), opts);
  CHECK(report.saturation_events == 2);  // the cap crossing, then the promotion
  CHECK(report.primal == EtaLinear::rational(Rational(3)));
  CHECK(sign(report.slack_min) >= 0);
  REQUIRE(report.exact_expected.has_value());
  CHECK(*report.exact_expected == Rational(3));
}

TEST_CASE("tight boundary chains below the cap certify exactly") {
  const CertificateReport report = certify_integral_run(repeated_pair(10));
  CHECK(report.saturation_events == 0);
  // P = 2 (1 - 2^-(2^10 - 1)).
  CHECK(report.primal ==
        EtaLinear::rational(Rational(2) - 2 * pow2(-((long{1} << 10) - 1))));
  CHECK(sign(report.slack_min) >= 0);
}

TEST_CASE("fractional certificate on the two-vertex instance is tight") {
  CertificateOptions opts;
  opts.with_trace = true;
  const CertificateReport report = certify_fractional_run(two_vertex_instance(), opts);
  CHECK(report.primal == EtaLinear::rational(Rational(3, 2)));
  CHECK(report.dual == report.primal);
  CHECK(report.opt == 2);
  CHECK(report.slack_min == EtaLinear());  // tight at 3/4
  REQUIRE(report.trace.size() == 2);
  CHECK(report.trace[0].beta == EtaLinear::rational(Rational(1, 2)));
  CHECK(report.trace[1].beta == EtaLinear::rational(Rational(0)));
}

TEST_CASE("fractional certificate covers the three update cases") {
  // Case 1 (both fresh) then case 2 (one at 1/2, one fresh).
  const Instance case12 = parse_instance(R"({"offline":3,"arrivals":[[0,1],[1,2]]})");
  const CertificateReport r12 = certify_fractional_run(case12);
  CHECK(r12.primal == EtaLinear::rational(Rational(2)));
  CHECK(sign(r12.slack_min) >= 0);

  // Case 3: both neighbors at or above 1/2.
  const Instance case3 = parse_instance(R"({"offline":2,"arrivals":[[0,1],[0,1]]})");
  const CertificateReport r3 = certify_fractional_run(case3);
  CHECK(r3.primal == EtaLinear::rational(Rational(2)));
  CHECK(r3.slack_min == EtaLinear());
}

TEST_CASE("fractional certificate on random instances keeps D = P") {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const Instance inst = gen_random(2 + static_cast<std::int32_t>(seed % 14),
                                     static_cast<std::int32_t>(seed % 30), 0.5, seed);
    const CertificateReport report = certify_fractional_run(inst);
    CHECK(report.dual == report.primal);
    CHECK(sign(report.slack_min) >= 0);
    // Water-Level value is at least 3/4 OPT, exactly.
    CHECK(report.primal.a >= Rational(3, 4) * Rational(report.opt));
  }
}

TEST_CASE("integral certificate bounds the oracle on small phase graphs") {
  CertificateOptions opts;
  opts.with_oracle = true;
  for (int k = 1; k <= 4; ++k) {
    const CertificateReport report =
        certify_integral_run(build_phase_graph(k).instance, opts);
    REQUIRE(report.exact_expected.has_value());
    CHECK(*report.exact_expected >= report.primal.a);
    CHECK(sign(report.primal - Rational(report.opt) * kEta) >= 0);
  }
}

TEST_CASE("negative correlation holds on oracle-scale instances") {
  verify_negative_correlation(two_vertex_instance());
  verify_negative_correlation(build_phase_graph(3).instance);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Instance inst = gen_random(2 + static_cast<std::int32_t>(seed % 11),
                                     static_cast<std::int32_t>(seed % 24), 0.7, seed);
    verify_negative_correlation(inst);
  }
}
