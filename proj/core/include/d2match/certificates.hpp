#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "d2match/eta.hpp"
#include "d2match/instance.hpp"
#include "d2match/oracle.hpp"
#include "d2match/rational.hpp"

namespace d2match {

/// Levels beyond this are treated as fully matched (x = 1): by then
/// eta - alpha is far below any decidable margin and the exact
/// representation of 2^-p stops being worth carrying.
inline constexpr std::int64_t kLevelCap = std::int64_t{1} << 16;

/// Primal level of one offline vertex in the integral analysis:
/// x = 1 - 2^-p for finite p; p = 0 means never seen. ExactOne is a true
/// probability-1 match (degree-1 rule); Saturated is the level-cap state
/// where x is *treated* as 1 and the certificate books the overcount.
class Level {
 public:
  static Level finite(std::int64_t p);
  static Level exact_one();
  static Level saturated();

  bool is_finite() const { return kind_ == Kind::kFinite; }
  bool is_exact_one() const { return kind_ == Kind::kExactOne; }
  bool is_saturated() const { return kind_ == Kind::kSaturated; }
  std::int64_t p() const;  // finite levels only

  Rational x() const;             // 1 - 2^-p, or 1 for both infinite kinds
  Rational one_minus_x() const;   // 2^-p, or 0
  std::string to_string() const;  // "p", "inf", or "sat"

 private:
  enum class Kind { kFinite, kExactOne, kSaturated };
  Kind kind_ = Kind::kFinite;
  std::int64_t p_ = 0;
};

/// Per-vertex primal levels plus the primal objective P = sum_i x_i.
struct LevelState {
  std::vector<Level> level;
  EtaLinear primal;
};

/// Dual variables and objective. gamma is eta for the integral certificate
/// and 3/4 for the fractional one; variables never decrease.
struct DualState {
  std::vector<EtaLinear> alpha;  // per offline vertex
  std::vector<EtaLinear> beta;   // per arrival
  EtaLinear dual;
};

/// The degree-2 primal update: levels (p1, p2) -> p1 + p2 + 1 with
/// deltaP = 2^-p1 + 2^-p2 - 2^-(p1+p2). Finite levels only; throws
/// GuardExceeded when the new level would exceed kLevelCap.
struct PrimalUpdate {
  std::int64_t new_level;
  Rational delta_p;
};
PrimalUpdate primal_update(std::int64_t p1, std::int64_t p2);

/// alpha_(k): the guaranteed dual value of an offline vertex whose primal
/// just reached 1 - 2^-k. Equals eta except at k = 2^m - 1, where the
/// boundary sequence alpha_(1) = 1-eta, alpha_(3) = 11/4 - 3*eta,
/// alpha_(7) = 367/64 - 7*eta, ... applies.
EtaLinear alpha_value(std::int64_t k);

/// alpha_(1..max_k) as exact EtaLinear values.
std::vector<EtaLinear> alpha_table(int max_k);

/// The closed form for alpha_(2^m - 1):
///   sum_{i=1}^{m-1} 2^(m-1-i) (2^-(2^i-2) - 2^-(2(2^i-2)+2))
///   + 2^(m-1) - (2^m - 1) eta.
EtaLinear alpha_boundary_closed_form(int m);

/// One split candidate of the case-3 minimization for target level T:
///   (2^-k + 2^-(T-1-k) - 2^-(T-1)) + alpha_(k) + alpha_(T-1-k) - eta.
EtaLinear alpha_split_candidate(std::int64_t k, std::int64_t T);

/// Exhaustive minimization over all splits k in {0, ..., (T-1)/2}.
struct SplitMinimum {
  EtaLinear value;
  std::vector<std::int64_t> argmin;
};
SplitMinimum alpha_split_minimum(std::int64_t T);

/// The dual update for a degree-2 arrival. Sets both alphas as high as
/// possible given deltaP, capped at eta, and charges beta only with what
/// feasibility still needs:
///   alpha_new = min(eta, deltaP + alpha_old1 + alpha_old2 - eta)
///   beta      = eta - alpha_new if alpha_new < eta, else 0.
/// Guarantees beta in [0, 1], alpha_new + beta >= eta and
/// delta(alpha) + beta <= deltaP; a violation (in particular alpha_new
/// dropping below an old alpha) throws CertificateViolation - that is a
/// disproof of the certificate and never occurs on a legal run.
struct AlphaUpdate {
  EtaLinear alpha_new;
  EtaLinear beta;
};
AlphaUpdate alpha_candidate(const EtaLinear& delta_p, const EtaLinear& alpha_old1,
                            const EtaLinear& alpha_old2);

/// Recomputes every row of the k = 1..7 hand analysis through
/// primal_update + alpha_candidate and checks exact EtaLinear equality with
/// the expected entries, plus the row conditions deltaD <= deltaP,
/// beta in [0,1] and alpha + beta >= eta.
struct HandTableRow {
  int k;
  std::int64_t p1, p2;          // starting levels
  Rational delta_p;
  EtaLinear old_alpha1, old_alpha2;
  EtaLinear new_alpha, beta;    // expected entries
};
struct HandTableReport {
  bool ok = true;
  std::vector<HandTableRow> rows;
  std::vector<std::string> failures;
};
HandTableReport verify_hand_tables();

/// Margin of the case-1 claim for the boundary step 2^(m-1)-1 -> 2^m-1:
///   deltaP - 2 (alpha_(2^m-1) - alpha_(2^(m-1)-1))
///     = 2^(m-1) (4 * 2^-(2^m+m-1) - sum_{i>=m} 2 * 2^-(2^i+i-1)).
/// Returned exactly (the series collapses into the eta coefficient);
/// throws CertificateViolation if not >= 0.
EtaLinear check_claim_case1(int m);

/// Margin of the case-2 claim for combining boundary levels 2^m1-1 and
/// 2^m2-1 (m1 > m2 >= 1): deltaP - 2 eta + alpha_(2^m1-1) + alpha_(2^m2-1),
/// with deltaP = 2^-(2^m1-1) + 2^-(2^m2-1) - 2 * 2^-(2^m1+2^m2-1).
/// Throws CertificateViolation if not >= 0.
EtaLinear check_claim_case2(int m1, int m2);

struct CertificateOptions {
  bool with_trace = false;
  bool with_oracle = false;  // attach exact_expected_half_half when feasible
  OracleOptions oracle;
};

struct TraceEntry {
  std::int32_t arrival = 0;
  std::vector<std::string> state_before;  // per neighbor: level or load
  std::vector<std::string> state_after;
  EtaLinear delta_p;
  EtaLinear delta_alpha;
  EtaLinear beta;
  EtaLinear slack_min;  // min over all edges revealed so far
};

struct CertificateReport {
  std::string kind;        // "integral" | "fractional"
  std::string gamma_name;  // "eta" | "3/4"
  double gamma_approx = 0.0;
  EtaLinear primal;
  EtaLinear dual;
  EtaLinear slack_min;  // min over all revealed edges of alpha + beta - gamma
  std::int64_t opt = 0;
  int saturation_events = 0;
  std::optional<Rational> exact_expected;
  std::vector<TraceEntry> trace;
};

/// Deterministically replays the integral analysis (levels depend only on
/// arrival structure, not coins) while maintaining LevelState and DualState.
/// Per degree-2 arrival: primal_update + alpha_candidate, with levels past
/// kLevelCap treated as fully matched and counted in saturation_events.
/// Per degree-1 arrival at neighbor level p: deltaP = 2^-p, that alpha is
/// raised to eta and beta = deltaP - delta(alpha), asserting
/// alpha_old >= eta - 2^-p. After every arrival asserts D <= P, beta in
/// [0,1], alpha <= eta and alpha + beta >= eta on the new edges; any failure
/// throws CertificateViolation with the arrival trace.
CertificateReport certify_integral_run(const Instance& inst,
                                       const CertificateOptions& opts = {});

/// Runs water_level while maintaining alpha_i = f(x_i) with f(x) = x/2 below
/// the half mark and f(x) = x - 1/4 above, beta_j = half of the below-half
/// mass routed to j. Asserts D = P exactly after every arrival and
/// alpha + beta >= 3/4 on every revealed edge.
CertificateReport certify_fractional_run(const Instance& inst,
                                         const CertificateOptions& opts = {});

/// Checks the negative-correlation bound on an instance small enough for the
/// exact engine: before every degree-2 arrival with neighbor levels (p1, p2),
/// P[both neighbors unmatched] <= 2^-(p1+p2) exactly. Saturated levels are
/// skipped (their exact level is no longer carried). Throws
/// CertificateViolation on a violation.
void verify_negative_correlation(const Instance& inst, const OracleOptions& opts = {});

}  // namespace d2match
