#include "d2match/certificates.hpp"

#include <map>
#include <mutex>
#include <sstream>
#include <utility>

#include "d2match/algorithms.hpp"
#include "d2match/errors.hpp"

namespace d2match {

namespace {

const EtaLinear& eta_lin() {
  static const EtaLinear v = EtaLinear::one_eta();
  return v;
}

bool is_boundary_level(std::int64_t k, int* m_out = nullptr) {
  // k = 2^m - 1 for some m >= 1
  const std::int64_t kp1 = k + 1;
  if (kp1 < 2 || (kp1 & (kp1 - 1)) != 0) return false;
  if (m_out) {
    int m = 0;
    for (std::int64_t v = kp1; v > 1; v >>= 1) ++m;
    *m_out = m;
  }
  return true;
}

}  // namespace

Level Level::finite(std::int64_t p) {
  if (p < 0 || p > kLevelCap) throw Error("level out of range");
  Level l;
  l.kind_ = Kind::kFinite;
  l.p_ = p;
  return l;
}

Level Level::exact_one() {
  Level l;
  l.kind_ = Kind::kExactOne;
  return l;
}

Level Level::saturated() {
  Level l;
  l.kind_ = Kind::kSaturated;
  return l;
}

std::int64_t Level::p() const {
  if (kind_ != Kind::kFinite) throw Error("infinite level has no exponent");
  return p_;
}

Rational Level::x() const { return Rational(1) - one_minus_x(); }

Rational Level::one_minus_x() const {
  if (kind_ != Kind::kFinite) return Rational(0);
  return pow2(-static_cast<long>(p_));
}

std::string Level::to_string() const {
  switch (kind_) {
    case Kind::kExactOne: return "inf";
    case Kind::kSaturated: return "sat";
    case Kind::kFinite: break;
  }
  return std::to_string(p_);
}

PrimalUpdate primal_update(std::int64_t p1, std::int64_t p2) {
  if (p1 < 0 || p2 < 0) throw Error("levels must be non-negative");
  const std::int64_t new_level = p1 + p2 + 1;
  if (new_level > kLevelCap) {
    std::ostringstream os;
    os << "level overflow: " << p1 << " + " << p2 << " + 1 exceeds the cap " << kLevelCap;
    throw GuardExceeded(os.str());
  }
  PrimalUpdate u;
  u.new_level = new_level;
  u.delta_p = pow2(-static_cast<long>(p1)) + pow2(-static_cast<long>(p2)) -
              pow2(-static_cast<long>(p1 + p2));
  return u;
}

EtaLinear alpha_boundary_closed_form(int m) {
  if (m < 1 || m > 24) throw Error("boundary closed form supported for 1 <= m <= 24");
  Rational sum(0);
  for (int i = 1; i <= m - 1; ++i) {
    const long e = (long{1} << i) - 2;
    sum += pow2(m - 1 - i) * (pow2(-e) - pow2(-(2 * e + 2)));
  }
  const Rational a = sum + pow2(m - 1);
  const Rational b = -(pow2(m) - 1);
  return EtaLinear(a, b);
}

EtaLinear alpha_value(std::int64_t k) {
  if (k < 0) throw Error("alpha index must be non-negative");
  if (k == 0) return EtaLinear();
  if (k == 2) return EtaLinear(Rational(2), Rational(-2));
  int m = 0;
  if (is_boundary_level(k, &m)) {
    static std::mutex mu;
    static std::map<int, EtaLinear> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(m);
    if (it == cache.end()) it = cache.emplace(m, alpha_boundary_closed_form(m)).first;
    return it->second;
  }
  return eta_lin();
}

std::vector<EtaLinear> alpha_table(int max_k) {
  if (max_k < 1) throw Error("alpha table needs max_k >= 1");
  std::vector<EtaLinear> table;
  table.reserve(static_cast<std::size_t>(max_k));
  for (int k = 1; k <= max_k; ++k) table.push_back(alpha_value(k));
  return table;
}

EtaLinear alpha_split_candidate(std::int64_t k, std::int64_t T) {
  if (T < 1 || k < 0 || k > (T - 1) / 2) throw Error("bad split");
  const Rational dp = pow2(-static_cast<long>(k)) + pow2(-static_cast<long>(T - 1 - k)) -
                      pow2(-static_cast<long>(T - 1));
  return EtaLinear::rational(dp) + alpha_value(k) + alpha_value(T - 1 - k) - eta_lin();
}

SplitMinimum alpha_split_minimum(std::int64_t T) {
  if (T < 1) throw Error("target level must be >= 1");
  SplitMinimum best;
  for (std::int64_t k = 0; k <= (T - 1) / 2; ++k) {
    const EtaLinear cand = alpha_split_candidate(k, T);
    if (best.argmin.empty()) {
      best.value = cand;
      best.argmin.push_back(k);
      continue;
    }
    if (cand == best.value) {
      best.argmin.push_back(k);
    } else if (sign(cand - best.value) < 0) {
      best.value = cand;
      best.argmin.assign(1, k);
    }
  }
  return best;
}

AlphaUpdate alpha_candidate(const EtaLinear& delta_p, const EtaLinear& alpha_old1,
                            const EtaLinear& alpha_old2) {
  const EtaLinear cand = delta_p + alpha_old1 + alpha_old2 - eta_lin();

  AlphaUpdate u;
  if (cand == eta_lin() || sign(cand - eta_lin()) >= 0) {
    u.alpha_new = eta_lin();
    u.beta = EtaLinear();
  } else {
    u.alpha_new = cand;
    u.beta = eta_lin() - cand;
  }

  const auto fail = [&](const std::string& what) {
    std::ostringstream os;
    os << "dual update infeasible: " << what << " (deltaP = " << delta_p.to_string()
       << ", old alphas = " << alpha_old1.to_string() << ", " << alpha_old2.to_string() << ")";
    throw CertificateViolation(os.str());
  };

  // Dual variables never decrease; this is the substantive check.
  if (sign(u.alpha_new - alpha_old1) < 0 || sign(u.alpha_new - alpha_old2) < 0)
    fail("alpha would decrease");
  if (sign(u.beta) < 0 || sign(u.beta - EtaLinear::rational(Rational(1))) > 0)
    fail("beta outside [0, 1]");
  const EtaLinear delta_d =
      (u.alpha_new - alpha_old1) + (u.alpha_new - alpha_old2) + u.beta;
  if (sign(delta_p - delta_d) < 0) fail("deltaD exceeds deltaP");
  if (sign(u.alpha_new + u.beta - eta_lin()) < 0) fail("edge constraint below eta");
  return u;
}

HandTableReport verify_hand_tables() {
  const EtaLinear a0;
  const EtaLinear a1(Rational(1), Rational(-1));
  const EtaLinear a2(Rational(2), Rational(-2));
  const EtaLinear a3(Rational(11, 4), Rational(-3));
  const EtaLinear a7(Rational(367, 64), Rational(-7));
  const EtaLinear ae = eta_lin();
  const EtaLinear zero;

  // Every (p1, p2) starting pair of the k = 1..7 case analysis with its
  // expected deltaP, new alpha and beta.
  const std::vector<HandTableRow> rows = {
      {1, 0, 0, Rational(1), a0, a0, a1, EtaLinear(Rational(-1), Rational(2))},
      {2, 0, 1, Rational(1), a0, a1, a2, EtaLinear(Rational(-2), Rational(3))},
      {3, 1, 1, Rational(3, 4), a1, a1, a3, EtaLinear(Rational(-11, 4), Rational(4))},
      {3, 0, 2, Rational(1), a0, a2, ae, zero},
      {4, 0, 3, Rational(1), a0, a3, ae, zero},
      {4, 1, 2, Rational(5, 8), a1, a2, ae, zero},
      {5, 0, 4, Rational(1), a0, ae, ae, zero},
      {5, 1, 3, Rational(9, 16), a1, a3, ae, zero},
      {5, 2, 2, Rational(7, 16), a2, a2, ae, zero},
      {6, 0, 5, Rational(1), a0, ae, ae, zero},
      {6, 1, 4, Rational(17, 32), a1, ae, ae, zero},
      {6, 2, 3, Rational(11, 32), a2, a3, ae, zero},
      {7, 0, 6, Rational(1), a0, ae, ae, zero},
      {7, 1, 5, Rational(33, 64), a1, ae, ae, zero},
      {7, 2, 4, Rational(19, 64), a2, ae, ae, zero},
      {7, 3, 3, Rational(15, 64), a3, a3, a7, EtaLinear(Rational(-367, 64), Rational(8))},
  };

  HandTableReport report;
  report.rows = rows;
  auto record = [&report](int k, std::int64_t p1, std::int64_t p2, const std::string& what) {
    std::ostringstream os;
    os << "k=" << k << " row (" << p1 << ", " << p2 << "): " << what;
    report.failures.push_back(os.str());
    report.ok = false;
  };

  for (const HandTableRow& row : rows) {
    try {
      const PrimalUpdate pu = primal_update(row.p1, row.p2);
      if (pu.new_level != row.k) record(row.k, row.p1, row.p2, "level mismatch");
      if (pu.delta_p != row.delta_p)
        record(row.k, row.p1, row.p2,
               "deltaP mismatch: got " + to_string(pu.delta_p) + ", expected " +
                   to_string(row.delta_p));
      if (alpha_value(row.p1) != row.old_alpha1 || alpha_value(row.p2) != row.old_alpha2)
        record(row.k, row.p1, row.p2, "old alpha mismatch with alpha table");

      const AlphaUpdate au =
          alpha_candidate(EtaLinear::rational(pu.delta_p), row.old_alpha1, row.old_alpha2);
      if (!(au.alpha_new == row.new_alpha))
        record(row.k, row.p1, row.p2,
               "alpha mismatch: got " + au.alpha_new.to_string() + ", expected " +
                   row.new_alpha.to_string());
      if (!(au.beta == row.beta))
        record(row.k, row.p1, row.p2,
               "beta mismatch: got " + au.beta.to_string() + ", expected " +
                   row.beta.to_string());
      // alpha_(k) is the guaranteed minimum over all ways to reach level k;
      // rows whose update lands on eta may exceed it.
      if (sign(au.alpha_new - alpha_value(row.k)) < 0)
        record(row.k, row.p1, row.p2, "update fell below the alpha table value");
    } catch (const Error& e) {
      record(row.k, row.p1, row.p2, std::string("update raised: ") + e.what());
    }
  }
  return report;
}

namespace {

/// sum_{i >= m} 2 * 2^-(2^i + i - 1) as an exact EtaLinear:
/// 2 (1 - eta) minus twice the finite head below m.
EtaLinear series_tail_from(int m) {
  Rational head(0);
  for (int i = 1; i < m; ++i) head += eta_series_term(i);
  return EtaLinear(Rational(2) - 2 * head, Rational(-2));
}

}  // namespace

EtaLinear check_claim_case1(int m) {
  if (m < 1 || m > 24) throw GuardExceeded("claim case 1 supported for 1 <= m <= 24");

  // Series route: 2^(m-1) (4 * 2^-(2^m+m-1) - sum_{i>=m} 2 * 2^-(2^i+i-1)).
  const long e = (long{1} << m) + m - 1;
  const EtaLinear series =
      pow2(m - 1) * (EtaLinear::rational(4 * pow2(-e)) - series_tail_from(m));

  // Recurrence route: deltaP - 2 (alpha_(2^m-1) - alpha_(2^(m-1)-1)) for the
  // level pairing (2^(m-1)-1, 2^(m-1)-1) -> 2^m-1.
  const std::int64_t half = (std::int64_t{1} << (m - 1)) - 1;
  const Rational dp = 2 * pow2(-static_cast<long>(half)) - pow2(-static_cast<long>(2 * half));
  const EtaLinear direct = EtaLinear::rational(dp) -
                           2 * (alpha_value((std::int64_t{1} << m) - 1) - alpha_value(half));

  if (!(series == direct))
    throw CertificateViolation("claim case 1: series and recurrence routes disagree at m = " +
                               std::to_string(m));
  if (sign(series) < 0)
    throw CertificateViolation("claim case 1 margin negative at m = " + std::to_string(m));
  return series;
}

EtaLinear check_claim_case2(int m1, int m2) {
  if (!(m1 > m2 && m2 >= 1 && m1 <= 20))
    throw GuardExceeded("claim case 2 supported for 1 <= m2 < m1 <= 20");

  const long k1 = (long{1} << m1) - 1;
  const long k2 = (long{1} << m2) - 1;
  const Rational dp = pow2(-k1) + pow2(-k2) - 2 * pow2(-(k1 + k2 + 1));

  // Direct route through the alpha table.
  const EtaLinear direct = EtaLinear::rational(dp) - 2 * eta_lin() + alpha_value(k1) +
                           alpha_value(k2);

  // Series route: -2^-k1 - 2^-k2 - 2 * 2^-(k1+k2+1)
  //               + 2^(m1-1) sum_{i>=m1} + 2^(m2-1) sum_{i>=m2}.
  const EtaLinear series =
      EtaLinear::rational(-pow2(-k1) - pow2(-k2) - 2 * pow2(-(k1 + k2 + 1))) +
      pow2(m1 - 1) * series_tail_from(m1) + pow2(m2 - 1) * series_tail_from(m2);

  if (!(series == direct))
    throw CertificateViolation("claim case 2: series and table routes disagree at (" +
                               std::to_string(m1) + ", " + std::to_string(m2) + ")");
  if (sign(direct) < 0)
    throw CertificateViolation("claim case 2 margin negative at (" + std::to_string(m1) + ", " +
                               std::to_string(m2) + ")");
  return direct;
}

namespace {

/// Level transition shared by the certifier and the negative-correlation
/// checker. Saturation (new level past kLevelCap) treats the new primal
/// value as exactly 1 and reports the event so the overcount can be booked.
struct LevelTransition {
  Rational delta_p;
  Level new_level1;  // for degree-2; degree-1 uses new_level1 only
  Level new_level2;
  bool saturated_now = false;
};

LevelTransition degree2_transition(const Level& l1, const Level& l2) {
  LevelTransition t;
  if (!l1.is_finite() || !l2.is_finite()) {
    // A probability-1 neighbor pushes the other to 1 as well with
    // deltaP = (1 - x1) + (1 - x2) exactly; the cross term vanishes.
    t.delta_p = l1.one_minus_x() + l2.one_minus_x();
    const bool any_saturated = l1.is_saturated() || l2.is_saturated();
    const Level promoted = any_saturated ? Level::saturated() : Level::exact_one();
    t.new_level1 = l1.is_finite() ? promoted : l1;
    t.new_level2 = l2.is_finite() ? promoted : l2;
    // Promoting a finite level through a *saturated* partner books an event:
    // the true unmatched probability is positive but no longer carried.
    t.saturated_now = any_saturated && (l1.is_finite() || l2.is_finite());
    return t;
  }
  const std::int64_t p1 = l1.p();
  const std::int64_t p2 = l2.p();
  if (p1 + p2 + 1 > kLevelCap) {
    t.delta_p = pow2(-static_cast<long>(p1)) + pow2(-static_cast<long>(p2));
    t.new_level1 = Level::saturated();
    t.new_level2 = Level::saturated();
    t.saturated_now = true;
    return t;
  }
  const PrimalUpdate pu = primal_update(p1, p2);
  t.delta_p = pu.delta_p;
  t.new_level1 = Level::finite(pu.new_level);
  t.new_level2 = t.new_level1;
  return t;
}

std::string format_violation(std::int32_t arrival, const Instance& inst,
                             const std::string& what,
                             const std::vector<TraceEntry>& trace) {
  std::ostringstream os;
  os << "arrival " << arrival << " of " << inst.arrival_count() << ": " << what;
  if (!trace.empty()) {
    os << "\ntrace:";
    for (const TraceEntry& e : trace) {
      os << "\n  arrival " << e.arrival << ": deltaP = " << e.delta_p.to_string()
         << ", deltaAlpha = " << e.delta_alpha.to_string() << ", beta = " << e.beta.to_string();
    }
  }
  return os.str();
}

}  // namespace

CertificateReport certify_integral_run(const Instance& inst, const CertificateOptions& opts) {
  const std::int32_t n = inst.offline_count();
  LevelState levels;
  levels.level.assign(static_cast<std::size_t>(n), Level::finite(0));
  Rational primal(0);
  DualState duals;
  duals.alpha.assign(static_cast<std::size_t>(n), EtaLinear());
  duals.beta.assign(static_cast<std::size_t>(inst.arrival_count()), EtaLinear());
  EtaLinear dual_value;

  CertificateReport report;
  report.kind = "integral";
  report.gamma_name = "eta";
  report.gamma_approx = eta_lin().to_double();

  std::vector<std::pair<std::int32_t, std::int32_t>> revealed_edges;  // (offline, arrival)
  int saturation_events = 0;

  auto violation = [&](std::int32_t j, const std::string& what) {
    throw CertificateViolation(format_violation(j, inst, what, report.trace));
  };

  for (std::int32_t j = 0; j < inst.arrival_count(); ++j) {
    const Arrival& a = inst.arrival(j);
    TraceEntry entry;
    entry.arrival = j;

    if (a.degree() == 1) {
      const std::int32_t i = a.first;
      Level& l = levels.level[static_cast<std::size_t>(i)];
      EtaLinear& alpha = duals.alpha[static_cast<std::size_t>(i)];
      if (opts.with_trace) entry.state_before = {l.to_string()};

      const Rational dp = l.one_minus_x();
      // Lemma 4.5 case 3 content: the vertex's alpha already covers
      // eta - (1 - x); the certifier verifies rather than assumes it.
      if (sign(alpha - (eta_lin() - EtaLinear::rational(dp))) < 0)
        violation(j, "degree-1 rule: alpha below eta - 2^-p");
      const EtaLinear delta_alpha = eta_lin() - alpha;
      const EtaLinear beta = EtaLinear::rational(dp) - delta_alpha;
      if (sign(beta) < 0 || sign(beta - EtaLinear::rational(Rational(1))) > 0)
        violation(j, "degree-1 rule: beta outside [0, 1]");

      primal += dp;
      dual_value = dual_value + delta_alpha + beta;
      alpha = eta_lin();
      duals.beta[static_cast<std::size_t>(j)] = beta;
      if (l.is_finite()) l = Level::exact_one();

      revealed_edges.emplace_back(i, j);
      entry.delta_p = EtaLinear::rational(dp);
      entry.delta_alpha = delta_alpha;
      entry.beta = beta;
      if (opts.with_trace) entry.state_after = {l.to_string()};
    } else {
      const std::int32_t i1 = a.first;
      const std::int32_t i2 = a.second;
      Level& l1 = levels.level[static_cast<std::size_t>(i1)];
      Level& l2 = levels.level[static_cast<std::size_t>(i2)];
      EtaLinear& alpha1 = duals.alpha[static_cast<std::size_t>(i1)];
      EtaLinear& alpha2 = duals.alpha[static_cast<std::size_t>(i2)];
      if (opts.with_trace) entry.state_before = {l1.to_string(), l2.to_string()};

      const LevelTransition t = degree2_transition(l1, l2);
      if (t.saturated_now) ++saturation_events;

      AlphaUpdate u;
      try {
        u = alpha_candidate(EtaLinear::rational(t.delta_p), alpha1, alpha2);
      } catch (const CertificateViolation& e) {
        violation(j, e.what());
      }
      // Once the primal value is 1, feasibility of all future edges at this
      // vertex rides on alpha alone; the update must have reached eta.
      if (!t.new_level1.is_finite() && !(u.alpha_new == eta_lin()))
        violation(j, "vertex reached level 1 with alpha below eta");

      const EtaLinear delta_alpha = (u.alpha_new - alpha1) + (u.alpha_new - alpha2);
      primal += t.delta_p;
      dual_value = dual_value + delta_alpha + u.beta;
      alpha1 = u.alpha_new;
      alpha2 = u.alpha_new;
      duals.beta[static_cast<std::size_t>(j)] = u.beta;
      l1 = t.new_level1;
      l2 = t.new_level2;

      revealed_edges.emplace_back(i1, j);
      revealed_edges.emplace_back(i2, j);
      entry.delta_p = EtaLinear::rational(t.delta_p);
      entry.delta_alpha = delta_alpha;
      entry.beta = u.beta;
      if (opts.with_trace) entry.state_after = {l1.to_string(), l2.to_string()};
    }

    // Reverse weak duality after every arrival.
    if (sign(EtaLinear::rational(primal) - dual_value) < 0)
      violation(j, "dual value exceeds primal value");

    if (opts.with_trace) {
      EtaLinear slack_min;
      bool first = true;
      for (const auto& [i, jj] : revealed_edges) {
        const EtaLinear slack = duals.alpha[static_cast<std::size_t>(i)] +
                                duals.beta[static_cast<std::size_t>(jj)] - eta_lin();
        if (first || sign(slack - slack_min) < 0) slack_min = slack;
        first = false;
      }
      entry.slack_min = slack_min;
      report.trace.push_back(std::move(entry));
    }
  }

  // Final feasibility sweep over every revealed edge.
  EtaLinear slack_min;
  bool first = true;
  for (const auto& [i, j] : revealed_edges) {
    const EtaLinear slack = duals.alpha[static_cast<std::size_t>(i)] +
                            duals.beta[static_cast<std::size_t>(j)] - eta_lin();
    if (sign(slack) < 0)
      throw CertificateViolation(format_violation(j, inst, "final edge below eta-feasibility",
                                                  report.trace));
    if (first || sign(slack - slack_min) < 0) slack_min = slack;
    first = false;
  }
  if (first) slack_min = EtaLinear();  // no edges

  report.primal = EtaLinear::rational(primal);
  report.dual = dual_value;
  report.slack_min = slack_min;
  report.saturation_events = saturation_events;
  report.opt = max_matching(inst).size;

  if (opts.with_oracle && inst.offline_count() <= opts.oracle.max_offline) {
    const Rational expected = exact_expected_half_half(inst, opts.oracle);
    // The sole approximation in the replay is saturation, each event
    // overcounting the primal by less than 2^-kLevelCap.
    const Rational overcount =
        Rational(saturation_events) * pow2(-static_cast<long>(kLevelCap));
    if (expected < primal - overcount)
      throw CertificateViolation(
          "exact expected matching size falls below the certified primal value");
    report.exact_expected = expected;
  }
  return report;
}

CertificateReport certify_fractional_run(const Instance& inst, const CertificateOptions& opts) {
  const FractionalAssignment f = water_level(inst);
  const Rational half(1, 2);
  const Rational three_quarters(3, 4);
  const Rational one(1);

  const std::int32_t n = inst.offline_count();
  std::vector<Rational> load(static_cast<std::size_t>(n), Rational(0));
  std::vector<Rational> alpha(static_cast<std::size_t>(n), Rational(0));
  std::vector<Rational> beta(static_cast<std::size_t>(inst.arrival_count()), Rational(0));
  Rational primal(0);
  Rational dual(0);

  CertificateReport report;
  report.kind = "fractional";
  report.gamma_name = "3/4";
  report.gamma_approx = 0.75;

  std::vector<std::pair<std::int32_t, std::int32_t>> revealed_edges;

  auto violation = [&](std::int32_t j, const std::string& what) {
    throw CertificateViolation(format_violation(j, inst, what, report.trace));
  };

  for (std::int32_t j = 0; j < inst.arrival_count(); ++j) {
    const Arrival& a = inst.arrival(j);
    TraceEntry entry;
    entry.arrival = j;
    if (opts.with_trace) {
      entry.state_before.push_back(to_string(load[static_cast<std::size_t>(a.first)]));
      if (a.degree() == 2)
        entry.state_before.push_back(to_string(load[static_cast<std::size_t>(a.second)]));
    }

    Rational delta_alpha_total(0);
    Rational beta_j(0);
    Rational delta_p(0);
    for (const auto& [i, w] : f.edge_weight[static_cast<std::size_t>(j)]) {
      Rational& x = load[static_cast<std::size_t>(i)];
      // Below-half mass is shared evenly with beta_j; above-half mass goes
      // to alpha alone. This realizes alpha_i = f(x_i) with breakpoints
      // (1/2, 1/4) and (1, 3/4).
      Rational below(0);
      if (x < half) {
        const Rational reach = x + w < half ? x + w : half;
        below = reach - x;
      }
      const Rational above = w - below;
      alpha[static_cast<std::size_t>(i)] += below / 2 + above;
      beta_j += below / 2;
      delta_alpha_total += below / 2 + above;
      x += w;
      if (x > one) violation(j, "vertex load exceeds 1");
      if (x > 0 && x < half) violation(j, "positive load below the half mark");
      delta_p += w;
    }
    beta[static_cast<std::size_t>(j)] = beta_j;
    primal += delta_p;
    dual += delta_alpha_total + beta_j;
    if (delta_p > one) violation(j, "online load exceeds 1");
    if (beta_j > one) violation(j, "beta exceeds 1");
    if (primal != dual) violation(j, "fractional certificate must keep D = P exactly");

    const std::int32_t nbrs[2] = {a.first, a.second};
    for (int t = 0; t < a.degree(); ++t) {
      revealed_edges.emplace_back(nbrs[t], j);
      const Rational slack =
          alpha[static_cast<std::size_t>(nbrs[t])] + beta_j - three_quarters;
      if (slack < 0) violation(j, "new edge below 3/4-feasibility");
    }

    if (opts.with_trace) {
      entry.state_after.push_back(to_string(load[static_cast<std::size_t>(a.first)]));
      if (a.degree() == 2)
        entry.state_after.push_back(to_string(load[static_cast<std::size_t>(a.second)]));
      entry.delta_p = EtaLinear::rational(delta_p);
      entry.delta_alpha = EtaLinear::rational(delta_alpha_total);
      entry.beta = EtaLinear::rational(beta_j);
      Rational slack_min;
      bool first = true;
      for (const auto& [i, jj] : revealed_edges) {
        const Rational slack = alpha[static_cast<std::size_t>(i)] +
                               beta[static_cast<std::size_t>(jj)] - three_quarters;
        if (first || slack < slack_min) slack_min = slack;
        first = false;
      }
      entry.slack_min = EtaLinear::rational(slack_min);
      report.trace.push_back(std::move(entry));
    }
  }

  Rational slack_min(0);
  bool first = true;
  for (const auto& [i, j] : revealed_edges) {
    const Rational slack =
        alpha[static_cast<std::size_t>(i)] + beta[static_cast<std::size_t>(j)] - three_quarters;
    if (slack < 0)
      throw CertificateViolation(
          format_violation(j, inst, "final edge below 3/4-feasibility", report.trace));
    if (first || slack < slack_min) slack_min = slack;
    first = false;
  }

  report.primal = EtaLinear::rational(primal);
  report.dual = EtaLinear::rational(dual);
  report.slack_min = EtaLinear::rational(slack_min);
  report.opt = max_matching(inst).size;
  return report;
}

void verify_negative_correlation(const Instance& inst, const OracleOptions& opts) {
  DistributionDP dp(inst, opts);
  std::vector<Level> levels(static_cast<std::size_t>(inst.offline_count()), Level::finite(0));

  for (std::int32_t j = 0; j < inst.arrival_count(); ++j) {
    const Arrival& a = inst.arrival(j);
    if (a.degree() == 2) {
      const Level& l1 = levels[static_cast<std::size_t>(a.first)];
      const Level& l2 = levels[static_cast<std::size_t>(a.second)];
      if (!l1.is_saturated() && !l2.is_saturated()) {
        // bound = 2^-(p1+p2), zero when either vertex is matched for sure
        const Rational bound = l1.one_minus_x() * l2.one_minus_x();
        const Rational both_free = dp.probability_both_unmatched(a.first, a.second);
        if (both_free > bound) {
          std::ostringstream os;
          os << "negative correlation violated at arrival " << j << ": P[both unmatched] = "
             << to_string(both_free) << " > " << to_string(bound);
          throw CertificateViolation(os.str());
        }
      }
      const LevelTransition t = degree2_transition(l1, l2);
      levels[static_cast<std::size_t>(a.first)] = t.new_level1;
      levels[static_cast<std::size_t>(a.second)] = t.new_level2;
    } else if (levels[static_cast<std::size_t>(a.first)].is_finite()) {
      levels[static_cast<std::size_t>(a.first)] = Level::exact_one();
    }
    dp.step();
  }
}

}  // namespace d2match
