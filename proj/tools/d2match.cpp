// d2match: generators, online matching algorithms, exact oracles and
// primal-dual certificates for instances with online degree at most 2.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "d2match/algorithms.hpp"
#include "d2match/certificates.hpp"
#include "d2match/errors.hpp"
#include "d2match/estimate.hpp"
#include "d2match/eta.hpp"
#include "d2match/instance.hpp"
#include "d2match/io_json.hpp"
#include "d2match/oracle.hpp"
#include "d2match/phase_graph.hpp"
#include "d2match/rational.hpp"
#include "d2match/reduced_oracle.hpp"
#include "d2match/version.hpp"

namespace {

using d2match::json;
using d2match::Rational;

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitError = 2;

std::string version_string() {
  return std::string(d2match::kArtifactName) + " " + d2match::kVersion;
}

// Relative output paths are resolved against D2MATCH_OUT_DIR when it is set.
std::string resolve_out(const std::string& path) {
  if (path.empty() || path.front() == '/') return path;
  const char* dir = std::getenv("D2MATCH_OUT_DIR");
  if (dir == nullptr || *dir == '\0') return path;
  std::string base(dir);
  if (base.back() != '/') base += '/';
  return base + path;
}

void emit(const std::string& out_path, const std::string& contents) {
  if (out_path.empty()) {
    std::cout << contents << "\n";
  } else {
    d2match::write_file(resolve_out(out_path), contents);
  }
}

struct GlobalFlags {
  std::string format = "text";
  std::string out;
};

bool machine_format(const GlobalFlags& g) { return g.format != "text"; }

d2match::Instance load_instance(const std::string& path) {
  return d2match::parse_instance(d2match::read_file(path));
}

std::string rational_with_decimal(const Rational& r, int digits = 9) {
  return d2match::to_string(r) + " (" + d2match::decimal_string(r, digits) + ")";
}

// ---------------------------------------------------------------------------
// gen

struct GenPhaseArgs {
  int k = 3;
  std::string out;
};

struct GenRandomArgs {
  std::int32_t offline = 10;
  std::int32_t arrivals = 12;
  double p2 = 0.5;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out;
};

struct GenReduceArgs {
  std::string in;
  std::int32_t m = 2;
  std::string out;
  std::string map_out;
};

int run_gen_phase(const GenPhaseArgs& args) {
  emit(args.out, d2match::serialize_instance(d2match::build_phase_graph(args.k).instance));
  return kExitOk;
}

int run_gen_random(const GenRandomArgs& args) {
  const d2match::Instance inst =
      d2match::gen_random(args.offline, args.arrivals, args.p2, args.seed);
  emit(args.out, d2match::serialize_instance(inst));
  return kExitOk;
}

int run_gen_reduce(const GenReduceArgs& args) {
  const auto [reduced, map] = d2match::reduce_to_exact_degree2(load_instance(args.in), args.m);
  emit(args.out, d2match::serialize_instance(reduced));
  if (!args.map_out.empty())
    d2match::write_file(resolve_out(args.map_out), d2match::reduction_map_to_json(map).dump());
  return kExitOk;
}

// ---------------------------------------------------------------------------
// run

struct RunArgs {
  std::string algo = "half-half";
  std::string instance_path;
  std::string dist_path;
  std::uint64_t trials = 10000;
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool permute = false;
  int threads = 1;
};

int run_run(const RunArgs& args, const GlobalFlags& g) {
  if (machine_format(g) && !args.seed_set)
    throw d2match::Error("--seed is required with --format json/csv (no hidden entropy)");
  if (args.instance_path.empty() && args.dist_path.empty())
    throw d2match::Error("run needs --instance or --dist");

  d2match::DistributionSpec spec;
  if (!args.dist_path.empty()) {
    spec = d2match::parse_distribution_spec(d2match::read_file(args.dist_path));
    if (args.permute) spec.kind = d2match::DistributionSpec::Kind::kPermuted;
  } else {
    spec.kind = args.permute ? d2match::DistributionSpec::Kind::kPermuted
                             : d2match::DistributionSpec::Kind::kFixed;
    spec.instance = load_instance(args.instance_path);
  }
  const d2match::AlgorithmId algo = d2match::algorithm_from_string(args.algo);

  const std::int64_t opt = d2match::max_matching(spec.instance).size;
  const d2match::RatioEstimate est =
      d2match::estimate_ratio(algo, spec, args.trials, args.seed, args.threads);

  // Exact quantities when the run is deterministic or the oracle guard
  // permits; omitted (with a warning) otherwise.
  std::optional<Rational> exact_ratio;
  std::string warning;
  const bool fixed = spec.kind == d2match::DistributionSpec::Kind::kFixed;
  if (fixed && algo == d2match::AlgorithmId::kWaterLevel) {
    exact_ratio = d2match::water_level(spec.instance).total_value() / Rational(opt);
  } else if (fixed && algo == d2match::AlgorithmId::kGreedy) {
    d2match::RandomStream stream(0);
    exact_ratio = Rational(static_cast<long>(d2match::greedy(spec.instance, stream).size)) /
                  Rational(opt);
  } else if (fixed && algo == d2match::AlgorithmId::kHalfHalf) {
    try {
      exact_ratio = d2match::exact_expected_half_half(spec.instance) / Rational(opt);
    } catch (const d2match::GuardExceeded& e) {
      warning = std::string("exact expectation omitted: ") + e.what();
    }
  }

  json config;
  config["command"] = "run";
  config["algo"] = args.algo;
  if (!args.instance_path.empty()) config["instance"] = args.instance_path;
  if (!args.dist_path.empty()) config["dist"] = args.dist_path;
  config["trials"] = args.trials;
  config["seed"] = args.seed;
  config["permute"] = args.permute;
  config["threads"] = args.threads;
  config["format"] = g.format;

  if (g.format == "csv") {
    std::ostringstream os;
    os << "instance,algo,trials,seed,opt,mean_ratio,ci99,exact_ratio\n"
       << (args.instance_path.empty() ? args.dist_path : args.instance_path) << ","
       << args.algo << "," << args.trials << "," << args.seed << "," << opt << ","
       << est.mean << "," << est.half_width << ","
       << (exact_ratio ? d2match::decimal_string(*exact_ratio, 12) : "");
    emit(g.out, os.str());
    return kExitOk;
  }
  if (g.format == "json") {
    json report;
    report["version"] = version_string();
    report["config"] = config;
    report["opt"] = opt;
    report["estimate"] = d2match::ratio_estimate_to_json(est);
    if (exact_ratio) {
      report["exact_ratio"] = d2match::to_string(*exact_ratio);
      report["exact_expectation"] = d2match::to_string(*exact_ratio * Rational(opt));
    }
    if (!warning.empty()) report["warning"] = warning;
    emit(g.out, report.dump(2));
    return kExitOk;
  }

  std::ostringstream os;
  os << "algorithm      " << args.algo << "\n"
     << "distribution   " << (fixed ? "fixed" : "permuted") << "\n"
     << "trials         " << est.trials << " (seed " << args.seed
     << (args.seed_set ? "" : ", default") << ")\n"
     << "OPT            " << opt << "\n"
     << "mean ratio     " << est.mean << " +/- " << est.half_width << " (99% CI)\n";
  if (exact_ratio) os << "exact ratio    " << rational_with_decimal(*exact_ratio) << "\n";
  if (!warning.empty()) os << "warning        " << warning << "\n";
  emit(g.out, os.str());
  return kExitOk;
}

// ---------------------------------------------------------------------------
// certify

struct CertifyArgs {
  std::string what;  // integral | fractional | tables | claims
  std::string instance_path;
  int max_m = 20;
  int max_m1 = 12;
  bool trace = false;
  bool with_oracle = false;
};

int run_certify(const CertifyArgs& args, const GlobalFlags& g) {
  if (args.what == "tables") {
    const d2match::HandTableReport report = d2match::verify_hand_tables();
    if (g.format == "json") {
      json j;
      j["version"] = version_string();
      j["ok"] = report.ok;
      j["rows"] = report.rows.size();
      j["failures"] = report.failures;
      emit(g.out, j.dump(2));
    } else {
      std::ostringstream os;
      os << "hand tables k=1..7: " << report.rows.size() << " rows, "
         << (report.ok ? "all exact" : "MISMATCH");
      for (const std::string& f : report.failures) os << "\n  " << f;
      emit(g.out, os.str());
    }
    return report.ok ? kExitOk : kExitViolation;
  }

  if (args.what == "claims") {
    json margins = json::array();
    std::ostringstream os;
    for (int m = 1; m <= args.max_m; ++m) {
      const d2match::EtaLinear margin = d2match::check_claim_case1(m);
      margins.push_back(json{{"claim", "case1"}, {"m", m}, {"margin", margin.to_string()}});
      os << "case1 m=" << m << ": margin " << margin.to_string() << " >= 0\n";
    }
    for (int m1 = 2; m1 <= args.max_m1; ++m1)
      for (int m2 = 1; m2 < m1; ++m2) {
        const d2match::EtaLinear margin = d2match::check_claim_case2(m1, m2);
        margins.push_back(
            json{{"claim", "case2"}, {"m1", m1}, {"m2", m2}, {"margin", margin.to_string()}});
        os << "case2 (m1,m2)=(" << m1 << "," << m2 << "): margin >= 0\n";
      }
    if (g.format == "json") {
      json j;
      j["version"] = version_string();
      j["ok"] = true;
      j["margins"] = margins;
      emit(g.out, j.dump(2));
    } else {
      os << "all claim margins non-negative (case1 m <= " << args.max_m
         << ", case2 m1 <= " << args.max_m1 << ")";
      emit(g.out, os.str());
    }
    return kExitOk;
  }

  if (args.what != "integral" && args.what != "fractional")
    throw d2match::Error("certify expects one of: integral, fractional, tables, claims");
  if (args.instance_path.empty()) throw d2match::Error("certify needs --instance");

  const d2match::Instance inst = load_instance(args.instance_path);
  d2match::CertificateOptions opts;
  opts.with_trace = args.trace;
  opts.with_oracle = args.with_oracle;
  const d2match::CertificateReport report = args.what == "integral"
                                                ? d2match::certify_integral_run(inst, opts)
                                                : d2match::certify_fractional_run(inst, opts);
  if (g.format == "json") {
    json j = d2match::certificate_report_to_json(report);
    j["version"] = version_string();
    j["config"] = json{{"command", "certify"},
                       {"what", args.what},
                       {"instance", args.instance_path},
                       {"trace", args.trace},
                       {"oracle", args.with_oracle}};
    emit(g.out, j.dump(2));
  } else {
    std::ostringstream os;
    os << args.what << " certificate: feasible\n"
       << "P          " << report.primal.to_string() << " (~" << report.primal.to_double()
       << ")\n"
       << "D          " << report.dual.to_string() << " (~" << report.dual.to_double() << ")\n"
       << "OPT        " << report.opt << "\n"
       << "gamma      " << report.gamma_name << " (~" << report.gamma_approx << ")\n"
       << "slack_min  " << report.slack_min.to_string() << "\n"
       << "saturation " << report.saturation_events << " event(s)";
    if (report.exact_expected)
      os << "\nexact E    " << rational_with_decimal(*report.exact_expected);
    emit(g.out, os.str());
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// eta

struct EtaArgs {
  int terms = 8;
  int digits = 12;
  bool table = false;
  int max_k = 15;
};

int run_eta(const EtaArgs& args, const GlobalFlags& g) {
  if (args.table) {
    json rows = json::array();
    std::ostringstream os;
    os << "k\talpha_(k) = a + b*eta\t~decimal\n";
    const std::vector<d2match::EtaLinear> table = d2match::alpha_table(args.max_k);
    for (int k = 1; k <= args.max_k; ++k) {
      const d2match::EtaLinear& v = table[static_cast<std::size_t>(k - 1)];
      rows.push_back(json{{"k", k},
                          {"a", d2match::to_string(v.a)},
                          {"b", d2match::to_string(v.b)},
                          {"approx", v.to_double()}});
      os << k << "\t" << v.to_string() << "\t" << v.to_double() << "\n";
    }
    if (g.format == "json") {
      json j;
      j["version"] = version_string();
      j["config"] = json{{"command", "eta"}, {"table", true}, {"max_k", args.max_k}};
      j["alpha_table"] = rows;
      emit(g.out, j.dump(2));
    } else {
      emit(g.out, os.str());
    }
    return kExitOk;
  }

  const d2match::EtaConstant c = d2match::eta(args.terms);
  if (g.format == "json") {
    json j;
    j["version"] = version_string();
    j["config"] = json{{"command", "eta"}, {"terms", args.terms}, {"digits", args.digits}};
    j["terms"] = c.terms_used;
    j["value"] = d2match::to_string(c.value);
    j["decimal"] = d2match::decimal_string(c.value, args.digits);
    j["tail_bound"] = d2match::to_string(c.tail_bound);
    emit(g.out, j.dump(2));
  } else {
    std::ostringstream os;
    os << "eta ~= " << d2match::decimal_string(c.value, args.digits) << "  (" << c.terms_used
       << " series terms, tail < 2^" << -((long{1} << (c.terms_used + 1)) + c.terms_used - 1)
       << ")";
    emit(g.out, os.str());
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// oracle / exact

int run_oracle(const std::string& instance_path, const GlobalFlags& g) {
  const d2match::Instance inst = load_instance(instance_path);
  const d2match::MaxMatchingResult r = d2match::max_matching(inst);
  if (g.format == "json") {
    json j;
    j["version"] = version_string();
    j["config"] = json{{"command", "oracle"}, {"instance", instance_path}};
    j["opt"] = r.size;
    j["witness"] = d2match::matching_to_json(r.witness);
    emit(g.out, j.dump(2));
  } else {
    std::ostringstream os;
    os << "OPT = " << r.size << "\nwitness (offline -> arrival):";
    for (std::size_t i = 0; i < r.witness.partner.size(); ++i)
      if (r.witness.partner[i] != d2match::IntegralMatching::kUnmatched)
        os << " " << i << "->" << r.witness.partner[i];
    emit(g.out, os.str());
  }
  return kExitOk;
}

struct ExactArgs {
  std::string instance_path;
  std::int32_t vertex = -1;
  bool all_vertices = false;
};

int run_exact(const ExactArgs& args, const GlobalFlags& g) {
  const d2match::Instance inst = load_instance(args.instance_path);
  d2match::DistributionDP dp(inst);
  dp.run_to_end();

  json j;
  std::ostringstream os;
  const Rational expectation = dp.expected_matched_count();
  j["version"] = version_string();
  j["config"] = json{{"command", "exact"}, {"instance", args.instance_path}};
  j["expected_size"] = d2match::to_string(expectation);
  os << "E[half-half size] = " << rational_with_decimal(expectation);
  if (args.vertex >= 0) {
    const Rational p = dp.probability_unmatched(args.vertex);
    j["vertex"] = args.vertex;
    j["unmatched_probability"] = d2match::to_string(p);
    os << "\nP[vertex " << args.vertex << " unmatched] = " << rational_with_decimal(p);
  }
  if (args.all_vertices) {
    json per = json::array();
    os << "\nper-vertex unmatched probabilities:";
    for (std::int32_t v = 0; v < inst.offline_count(); ++v) {
      const Rational p = dp.probability_unmatched(v);
      per.push_back(json{{"vertex", v}, {"unmatched", d2match::to_string(p)}});
      os << "\n  " << v << ": " << rational_with_decimal(p);
    }
    j["per_vertex"] = per;
  }
  emit(g.out, g.format == "json" ? j.dump(2) : os.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"online bipartite matching with online degree <= 2: algorithms, "
               "exact oracles, adversarial instances and primal-dual certificates"};
  app.require_subcommand(1);

  GlobalFlags g;
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"text", "json", "csv"}))
      ->capture_default_str();
  app.add_option("--out", g.out, "Write the report to this file instead of stdout");

  auto* gen = app.add_subcommand("gen", "Generate instance files");
  gen->require_subcommand(1);
  gen->fallthrough();
  GenPhaseArgs gen_phase_args;
  auto* gen_phase = gen->add_subcommand("phase", "Adversarial phase graph with 2^k offline vertices");
  gen_phase->fallthrough();
  gen_phase->add_option("--k", gen_phase_args.k, "Number of phases")->required()
      ->check(CLI::Range(1, 24));
  gen_phase->add_option("--out", gen_phase_args.out, "Instance file to write");

  GenRandomArgs gen_random_args;
  auto* gen_random = gen->add_subcommand("random", "Seeded random degree-<=2 instance");
  gen_random->fallthrough();
  gen_random->add_option("--offline", gen_random_args.offline)->required();
  gen_random->add_option("--arrivals", gen_random_args.arrivals)->required();
  gen_random->add_option("--p2", gen_random_args.p2, "Probability an arrival has degree 2")
      ->capture_default_str();
  gen_random->add_option("--seed", gen_random_args.seed)->required();
  gen_random->add_option("--out", gen_random_args.out);

  GenReduceArgs gen_reduce_args;
  auto* gen_reduce =
      gen->add_subcommand("reduce", "Exact-degree-2 reduction: m copies plus a shared vertex");
  gen_reduce->fallthrough();
  gen_reduce->add_option("--in", gen_reduce_args.in)->required();
  gen_reduce->add_option("--m", gen_reduce_args.m, "Copy count")->required()
      ->check(CLI::Range(1, 1 << 20));
  gen_reduce->add_option("--out", gen_reduce_args.out);
  gen_reduce->add_option("--map", gen_reduce_args.map_out, "Write the copy map JSON here");

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Monte Carlo competitive-ratio measurement");
  run->fallthrough();
  run->add_option("--algo", run_args.algo)->check(CLI::IsMember({"half-half", "greedy", "water-level"}))
      ->capture_default_str();
  auto* run_instance = run->add_option("--instance", run_args.instance_path, "Instance JSON file");
  run->add_option("--dist", run_args.dist_path, "Distribution spec JSON file")
      ->excludes(run_instance);
  run->add_option("--trials", run_args.trials)->capture_default_str();
  auto* seed_opt = run->add_option("--seed", run_args.seed, "Master seed (all randomness)");
  run->add_flag("--permute", run_args.permute, "Draw a fresh offline permutation per trial");
  run->add_option("--threads", run_args.threads)->check(CLI::Range(1, 256))
      ->capture_default_str();

  CertifyArgs certify_args;
  auto* certify = app.add_subcommand(
      "certify", "Primal-dual certificates; exit status 0 iff every assertion holds");
  certify->fallthrough();
  certify->add_option("what", certify_args.what, "integral | fractional | tables | claims")
      ->required();
  certify->add_option("--instance", certify_args.instance_path);
  certify->add_option("--max-m", certify_args.max_m, "Case-1 claim sweep bound")
      ->check(CLI::Range(1, 24))->capture_default_str();
  certify->add_option("--max-m1", certify_args.max_m1, "Case-2 claim sweep bound")
      ->check(CLI::Range(2, 20))->capture_default_str();
  certify->add_flag("--trace", certify_args.trace, "Include the per-arrival trace");
  certify->add_flag("--oracle", certify_args.with_oracle,
                    "Attach the exact expectation when the guard permits");

  EtaArgs eta_args;
  auto* eta_cmd = app.add_subcommand("eta", "The eta constant and the alpha table");
  eta_cmd->fallthrough();
  eta_cmd->add_option("--terms", eta_args.terms)->check(CLI::Range(1, 24))->capture_default_str();
  eta_cmd->add_option("--digits", eta_args.digits)->check(CLI::Range(1, 5000))
      ->capture_default_str();
  eta_cmd->add_flag("--table", eta_args.table, "Print alpha_(k) instead of eta");
  eta_cmd->add_option("--max-k", eta_args.max_k)->check(CLI::Range(1, 4096))
      ->capture_default_str();

  std::string oracle_instance;
  auto* oracle = app.add_subcommand("oracle", "Exact maximum matching with witness");
  oracle->fallthrough();
  oracle->add_option("--instance", oracle_instance)->required();

  ExactArgs exact_args;
  auto* exact = app.add_subcommand("exact", "Exact Half-Half expectation as a rational");
  exact->fallthrough();
  exact->add_option("--instance", exact_args.instance_path)->required();
  exact->add_option("--vertex", exact_args.vertex, "Also print this vertex's unmatched probability");
  exact->add_flag("--all", exact_args.all_vertices, "Per-vertex unmatched probabilities");

  CLI11_PARSE(app, argc, argv);
  run_args.seed_set = seed_opt->count() > 0;

  try {
    if (gen_phase->parsed()) return run_gen_phase(gen_phase_args);
    if (gen_random->parsed()) return run_gen_random(gen_random_args);
    if (gen_reduce->parsed()) return run_gen_reduce(gen_reduce_args);
    if (run->parsed()) return run_run(run_args, g);
    if (certify->parsed()) return run_certify(certify_args, g);
    if (eta_cmd->parsed()) return run_eta(eta_args, g);
    if (oracle->parsed()) return run_oracle(oracle_instance, g);
    if (exact->parsed()) return run_exact(exact_args, g);
  } catch (const d2match::CertificateViolation& e) {
    std::cerr << "certificate violation: " << e.what() << "\n";
    return kExitViolation;
  } catch (const d2match::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
