#include "d2match/io_json.hpp"

#include <fstream>
#include <sstream>

#include "d2match/errors.hpp"

namespace d2match {

std::string decimal_string(const Rational& r, int digits) {
  if (digits < 0) throw Error("negative digit count");
  const bool negative = r < 0;
  mpz_class num = abs(r.get_num());
  const mpz_class& den = r.get_den();
  mpz_class ip = num / den;
  mpz_class rem = num % den;
  std::string out = (negative && (ip != 0 || rem != 0) ? "-" : "") + ip.get_str();
  if (digits == 0) return out;
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10u, static_cast<unsigned long>(digits));
  mpz_class frac = rem * scale / den;
  std::string fs = frac.get_str();
  out += "." + std::string(static_cast<std::size_t>(digits) - fs.size(), '0') + fs;
  return out;
}

json instance_to_json(const Instance& inst) {
  return json::parse(serialize_instance(inst));
}

Instance instance_from_json(const json& j) { return parse_instance(j.dump()); }

json matching_to_json(const IntegralMatching& m) {
  json j;
  j["size"] = m.size;
  auto pairs = json::array();
  for (std::size_t i = 0; i < m.partner.size(); ++i) {
    if (m.partner[i] != IntegralMatching::kUnmatched)
      pairs.push_back(json::array({i, m.partner[i]}));
  }
  j["pairs"] = std::move(pairs);  // [offline, arrival]
  return j;
}

json reduction_map_to_json(const ReductionMap& map) {
  json j;
  j["m"] = map.m;
  j["source_offline"] = map.source_offline_count;
  j["source_arrivals"] = map.source_arrival_count;
  j["lstar"] = map.lstar();
  auto entries = json::array();
  for (const auto& e : map.entries) entries.push_back(json::array({e.copy, e.source_arrival}));
  j["entries"] = std::move(entries);
  return j;
}

ReductionMap reduction_map_from_json(const json& j) {
  ReductionMap map;
  map.m = j.at("m").get<std::int32_t>();
  map.source_offline_count = j.at("source_offline").get<std::int32_t>();
  map.source_arrival_count = j.at("source_arrivals").get<std::int32_t>();
  for (const auto& e : j.at("entries"))
    map.entries.push_back({e.at(0).get<std::int32_t>(), e.at(1).get<std::int32_t>()});
  return map;
}

json eta_linear_to_json(const EtaLinear& v) {
  json j;
  j["a"] = to_string(v.a);
  j["b"] = to_string(v.b);
  j["approx"] = v.to_double();
  return j;
}

json certificate_report_to_json(const CertificateReport& report) {
  json j;
  j["kind"] = report.kind;
  json summary;
  summary["P"] = eta_linear_to_json(report.primal);
  summary["D"] = eta_linear_to_json(report.dual);
  summary["opt"] = report.opt;
  summary["gamma"] = json{{"name", report.gamma_name}, {"approx", report.gamma_approx}};
  summary["slack_min"] = eta_linear_to_json(report.slack_min);
  summary["saturation_events"] = report.saturation_events;
  if (report.exact_expected)
    summary["exact_expected"] = to_string(*report.exact_expected);
  j["summary"] = std::move(summary);
  auto trace = json::array();
  for (const TraceEntry& e : report.trace) {
    json te;
    te["arrival"] = e.arrival;
    te["levels_before"] = e.state_before;
    te["levels_after"] = e.state_after;
    te["delta_p"] = eta_linear_to_json(e.delta_p);
    te["delta_alpha"] = eta_linear_to_json(e.delta_alpha);
    te["beta"] = eta_linear_to_json(e.beta);
    te["slack_min"] = eta_linear_to_json(e.slack_min);
    trace.push_back(std::move(te));
  }
  j["trace"] = std::move(trace);
  return j;
}

json ratio_estimate_to_json(const RatioEstimate& est) {
  json j;
  j["mean"] = est.mean;
  j["ci99_half_width"] = est.half_width;
  j["trials"] = est.trials;
  j["seed"] = est.seed;
  return j;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file: " + path);
  out << contents;
}

}  // namespace d2match
