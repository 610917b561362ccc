#include <doctest.h>

#include "d2match/certificates.hpp"
#include "d2match/instance.hpp"
#include "d2match/io_json.hpp"

using namespace d2match;

namespace {

// Minimal structural validator for the shipped schema subset: type,
// required, properties, items, enum. Enough to keep reports honest against
// schemas/ without pulling in a full JSON-Schema engine.
bool validates(const json& schema, const json& value);

bool type_matches(const std::string& type, const json& value) {
  if (type == "object") return value.is_object();
  if (type == "array") return value.is_array();
  if (type == "string") return value.is_string();
  if (type == "integer") return value.is_number_integer();
  if (type == "number") return value.is_number();
  if (type == "boolean") return value.is_boolean();
  return false;
}

bool validates(const json& schema, const json& value) {
  if (schema.contains("type") && !type_matches(schema["type"].get<std::string>(), value))
    return false;
  if (schema.contains("enum")) {
    bool any = false;
    for (const auto& e : schema["enum"]) any = any || e == value;
    if (!any) return false;
  }
  if (schema.contains("required"))
    for (const auto& key : schema["required"])
      if (!value.contains(key.get<std::string>())) return false;
  if (schema.contains("properties") && value.is_object())
    for (const auto& [key, sub] : schema["properties"].items())
      if (value.contains(key) && !validates(sub, value[key])) return false;
  if (schema.contains("items") && value.is_array())
    for (const auto& item : value)
      if (!validates(schema["items"], item)) return false;
  return true;
}

json load_schema(const std::string& name) {
  return json::parse(read_file(std::string(D2MATCH_SCHEMA_DIR) + "/" + name));
}

}  // namespace

TEST_CASE("decimal_string expands rationals exactly") {
  CHECK(decimal_string(Rational(3, 2), 3) == "1.500");
  CHECK(decimal_string(Rational(-1, 3), 4) == "-0.3333");
  CHECK(decimal_string(Rational(2), 0) == "2");
  CHECK(decimal_string(Rational(0), 2) == "0.00");
  CHECK(decimal_string(Rational(23, 32), 5) == "0.71875");
}

TEST_CASE("instance JSON round-trips through the json view") {
  const Instance inst = parse_instance(R"({"offline":3,"arrivals":[[0,2],[1]]})");
  CHECK(instance_from_json(instance_to_json(inst)) == inst);
  CHECK(validates(load_schema("instance.schema.json"), instance_to_json(inst)));
}

TEST_CASE("certificate reports serialize against the shipped schema") {
  CertificateOptions opts;
  opts.with_trace = true;
  opts.with_oracle = true;
  const Instance inst = parse_instance(R"({"offline":2,"arrivals":[[0,1],[0]]})");
  const json j = certificate_report_to_json(certify_integral_run(inst, opts));
  CHECK(j["kind"] == "integral");
  CHECK(j["summary"]["opt"] == 2);
  CHECK(j["summary"]["P"]["a"] == "3/2");
  CHECK(j["summary"]["gamma"]["name"] == "eta");
  CHECK(j["trace"].size() == 2);
  CHECK(validates(load_schema("certificate_report.schema.json"), j));

  const json jf = certificate_report_to_json(certify_fractional_run(inst));
  CHECK(jf["summary"]["gamma"]["name"] == "3/4");
  CHECK(validates(load_schema("certificate_report.schema.json"), jf));
}

TEST_CASE("matching and reduction map serialization") {
  const Instance inst = parse_instance(R"({"offline":2,"arrivals":[[0,1],[0]]})");
  const auto [reduced, map] = reduce_to_exact_degree2(inst, 3);
  const ReductionMap back = reduction_map_from_json(reduction_map_to_json(map));
  CHECK(back.m == map.m);
  CHECK(back.lstar() == map.lstar());
  CHECK(back.entries.size() == map.entries.size());

  IntegralMatching m = IntegralMatching::empty(2);
  m.partner[0] = 1;
  m.size = 1;
  const json jm = matching_to_json(m);
  CHECK(jm["size"] == 1);
  CHECK(jm["pairs"].size() == 1);
}
