#pragma once

#include <string>

#include <json.hpp>

#include "d2match/certificates.hpp"
#include "d2match/estimate.hpp"
#include "d2match/eta.hpp"
#include "d2match/instance.hpp"

namespace d2match {

using json = nlohmann::ordered_json;

json instance_to_json(const Instance& inst);
Instance instance_from_json(const json& j);

json matching_to_json(const IntegralMatching& m);

json reduction_map_to_json(const ReductionMap& map);
ReductionMap reduction_map_from_json(const json& j);

/// {"a": "p/q", "b": "p/q", "approx": <double>} - the exact pair a + b*eta.
json eta_linear_to_json(const EtaLinear& v);

json certificate_report_to_json(const CertificateReport& report);

json ratio_estimate_to_json(const RatioEstimate& est);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace d2match
