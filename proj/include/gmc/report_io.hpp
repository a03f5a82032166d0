#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "gmc/bounds.hpp"
#include "gmc/distribution.hpp"
#include "gmc/harness.hpp"
#include "gmc/plan.hpp"

namespace gmc {

using Json = nlohmann::json;

// JSON keys are snake_case and emitted in alphabetical order. An infinite q
// is written as the string "inf".

Json to_json(const Distribution& dist);
Distribution distribution_from_json(const Json& j);

Json to_json(const ConeSpec& cone);
ConeSpec cone_from_json(const Json& j);

Json to_json(const StagePlan& plan);
StagePlan plan_from_json(const Json& j);

Json to_json(const RunRecord& record);
RunRecord run_record_from_json(const Json& j);

Json to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const Json& j);

Json to_json(const ExperimentReport& report);
/// Rows are not part of the JSON form and come back empty.
ExperimentReport report_from_json(const Json& j);

Json to_json(const AdversaryPair& pair);

/// Parses a real that may be written as a number or as "inf"/"infinity".
double real_from_json(const Json& j);
double parse_real(const std::string& text);

/// "3/4" or "1" -> exact rational.
Rational parse_rational(const std::string& text);

/// One row per replication: lane,estimate,error,n1,m_prime,n2,total_cost
void write_replications_csv(std::ostream& out, const std::vector<ReplicationRow>& rows);

}  // namespace gmc
