#pragma once

#include <string>

#include <json.hpp>

#include "carnot/approximator.hpp"
#include "carnot/verify.hpp"

namespace carnot {

using Json = nlohmann::ordered_json;

Json group_to_json(const Stratification& g);
/// Reads the group-definition format; brackets are validated by build_algebra.
GroupPtr group_from_json(const Json& j);
GroupPtr read_group_file(const std::string& path);

Json polynomial_to_json(const StratifiedPolynomial& p);
StratifiedPolynomial polynomial_from_json(const Json& j, const GroupPtr& g);

Json operator_to_json(const DiffOperator& op);
DiffOperator operator_from_json(const Json& j, const GroupPtr& g);

/// Monomial keys are written as expressions such as "x*y" or "1".
Json free_assignment_to_json(const FreeAssignment& free, const GroupPtr& g);
FreeAssignment free_assignment_from_json(const Json& j, const GroupPtr& g);

Json approx_result_to_json(const ApproxResult& r, const GroupPtr& g);
ApproxResult approx_result_from_json(const Json& j, const GroupPtr& g);

Json decay_report_to_json(const DecayReport& r);
DecayReport decay_report_from_json(const Json& j);

Json barrier_report_to_json(const BarrierReport& r);
Json mc_estimate_to_json(const MCEstimate& e);
Json char_scan_to_json(const CharScanResult& r);

Json read_json_file(const std::string& path);

}  // namespace carnot
