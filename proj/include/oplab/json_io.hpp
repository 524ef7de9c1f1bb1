#pragma once

#include <string>

#include "json.hpp"
#include "oplab/operators.hpp"
#include "oplab/verify.hpp"

namespace oplab {

// Operator document:
//   {"domain": {"p": "<decimal|inf>", "blocks": [n1,...]},
//    "codomain": {...},
//    "entries": [{"i": 1, "j": 1, "matrix": [[...]]}, ...]}
// Indices are 1-based; every grid pair must appear exactly once; matrices are
// row-major arrays of rows. Errors name the offending field.
BlockOperator operator_from_json(const nlohmann::json& j);
nlohmann::ordered_json operator_to_json(const BlockOperator& T);

BlockOperator read_operator_file(const std::string& path);
void write_operator_file(const std::string& path, const BlockOperator& T);

// Report document:
//   {"suite": str, "seed": u64, "cases": int,
//    "violations": [{"case_seed": u64, "desc": str, "slack": real}],
//    "max_slack": real, "wall_time_s": real}
nlohmann::ordered_json report_to_json(const VerificationReport& rep);
VerificationReport report_from_json(const nlohmann::json& j);

// Canonical serialized form (two-space indent, trailing newline). With
// mask_wall_time the wall_time_s field is zeroed first; reruns of a suite
// under any thread count must then match byte for byte.
std::string report_to_string(const VerificationReport& rep,
                             bool mask_wall_time = false);

void write_report_file(const std::string& path, const VerificationReport& rep);
VerificationReport read_report_file(const std::string& path);

// One CSV row per case: case_index,case_seed,checks,violations,max_slack
std::string rows_to_csv(const std::vector<CaseRow>& rows);

}  // namespace oplab
