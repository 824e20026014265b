#pragma once

#include <string>

#include <json.hpp>

#include "redlight/kinematics.hpp"
#include "redlight/solve_report.hpp"

namespace redlight {

// Thrown on schema violations; message carries the offending field path.
struct SchemaError : std::runtime_error {
  explicit SchemaError(const std::string& msg) : std::runtime_error(msg) {}
};

// Problem JSON:
//   {"alpha":..,"beta":..,"v_max":..,"v0":..,"d":..,"L":..,
//    "dist":{"kind":"uniform","q":..}
//          |{"kind":"exponential","lambda":..}
//          |{"kind":"excess","cdf_knots":[[x,Theta],...],"mean":..}}
// Unknown fields are rejected.
ProblemSpec problem_from_json(const nlohmann::json& j);
nlohmann::json problem_to_json(const ProblemSpec& p);

// Trajectory JSON: {"segments":[{"kind":"alpha","t_start":..,"duration":..,
// "v_start":..},...]}; "inf" encodes an infinite terminal hold.
Trajectory trajectory_from_json(const nlohmann::json& j, const ProblemSpec& p);
nlohmann::json trajectory_to_json(const Trajectory& t);

nlohmann::json report_to_json(const SolveReport& r);

nlohmann::json validation_to_json(const ValidationResult& r);

// 17 significant digits; round-trips exactly.
std::string format_double(double v);

}  // namespace redlight
