#pragma once

#include <string>

#include "json.hpp"

#include "curvelink/bundles.hpp"
#include "curvelink/invariant.hpp"
#include "curvelink/selflinking.hpp"
#include "curvelink/trig_curve.hpp"

namespace curvelink {

/// Curve-spec schema:
///   {"dim": n, "coords": [{"const": c0, "cos": {"1": a1, ...},
///                          "sin": {"2": b2, ...}}, ...]}
/// or a preset reference {"preset": "example1", "A": 1.0}.
/// Harmonic keys are integer strings >= 1. Violations raise SchemaError
/// naming the offending field.
TrigCurve curve_from_json(const nlohmann::json& spec);
nlohmann::json curve_to_json(const TrigCurve& curve);

/// Parses either a JSON file path or an inline "preset:name?A=value" spec.
TrigCurve load_curve(const std::string& arg);

nlohmann::json to_json(const RegularityReport& rep);
nlohmann::json to_json(const InvariantResult& result);
nlohmann::json to_json(const IntersectionRecord& record);

/// Version tag carried by every machine-readable report.
inline constexpr int kReportSchemaVersion = 1;

}  // namespace curvelink
