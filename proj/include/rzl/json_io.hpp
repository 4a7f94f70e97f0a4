#pragma once

#include "rzl/analysis.hpp"
#include "rzl/duality.hpp"
#include "rzl/limits.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace rzl {

// Deterministic JSON forms. Every rational serializes as the canonical
// string "p/q" (never decimals), points as coordinate arrays, big integers
// as decimal strings; keys come out sorted, so equal values dump to equal
// bytes. All pairs below round-trip bit-exactly.

nlohmann::json to_json(const Rational& q);
nlohmann::json to_json(const Point& x);
nlohmann::json to_json(const AffineFn& a);
nlohmann::json to_json(const Simplex& s);
nlohmann::json to_json(const RationalPolyhedron& p);
nlohmann::json to_json(const PwlFunction& f);
nlohmann::json to_json(const IntervalPwl& f);
nlohmann::json to_json(const DegreeResult& r);
nlohmann::json to_json(const ConsequenceResult& r);
nlohmann::json to_json(const ConsistencyResult& r);
nlohmann::json to_json(const ZeroSetResult& r);
nlohmann::json to_json(const Presentation& p);
nlohmann::json to_json(const MvGeneratorResult& r);
nlohmann::json to_json(const MvGeneratedResult& r);
nlohmann::json to_json(const MvPreservingResult& r);
nlohmann::json to_json(const LGeneratedWitness& r);
nlohmann::json to_json(const LimitCheckResult& r);
nlohmann::json to_json(const ApproximationResult& r);

Rational rational_from_json(const nlohmann::json& j);
Point point_from_json(const nlohmann::json& j);
Simplex simplex_from_json(int ambient, const nlohmann::json& j);
RationalPolyhedron polyhedron_from_json(const nlohmann::json& j);
PwlFunction pwl_from_json(const nlohmann::json& j);
IntervalPwl interval_pwl_from_json(const nlohmann::json& j);

/// Accepts {"class", "n", "generator"} where the generator is a formula
/// string, a piecewise-linear dump, or an envelope-pair dump. A formula
/// string with inexact scalars additionally needs a "precision" field and
/// produces an enclosure presentation.
Presentation presentation_from_json(const nlohmann::json& j,
                                    const ScalarRegistry* registry = nullptr);

/// Validates against the JSON-Schema subset the shipped schema files use:
/// "type", "required", "properties", "items", "enum", "pattern". Returns
/// nullopt when the value conforms, otherwise the first violation found
/// (with a JSON-path-style location).
std::optional<std::string> validate_against_schema(const nlohmann::json& value,
                                                   const nlohmann::json& schema);

}  // namespace rzl
