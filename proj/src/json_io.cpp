#include "rzl/json_io.hpp"

#include "rzl/parser.hpp"

#include <regex>
#include <utility>
#include <vector>

namespace rzl {

using nlohmann::json;

nlohmann::json to_json(const Rational& q) { return rat_to_string(q); }

nlohmann::json to_json(const Point& x) {
  json out = json::array();
  for (const Rational& c : x) out.push_back(to_json(c));
  return out;
}

nlohmann::json to_json(const AffineFn& a) {
  json coeff = json::array();
  for (const Rational& c : a.coeff) coeff.push_back(to_json(c));
  return json{{"coeff", std::move(coeff)}, {"constant", to_json(a.constant)}};
}

nlohmann::json to_json(const Simplex& s) {
  json out = json::array();
  for (const Point& v : s.vertices()) out.push_back(to_json(v));
  return out;
}

nlohmann::json to_json(const RationalPolyhedron& p) {
  json pieces = json::array();
  for (const Simplex& s : p.pieces()) pieces.push_back(to_json(s));
  return json{{"dim", p.ambient()}, {"simplices", std::move(pieces)}};
}

nlohmann::json to_json(const PwlFunction& f) {
  json cells = json::array();
  for (std::size_t i = 0; i < f.cells().size(); ++i) {
    json cell = to_json(f.affines()[i]);
    cell["vertices"] = to_json(f.cells()[i]);
    cells.push_back(std::move(cell));
  }
  return json{{"dim", f.dim()}, {"cells", std::move(cells)}};
}

nlohmann::json to_json(const IntervalPwl& f) {
  return json{{"precision", f.precision}, {"lower", to_json(f.lower)}, {"upper", to_json(f.upper)}};
}

nlohmann::json to_json(const DegreeResult& r) {
  if (r.kind == DegreeResult::Kind::Exact) {
    json out{{"kind", "exact"}, {"value", to_json(r.value)}};
    if (r.witness) out["witness"] = to_json(*r.witness);
    return out;
  }
  return json{{"kind", "interval"},
              {"lo", to_json(r.lo)},
              {"hi", to_json(r.hi)},
              {"precision", r.precision}};
}

nlohmann::json to_json(const ConsequenceResult& r) {
  json out;
  switch (r.verdict) {
    case ConsequenceResult::Verdict::Yes: out["verdict"] = "yes"; break;
    case ConsequenceResult::Verdict::No: out["verdict"] = "no"; break;
    case ConsequenceResult::Verdict::Unknown: out["verdict"] = "unknown"; break;
  }
  if (r.countermodel) out["countermodel"] = to_json(*r.countermodel);
  if (r.conclusion_value) out["conclusion_value"] = to_json(*r.conclusion_value);
  if (r.precision) out["precision"] = *r.precision;
  return out;
}

nlohmann::json to_json(const ConsistencyResult& r) {
  json out{{"consistent", r.consistent}};
  if (r.model) out["model"] = to_json(*r.model);
  return out;
}

nlohmann::json to_json(const ZeroSetResult& r) {
  if (r.exact) return json{{"kind", "exact"}, {"set", to_json(r.outer)}};
  json out{{"kind", "interval"}, {"outer", to_json(r.outer)}, {"inner", to_json(r.inner)}};
  if (r.precision) out["precision"] = *r.precision;
  return out;
}

nlohmann::json to_json(const Presentation& p) {
  json gen = p.is_exact() ? to_json(p.exact_generator()) : to_json(p.interval_generator());
  return json{{"class", to_string(p.algebra())}, {"n", p.arity()}, {"generator", std::move(gen)}};
}

nlohmann::json to_json(const MvGeneratorResult& r) {
  return json{{"k", r.k.str()}, {"witness", to_json(r.witness)}};
}

nlohmann::json to_json(const MvGeneratedResult& r) {
  if (r.known) {
    json out{{"verdict", "yes"}};
    if (r.k) out["k"] = r.k->str();
    if (r.witness) out["witness"] = to_json(*r.witness);
    return out;
  }
  json out{{"verdict", "unknown"}};
  if (r.outer) out["outer"] = to_json(*r.outer);
  if (r.inner) out["inner"] = to_json(*r.inner);
  if (r.precision) out["precision"] = *r.precision;
  return out;
}

nlohmann::json to_json(const MvPreservingResult& r) {
  json out{{"preserving", r.preserving}};
  if (r.offender) out["offender"] = *r.offender;
  return out;
}

nlohmann::json to_json(const LGeneratedWitness& r) {
  return json{{"k", r.k.str()},
              {"term_function", to_json(r.term_function)},
              {"witness", to_json(r.witness)},
              {"leq_certificate", r.leq_certificate},
              {"ksum_certificate", r.ksum_certificate}};
}

nlohmann::json to_json(const LimitCheckResult& r) {
  json rows = json::array();
  for (const LimitCheckRow& row : r.rows)
    rows.push_back(json{{"n", row.n},
                        {"delta", to_json(row.delta)},
                        {"bound", to_json(row.bound)},
                        {"holds", row.holds}});
  json out{{"mode", r.mode == LimitCheckResult::Mode::Rate ? "rate" : "threshold"},
           {"rows", std::move(rows)},
           {"all_hold", r.all_hold}};
  if (r.least_index) out["least_index"] = *r.least_index;
  return out;
}

nlohmann::json to_json(const ApproximationResult& r) {
  return json{{"interpolant", to_json(r.interpolant)}, {"error_bound", to_json(r.error_bound)}};
}

namespace {

const json& need(const json& j, const char* key, const char* what) {
  if (!j.is_object() || !j.contains(key))
    throw parse_error(std::string(what) + ": missing \"" + key + "\"");
  return j.at(key);
}

int need_int(const json& j, const char* key, const char* what) {
  const json& v = need(j, key, what);
  if (!v.is_number_integer())
    throw parse_error(std::string(what) + ": \"" + key + "\" must be an integer");
  return v.get<int>();
}

}  // namespace

Rational rational_from_json(const nlohmann::json& j) {
  if (!j.is_string()) throw parse_error("rational values are \"p/q\" strings");
  return rat_from_string(j.get<std::string>());
}

Point point_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw parse_error("a point is an array of \"p/q\" strings");
  Point out;
  out.reserve(j.size());
  for (const json& c : j) out.push_back(rational_from_json(c));
  return out;
}

Simplex simplex_from_json(int ambient, const nlohmann::json& j) {
  if (!j.is_array() || j.empty())
    throw parse_error("a simplex is a nonempty array of points");
  std::vector<Point> vs;
  vs.reserve(j.size());
  for (const json& v : j) vs.push_back(point_from_json(v));
  return Simplex(ambient, std::move(vs));
}

RationalPolyhedron polyhedron_from_json(const nlohmann::json& j) {
  const int dim = need_int(j, "dim", "polyhedron");
  const json& pieces = need(j, "simplices", "polyhedron");
  if (!pieces.is_array()) throw parse_error("polyhedron: \"simplices\" must be an array");
  std::vector<Simplex> out;
  out.reserve(pieces.size());
  for (const json& s : pieces) out.push_back(simplex_from_json(dim, s));
  if (out.empty()) return RationalPolyhedron::empty(dim);
  return RationalPolyhedron::from_simplices(dim, std::move(out));
}

PwlFunction pwl_from_json(const nlohmann::json& j) {
  const int dim = need_int(j, "dim", "pwl");
  const json& cells = need(j, "cells", "pwl");
  if (!cells.is_array() || cells.empty())
    throw parse_error("pwl: \"cells\" must be a nonempty array");
  std::vector<Simplex> simplices;
  std::vector<AffineFn> affines;
  simplices.reserve(cells.size());
  affines.reserve(cells.size());
  for (const json& cell : cells) {
    simplices.push_back(simplex_from_json(dim, need(cell, "vertices", "pwl cell")));
    const json& coeff = need(cell, "coeff", "pwl cell");
    if (!coeff.is_array()) throw parse_error("pwl cell: \"coeff\" must be an array");
    AffineFn a;
    a.coeff.reserve(coeff.size());
    for (const json& c : coeff) a.coeff.push_back(rational_from_json(c));
    a.constant = rational_from_json(need(cell, "constant", "pwl cell"));
    affines.push_back(std::move(a));
  }
  return PwlFunction(dim, std::move(simplices), std::move(affines));
}

IntervalPwl interval_pwl_from_json(const nlohmann::json& j) {
  IntervalPwl out{need_int(j, "precision", "envelope pair"),
                  pwl_from_json(need(j, "lower", "envelope pair")),
                  pwl_from_json(need(j, "upper", "envelope pair"))};
  if (out.precision < 0) throw parse_error("envelope pair: precision must be >= 0");
  return out;
}

Presentation presentation_from_json(const nlohmann::json& j, const ScalarRegistry* registry) {
  const json& cls_j = need(j, "class", "presentation");
  if (!cls_j.is_string()) throw parse_error("presentation: \"class\" must be a string");
  const std::string cls_s = cls_j.get<std::string>();
  AlgebraClass cls;
  if (cls_s == "MV")
    cls = AlgebraClass::MV;
  else if (cls_s == "DMV")
    cls = AlgebraClass::DMV;
  else if (cls_s == "RMV")
    cls = AlgebraClass::RMV;
  else
    throw parse_error("presentation: unknown class '" + cls_s + "'");

  const int n = need_int(j, "n", "presentation");
  if (n < 0) throw parse_error("presentation: n must be >= 0");
  const json& gen = need(j, "generator", "presentation");

  if (gen.is_string()) {
    Formula f = parse_formula(gen.get<std::string>(), registry);
    if (f.arity() > n)
      throw parse_error("presentation: generator uses v" + std::to_string(f.arity()) +
                        " but n = " + std::to_string(n));
    if (f.inexact_scalar_count() == 0) return Presentation::exact(cls, compile(f, n));
    if (!j.contains("precision"))
      throw parse_error(
          "presentation: a generator with inexact scalars needs a \"precision\" field");
    const int k = need_int(j, "precision", "presentation");
    if (k < 0) throw parse_error("presentation: precision must be >= 0");
    if (cls != AlgebraClass::RMV)
      throw parse_error("presentation: enclosure generators present RMV algebras only");
    return Presentation::enclosure(compile_interval(f, k, n));
  }
  if (gen.is_object() && gen.contains("cells")) {
    PwlFunction f = pwl_from_json(gen);
    if (f.dim() != n) throw parse_error("presentation: generator dimension disagrees with n");
    return Presentation::exact(cls, std::move(f));
  }
  if (gen.is_object() && gen.contains("lower")) {
    if (cls != AlgebraClass::RMV)
      throw parse_error("presentation: enclosure generators present RMV algebras only");
    IntervalPwl f = interval_pwl_from_json(gen);
    if (f.lower.dim() != n)
      throw parse_error("presentation: generator dimension disagrees with n");
    return Presentation::enclosure(std::move(f));
  }
  throw parse_error(
      "presentation: generator must be a formula string, a pwl dump, or an envelope-pair dump");
}

namespace {

std::optional<std::string> validate_rec(const json& v, const json& schema,
                                        const std::string& path) {
  if (!schema.is_object()) return "schema at " + path + " is not an object";

  if (schema.contains("type")) {
    const std::string t = schema.at("type").get<std::string>();
    const bool ok = (t == "object" && v.is_object()) || (t == "array" && v.is_array()) ||
                    (t == "string" && v.is_string()) ||
                    (t == "integer" && v.is_number_integer()) ||
                    (t == "number" && v.is_number()) || (t == "boolean" && v.is_boolean());
    if (!ok) return path + ": expected " + t + ", got " + std::string(v.type_name());
  }

  if (schema.contains("enum")) {
    bool hit = false;
    for (const json& allowed : schema.at("enum"))
      if (v == allowed) {
        hit = true;
        break;
      }
    if (!hit) return path + ": value not in enum";
  }

  if (schema.contains("pattern") && v.is_string()) {
    const std::regex re(schema.at("pattern").get<std::string>());
    if (!std::regex_search(v.get<std::string>(), re))
      return path + ": string does not match pattern " + schema.at("pattern").get<std::string>();
  }

  if (schema.contains("required") && v.is_object())
    for (const json& key : schema.at("required"))
      if (!v.contains(key.get<std::string>()))
        return path + ": missing required key \"" + key.get<std::string>() + "\"";

  if (schema.contains("properties") && v.is_object())
    for (const auto& [key, sub] : schema.at("properties").items())
      if (v.contains(key))
        if (auto err = validate_rec(v.at(key), sub, path + "." + key)) return err;

  if (schema.contains("items") && v.is_array()) {
    std::size_t i = 0;
    for (const json& item : v) {
      if (auto err = validate_rec(item, schema.at("items"), path + "[" + std::to_string(i) + "]"))
        return err;
      ++i;
    }
  }

  return std::nullopt;
}

}  // namespace

std::optional<std::string> validate_against_schema(const nlohmann::json& value,
                                                   const nlohmann::json& schema) {
  return validate_rec(value, schema, "$");
}

}  // namespace rzl
