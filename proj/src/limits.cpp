#include "rzl/limits.hpp"

#include "rzl/config.hpp"
#include "rzl/errors.hpp"
#include "rzl/parser.hpp"

#include <json.hpp>

#include <algorithm>
#include <memory>

namespace rzl {

IntervalPwl sandwich(const Formula& f, int k) { return compile_interval(f, k); }

namespace {

Rational sup_distance(const Formula& a, const Formula& b) {
  const int dim = std::max(a.arity(), b.arity());
  PwlFunction fa = compile(a, dim);
  PwlFunction fb = compile(b, dim);
  return pwl_max(apply_connective(PwlOp::ChangDist, fa, &fb)).value;
}

LimitCheckResult run_rows(const FormulaSequence& seq, const Formula& target, int upto,
                          const std::function<Rational(int)>& bound_at,
                          LimitCheckResult::Mode mode) {
  if (upto < 0) throw domain_error("check_limit: upto must be nonnegative");
  LimitCheckResult out;
  out.mode = mode;
  out.rows.reserve(upto + 1);
  std::optional<Rational> prev_rate;
  for (int n = 0; n <= upto; ++n) {
    Formula fn = seq.formula_at(n);
    Rational bound = bound_at(n);
    if (mode == LimitCheckResult::Mode::Rate) {
      Rational rate = Rational(1) - bound;
      if (prev_rate && rate < *prev_rate)
        throw domain_error("check_limit: declared rate is not nondecreasing");
      prev_rate = rate;
    }
    LimitCheckRow row;
    row.n = n;
    row.delta = sup_distance(fn, target);
    row.bound = std::move(bound);
    row.holds = row.delta <= row.bound;
    out.rows.push_back(std::move(row));
  }
  out.all_hold = std::all_of(out.rows.begin(), out.rows.end(),
                             [](const LimitCheckRow& r) { return r.holds; });
  if (mode == LimitCheckResult::Mode::Threshold) {
    std::optional<int> least;
    for (int n = upto; n >= 0 && out.rows[n].holds; --n) least = n;
    out.least_index = least;
  }
  return out;
}

}  // namespace

LimitCheckResult check_limit(const FormulaSequence& seq, const Formula& target, int upto) {
  if (!seq.has_rate())
    throw domain_error("check_limit: rate mode needs a declared rate (or pass a threshold)");
  return run_rows(
      seq, target, upto,
      [&](int n) { return Rational(1) - seq.rate_at(n); }, LimitCheckResult::Mode::Rate);
}

LimitCheckResult check_limit(const FormulaSequence& seq, const Formula& target, int upto,
                             const Rational& r) {
  if (!in_unit_interval(r) || r == 1)
    throw domain_error("check_limit: threshold must lie in [0,1)");
  return run_rows(
      seq, target, upto, [&](int) { return Rational(1) - r; },
      LimitCheckResult::Mode::Threshold);
}

ApproximationResult approximate_continuous(int n, int m, const std::vector<Rational>& samples,
                                           const Rational& lipschitz) {
  if (n < 0 || n > config::kMaxCubeDim)
    throw domain_error("approximate_continuous: dimension out of range");
  if (m < 1) throw domain_error("approximate_continuous: mesh count must be positive");
  if (lipschitz < 0) throw domain_error("approximate_continuous: negative Lipschitz bound");
  std::size_t expected = 1;
  for (int i = 0; i < n; ++i) expected *= static_cast<std::size_t>(m) + 1;
  if (samples.size() != expected)
    throw domain_error("approximate_continuous: expected " + std::to_string(expected) +
                       " samples, got " + std::to_string(samples.size()));
  for (const Rational& s : samples)
    if (!in_unit_interval(s)) throw domain_error("approximate_continuous: sample outside [0,1]");

  auto sample_at = [&](const Point& grid_point) -> const Rational& {
    std::size_t index = 0;
    for (int d = 0; d < n; ++d) {
      Rational scaled = grid_point[d] * m;
      index = index * (m + 1) + static_cast<std::size_t>(rat_num(scaled));
    }
    return samples[index];
  };

  std::vector<Simplex> base = kuhn_complex(n);
  std::vector<Simplex> cells;
  std::vector<AffineFn> affines;
  std::vector<int> offset(n, 0);
  const Rational mesh(1, m);
  while (true) {
    for (const Simplex& cell : base) {
      std::vector<Point> vs;
      vs.reserve(cell.vertices().size());
      std::vector<Rational> vals;
      vals.reserve(cell.vertices().size());
      for (const Point& v : cell.vertices()) {
        Point scaled(n);
        for (int d = 0; d < n; ++d) scaled[d] = (Rational(offset[d]) + v[d]) * mesh;
        vals.push_back(sample_at(scaled));
        vs.push_back(std::move(scaled));
      }
      affines.push_back(affine_through(vs, vals));
      cells.emplace_back(n, std::move(vs));
      if (cells.size() > config::cell_cap())
        throw cell_cap_exceeded(cells.size(), config::cell_cap());
    }
    int d = n - 1;
    for (; d >= 0; --d) {
      if (++offset[d] < m) break;
      offset[d] = 0;
    }
    if (d < 0) break;
  }
  ApproximationResult out{PwlFunction(n, std::move(cells), std::move(affines)),
                          lipschitz * n * Rational(1, m)};
  return out;
}

FormulaSequence parse_sequence_spec(const std::string& json_text,
                                    const ScalarRegistry* registry) {
  nlohmann::json spec;
  try {
    spec = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw parse_error(std::string("sequence spec: ") + e.what());
  }
  if (!spec.is_object() || !spec.contains("kind") || !spec["kind"].is_string())
    throw parse_error("sequence spec: object with a string \"kind\" required");
  const std::string kind = spec["kind"].get<std::string>();

  if (kind == "scalar-ramp") {
    if (!spec.contains("formula") || !spec["formula"].is_string())
      throw parse_error("sequence spec: scalar-ramp needs a \"formula\" string");
    const std::string schedule =
        spec.contains("schedule") ? spec["schedule"].get<std::string>() : "one-minus-pow2";
    if (schedule != "one-minus-pow2")
      throw parse_error("sequence spec: unknown schedule '" + schedule + "'");
    Formula base = parse_formula(spec["formula"].get<std::string>(), registry);
    FormulaSequence out;
    out.formula_at = [base](int i) {
      if (i < 0) throw domain_error("sequence index must be nonnegative");
      return Formula::delta(Scalar(Rational(1) - pow2_neg(i)), base);
    };
    out.rate_at = [](int i) {
      if (i < 0) throw domain_error("sequence index must be nonnegative");
      return Rational(1) - pow2_neg(i);
    };
    return out;
  }

  if (kind == "explicit") {
    if (!spec.contains("formulas") || !spec["formulas"].is_array() || spec["formulas"].empty())
      throw parse_error("sequence spec: explicit needs a nonempty \"formulas\" array");
    auto formulas = std::make_shared<std::vector<Formula>>();
    for (const auto& item : spec["formulas"]) {
      if (!item.is_string()) throw parse_error("sequence spec: formulas must be strings");
      formulas->push_back(parse_formula(item.get<std::string>(), registry));
    }
    FormulaSequence out;
    out.formula_at = [formulas](int i) {
      if (i < 0 || i >= static_cast<int>(formulas->size()))
        throw domain_error("sequence generator failure: index " + std::to_string(i) +
                           " outside the explicit list");
      return (*formulas)[i];
    };
    if (spec.contains("rates")) {
      if (!spec["rates"].is_array() || spec["rates"].size() != spec["formulas"].size())
        throw parse_error("sequence spec: rates must parallel formulas");
      auto rates = std::make_shared<std::vector<Rational>>();
      for (const auto& item : spec["rates"]) {
        if (!item.is_string()) throw parse_error("sequence spec: rates must be \"p/q\" strings");
        Rational r = rat_from_string(item.get<std::string>());
        if (!in_unit_interval(r)) throw parse_error("sequence spec: rate outside [0,1]");
        rates->push_back(std::move(r));
      }
      out.rate_at = [rates](int i) {
        if (i < 0 || i >= static_cast<int>(rates->size()))
          throw domain_error("sequence generator failure: rate index out of range");
        return (*rates)[i];
      };
    }
    return out;
  }

  throw parse_error("sequence spec: unknown kind '" + kind + "'");
}

}  // namespace rzl
