#include "rzl/analysis.hpp"

#include "rzl/errors.hpp"

#include <algorithm>

namespace rzl {

namespace {

void require_exact(const Formula& f, const char* what) {
  if (f.inexact_scalar_count() > 0)
    throw domain_error(std::string(what) +
                       ": formula has inexact scalars; use the precision-index overload");
}

DegreeResult exact_extremum(const PwlFunction& f, bool minimize) {
  ValueWitness w = minimize ? pwl_min(f) : pwl_max(f);
  DegreeResult out;
  out.kind = DegreeResult::Kind::Exact;
  out.value = std::move(w.value);
  out.witness = std::move(w.where);
  return out;
}

DegreeResult interval_extremum(const Formula& f, int k, bool minimize) {
  IntervalPwl iv = compile_interval(f, k);
  DegreeResult out;
  out.kind = DegreeResult::Kind::Interval;
  out.lo = (minimize ? pwl_min(iv.lower) : pwl_max(iv.lower)).value;
  out.hi = (minimize ? pwl_min(iv.upper) : pwl_max(iv.upper)).value;
  out.precision = k;
  return out;
}

}  // namespace

DegreeResult truth_degree(const Formula& f) {
  require_exact(f, "truth_degree");
  return exact_extremum(compile(f), true);
}

DegreeResult truth_degree(const Formula& f, int k) {
  if (f.inexact_scalar_count() == 0) return truth_degree(f);
  return interval_extremum(f, k, true);
}

DegreeResult truth_degree(const PwlFunction& f) { return exact_extremum(f, true); }

DegreeResult provability_degree(const Formula& f) { return truth_degree(f); }
DegreeResult provability_degree(const Formula& f, int k) { return truth_degree(f, k); }
DegreeResult provability_degree(const PwlFunction& f) { return truth_degree(f); }

DegreeResult unit_norm(const Formula& f) {
  require_exact(f, "unit_norm");
  return exact_extremum(compile(f), false);
}

DegreeResult unit_norm(const Formula& f, int k) {
  if (f.inexact_scalar_count() == 0) return unit_norm(f);
  return interval_extremum(f, k, false);
}

DegreeResult unit_norm(const PwlFunction& f) { return exact_extremum(f, false); }

DegreeResult integral_state(const PwlFunction& f) {
  DegreeResult out;
  out.kind = DegreeResult::Kind::Exact;
  out.value = pwl_integral(f);
  return out;
}

DegreeResult integral_state(const Formula& f) {
  require_exact(f, "integral_state");
  return integral_state(compile(f));
}

DegreeResult integral_state(const Formula& f, int k) {
  if (f.inexact_scalar_count() == 0) return integral_state(f);
  IntervalPwl iv = compile_interval(f, k);
  DegreeResult out;
  out.kind = DegreeResult::Kind::Interval;
  out.lo = pwl_integral(iv.lower);
  out.hi = pwl_integral(iv.upper);
  out.precision = k;
  return out;
}

RationalPolyhedron one_set(const std::vector<Formula>& formulas, int dim) {
  RationalPolyhedron acc = RationalPolyhedron::full_cube(dim);
  for (const Formula& f : formulas) {
    require_exact(f, "one_set");
    // {x : f(x) = 1} is the zero set of the negation.
    RationalPolyhedron z = pwl_zero_set(compile(Formula::neg(f), dim));
    acc = polyhedron_intersection(acc, z);
    if (acc.is_empty()) break;
  }
  return acc;
}

namespace {

int shared_dim(const std::vector<Formula>& premises, const Formula& conclusion) {
  int dim = conclusion.arity();
  for (const Formula& f : premises) dim = std::max(dim, f.arity());
  return dim;
}

}  // namespace

ConsequenceResult consequence(const std::vector<Formula>& premises, const Formula& conclusion) {
  require_exact(conclusion, "consequence");
  const int dim = shared_dim(premises, conclusion);
  RationalPolyhedron p = one_set(premises, dim);
  ConsequenceResult out;
  if (p.is_empty()) {
    out.verdict = ConsequenceResult::Verdict::Yes;  // vacuous: premises unsatisfiable
    return out;
  }
  auto mn = restricted_min(restrict_to(compile(conclusion, dim), p));
  if (mn->value == 1) {
    out.verdict = ConsequenceResult::Verdict::Yes;
  } else {
    out.verdict = ConsequenceResult::Verdict::No;
    out.countermodel = std::move(mn->where);
    out.conclusion_value = std::move(mn->value);
  }
  return out;
}

ConsequenceResult consequence(const std::vector<Formula>& premises, const Formula& conclusion,
                              int k) {
  bool all_exact = conclusion.inexact_scalar_count() == 0;
  for (const Formula& f : premises) all_exact = all_exact && f.inexact_scalar_count() == 0;
  if (all_exact) return consequence(premises, conclusion);

  const int dim = shared_dim(premises, conclusion);
  // Outer one-set (contains the true one): zero sets of the lower envelopes
  // of the negated premises. Inner one-set (contained in the true one): zero
  // sets of the upper envelopes.
  RationalPolyhedron outer = RationalPolyhedron::full_cube(dim);
  RationalPolyhedron inner = RationalPolyhedron::full_cube(dim);
  for (const Formula& f : premises) {
    IntervalPwl iv = compile_interval(Formula::neg(f), k, dim);
    outer = polyhedron_intersection(outer, pwl_zero_set(iv.lower));
    inner = polyhedron_intersection(inner, pwl_zero_set(iv.upper));
  }
  IntervalPwl goal = compile_interval(conclusion, k, dim);
  ConsequenceResult out;
  out.precision = k;
  if (outer.is_empty()) {
    out.verdict = ConsequenceResult::Verdict::Yes;  // even the outer set is empty
    return out;
  }
  auto lower_min = restricted_min(restrict_to(goal.lower, outer));
  if (lower_min->value == 1) {
    out.verdict = ConsequenceResult::Verdict::Yes;
    return out;
  }
  if (!inner.is_empty()) {
    auto upper_min = restricted_min(restrict_to(goal.upper, inner));
    if (upper_min->value < 1) {
      out.verdict = ConsequenceResult::Verdict::No;
      out.countermodel = std::move(upper_min->where);
      out.conclusion_value = std::move(upper_min->value);
      return out;
    }
  }
  out.verdict = ConsequenceResult::Verdict::Unknown;
  return out;
}

ConsistencyResult consistent(const std::vector<Formula>& premises) {
  int dim = 0;
  for (const Formula& f : premises) {
    require_exact(f, "consistent");
    dim = std::max(dim, f.arity());
  }
  RationalPolyhedron p = one_set(premises, dim);
  ConsistencyResult out;
  out.consistent = !p.is_empty();
  if (out.consistent) {
    std::vector<Point> vs = collect_vertices(p.pieces());
    out.model = vs.front();  // lexicographically least vertex of the one-set
  }
  return out;
}

}  // namespace rzl
