#pragma once

#include "rzl/errors.hpp"
#include "rzl/formula.hpp"
#include "rzl/pwl.hpp"

#include <optional>
#include <vector>

namespace rzl {

/// Result of a degree-style analysis: exact rational with attaining witness
/// for exact inputs, or a certified rational interval at a precision index
/// for inputs with inexact scalars. Integral results carry no witness.
struct DegreeResult {
  enum class Kind { Exact, Interval };
  Kind kind = Kind::Exact;
  Rational value;                 // Exact
  std::optional<Point> witness;   // Exact, for extremum-style analyses
  Rational lo, hi;                // Interval
  int precision = 0;              // Interval
};

/// Truth degree: the exact minimum of the term function over the cube, with
/// the lexicographically least minimizing vertex as witness. Formulas with
/// inexact scalars need the precision-index overload, which returns the
/// interval [min lower_k, min upper_k]; exact formulas passed there still
/// take the exact path.
DegreeResult truth_degree(const Formula& f);
DegreeResult truth_degree(const Formula& f, int k);
DegreeResult truth_degree(const PwlFunction& f);

/// Equals truth_degree; exposed separately because the identity of the two
/// degrees is part of the public contract.
DegreeResult provability_degree(const Formula& f);
DegreeResult provability_degree(const Formula& f, int k);
DegreeResult provability_degree(const PwlFunction& f);

/// Unit norm: the exact maximum over the cube, witness as above.
DegreeResult unit_norm(const Formula& f);
DegreeResult unit_norm(const Formula& f, int k);
DegreeResult unit_norm(const PwlFunction& f);

/// The integral state: the exact integral of the term function over the
/// cube (no witness); interval path integrates both envelopes.
DegreeResult integral_state(const Formula& f);
DegreeResult integral_state(const Formula& f, int k);
DegreeResult integral_state(const PwlFunction& f);

/// The set of points where every listed formula evaluates to 1, as a
/// rational polyhedron over [0,1]^dim (dim >= every arity). Exact inputs
/// only. An empty list gives the full cube.
RationalPolyhedron one_set(const std::vector<Formula>& formulas, int dim);

struct ConsequenceResult {
  enum class Verdict { Yes, No, Unknown };
  Verdict verdict = Verdict::Yes;
  /// For No: a point where all premises are 1 and the conclusion is < 1,
  /// together with the conclusion's value there.
  std::optional<Point> countermodel;
  std::optional<Rational> conclusion_value;
  std::optional<int> precision;  // set on the interval path
};

/// Semantic consequence over finite premise sets: true iff the conclusion is
/// 1 everywhere the premises are all 1. Exact inputs only; an empty premise
/// list degenerates to tautology checking. The precision-index overload
/// accepts inexact scalars and returns a three-valued verdict; it never
/// answers No unless the upper envelope already separates at a point where
/// the premises provably evaluate to 1.
ConsequenceResult consequence(const std::vector<Formula>& premises, const Formula& conclusion);
ConsequenceResult consequence(const std::vector<Formula>& premises, const Formula& conclusion,
                              int k);

struct ConsistencyResult {
  bool consistent = false;
  std::optional<Point> model;  // a point where every premise is 1
};

/// True iff some evaluation makes every premise 1; exact inputs only.
ConsistencyResult consistent(const std::vector<Formula>& premises);

}  // namespace rzl
