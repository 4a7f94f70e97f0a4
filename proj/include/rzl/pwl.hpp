#pragma once

#include "rzl/formula.hpp"
#include "rzl/geometry.hpp"

#include <optional>
#include <vector>

namespace rzl {

enum class CoefficientClass { Integer, Rational };

const char* to_string(CoefficientClass c);

/// Continuous piecewise-linear function [0,1]^n -> [0,1], represented as a
/// partition of the cube into full-dimensional simplices with one affine
/// function per cell. Cells need not meet vertex-to-vertex; the affines of
/// touching cells agree on the contact set because every complex here
/// carries restrictions of a single continuous function. The public
/// constructor validates what is checkable cheaply: full cube coverage by
/// volume, value agreement at shared vertices, and vertex values inside
/// [0,1] (hence range within [0,1] by affinity). Cells are stored in
/// canonical order. Immutable after construction.
class PwlFunction {
public:
  PwlFunction(int dim, std::vector<Simplex> cells, std::vector<AffineFn> affines);

  static PwlFunction constant(int dim, const Rational& value);
  /// The projection x |-> x_index (0-based), over [0,1]^dim.
  static PwlFunction coordinate(int dim, int index);

  /// Pipeline constructor: canonicalizes cell order but skips the coverage,
  /// continuity, and range revalidation. Only for callers whose output
  /// carries the invariants by construction (the exact connective pipeline);
  /// anything user-supplied goes through the validating constructor.
  static PwlFunction trusted(int dim, std::vector<Simplex> cells,
                             std::vector<AffineFn> affines);

  int dim() const { return dim_; }
  const std::vector<Simplex>& cells() const { return cells_; }
  const std::vector<AffineFn>& affines() const { return affines_; }

  Rational eval(const Point& x) const;

  /// Sorted unique vertices of the complex.
  std::vector<Point> vertex_list() const { return collect_vertices(cells_); }

private:
  struct Trusted {};
  PwlFunction(Trusted, int dim, std::vector<Simplex> cells, std::vector<AffineFn> affines);
  void canonicalize();

  int dim_;
  std::vector<Simplex> cells_;
  std::vector<AffineFn> affines_;
};

/// Pointwise connectives on PwlFunctions. Binary ones refine to a common
/// complex and then cut along the single truncation hyperplane the operation
/// needs (f+g=1 for Oplus and, by duality, Odot; f-g=0 for Min/Max/ChangDist).
enum class PwlOp { Neg, Oplus, Odot, Min, Max, ChangDist };

PwlFunction apply_connective(PwlOp op, const PwlFunction& f, const PwlFunction* g = nullptr);

/// r·f for rational r in [0,1] (the scalar action; no new cells).
PwlFunction pwl_scalar(const Rational& r, const PwlFunction& f);
/// 1 - r(1-f) for rational r in [0,1] (the dual scalar action; no new cells).
PwlFunction pwl_nabla(const Rational& r, const PwlFunction& f);

/// Common refinement: one cell list on which both inputs are affine, with the
/// per-cell affine of each input. Deterministic.
struct PwlRefinement {
  int dim = 0;
  std::vector<Simplex> cells;
  std::vector<AffineFn> left;
  std::vector<AffineFn> right;
};

PwlRefinement common_refinement(const PwlFunction& f, const PwlFunction& g);

/// Exact compilation of a formula whose scalars are all exact. The ambient
/// dimension defaults to the formula arity (0 for closed formulas; their
/// complex is the one-point cube). Throws domain_error when the formula
/// contains a scalar with no exact value (use compile_interval) or when an
/// explicit dim is smaller than the arity.
PwlFunction compile(const Formula& f);
PwlFunction compile(const Formula& f, int dim);

/// Certified rational envelopes at precision index k: lower <= f <= upper
/// pointwise, ||upper - lower||_u <= 2^-k, both monotone in k. Exact-scalar
/// formulas get lower == upper. Agrees with eval_interval's scalar schedule.
struct IntervalPwl {
  int precision = 0;
  PwlFunction lower;
  PwlFunction upper;
};

IntervalPwl compile_interval(const Formula& f, int k);
IntervalPwl compile_interval(const Formula& f, int k, int dim);

/// Exact composition outer(inner[0], ..., inner[m-1]) where outer is over
/// [0,1]^m and every inner function is over [0,1]^n. The inner complexes are
/// refined to a common complex, then cut along the preimages of outer's
/// breakpoint hyperplanes, after which the composite is affine per cell.
PwlFunction compose(const PwlFunction& outer, const std::vector<PwlFunction>& inner);

/// Exact pointwise equality / order, decided at the vertices of the common
/// refinement (both sides are affine on each common cell).
bool pwl_equal(const PwlFunction& f, const PwlFunction& g);
bool pwl_leq(const PwlFunction& f, const PwlFunction& g);

struct ValueWitness {
  Rational value;
  Point where;
};

/// Exact minimum/maximum over the cube, attained at a complex vertex; the
/// witness is the lexicographically least attaining vertex.
ValueWitness pwl_min(const PwlFunction& f);
ValueWitness pwl_max(const PwlFunction& f);

/// Exact integral over the cube: sum of volume * (mean of vertex values) per
/// cell, which is exact for affine integrands.
Rational pwl_integral(const PwlFunction& f);

/// Maximal linearity regions: cells are merged (union-find over the
/// vertex-sharing adjacency graph) when they carry identical affine
/// functions. Returns groups of cell indices, each sorted, ordered by their
/// smallest member.
std::vector<std::vector<std::size_t>> linearity_regions(const PwlFunction& f);

/// Integer iff every affine piece on every maximal linearity region has
/// integer coefficients and constant.
CoefficientClass coefficient_class(const PwlFunction& f);

/// min(1, k·f), the k-fold truncated sum f + f + ... + f (k summands): the
/// two agree for every nonnegative f since truncation commutes with further
/// nonnegative addition. Built directly by one cut along k·f = 1.
PwlFunction mv_multiple(const PwlFunction& f, const Integer& k);

/// Zero set {x : f(x) = 0} as a rational polyhedron. Values are nonnegative,
/// so within each cell the zero set is the convex hull of the zero-valued
/// vertices of the cell.
RationalPolyhedron pwl_zero_set(const PwlFunction& f);

/// A PwlFunction restricted to a polyhedron P: cells (of any dimension)
/// covering exactly P, with the affine piece of f valid on each. Empty P
/// gives the empty restriction (the trivial algebra's element).
struct RestrictedPwl {
  int dim = 0;
  std::vector<Simplex> cells;
  std::vector<AffineFn> affines;

  bool is_empty() const { return cells.empty(); }
};

RestrictedPwl restrict_to(const PwlFunction& f, const RationalPolyhedron& P);

/// Equality of two restrictions over the same underlying set, decided at the
/// vertices of the common refinement within that set.
bool restricted_equal(const RestrictedPwl& a, const RestrictedPwl& b);

/// Exact minimum of the restriction over its domain, with lexicographically
/// least attaining vertex; nullopt for the empty restriction.
std::optional<ValueWitness> restricted_min(const RestrictedPwl& r);

}  // namespace rzl
