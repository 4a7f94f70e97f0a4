#pragma once

#include "rzl/rational.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace rzl {

/// A point of [0,1]^n as exact rational coordinates. Lexicographic vector
/// comparison is the canonical order used for all deterministic tie-breaking.
using Point = std::vector<Rational>;

/// Affine functional x |-> coeff . x + constant over the ambient space.
struct AffineFn {
  std::vector<Rational> coeff;
  Rational constant;

  Rational eval(const Point& x) const;
  int dim() const { return static_cast<int>(coeff.size()); }

  friend bool operator==(const AffineFn& a, const AffineFn& b) = default;
};

/// Canonical representative of the hyperplane {l = 0}: integer entries with
/// content 1 and the first nonzero entry positive. Throws on the zero
/// functional, which names no hyperplane.
AffineFn normalize_hyperplane(const AffineFn& l);

/// Geometric simplex inside [0,1]^ambient: an affinely independent vertex
/// list, stored sorted so equal point sets compare equal. May have any
/// dimension from 0 (a point) up to the ambient dimension.
class Simplex {
public:
  Simplex(int ambient, std::vector<Point> vertices);

  /// Pipeline constructor: sorts the vertices but skips the affine
  /// independence and range validation. Only for subdivision children whose
  /// independence is geometric fact (splitting an edge at an interior point
  /// and coning preserve it); anything user-supplied uses the validating
  /// constructor.
  static Simplex unchecked(int ambient, std::vector<Point> vertices);

  int ambient() const { return ambient_; }
  int dim() const { return static_cast<int>(vertices_.size()) - 1; }
  const std::vector<Point>& vertices() const { return vertices_; }

  Point barycenter() const;

  /// All nonempty subsets of the vertex set, as simplices (2^(dim+1)-1).
  std::vector<Simplex> faces() const;

  friend bool operator==(const Simplex& a, const Simplex& b) = default;

private:
  struct Unchecked {};
  Simplex(Unchecked, int ambient, std::vector<Point> vertices);

  int ambient_;
  std::vector<Point> vertices_;
};

bool simplex_lex_less(const Simplex& a, const Simplex& b);

/// Exact volume |det|/n! of a full-dimensional simplex (dim == ambient).
/// Lower-dimensional input is a contract violation and throws.
Rational simplex_volume(const Simplex& s);

/// Barycentric coordinates of x in aff(S); nullopt when x lies outside the
/// affine hull. Coordinates are unique by affine independence.
std::optional<std::vector<Rational>> barycentric_coordinates(const Simplex& s, const Point& x);

bool simplex_contains(const Simplex& s, const Point& x);

/// Kuhn triangulation of [0,1]^n into n! full-dimensional simplices sharing
/// the main diagonal; deterministic (permutations in lexicographic order,
/// cells sorted). Accepts 1 <= n <= config::kMaxCubeDim.
std::vector<Simplex> triangulate_cube(int n);

/// Internal-friendly variant that also admits n = 0 (the one-point cube).
std::vector<Simplex> kuhn_complex(int n);

/// Linear description of a simplex: `hull` is a basis of functionals
/// vanishing on aff(S) (empty for full-dimensional S); `facets` holds one
/// functional per facet, vanishing on the facet and equal to 1 at the
/// opposite vertex. Membership in S is exactly: all hull functionals zero and
/// all facet functionals nonnegative.
struct SimplexFunctionals {
  std::vector<AffineFn> hull;
  std::vector<AffineFn> facets;
};

SimplexFunctionals simplex_functionals(const Simplex& s);

/// Result of a level-set subdivision: the new cells and, per cell, the index
/// of the input cell it came from.
struct LevelSplit {
  std::vector<Simplex> cells;
  std::vector<std::size_t> parent;
};

/// Subdivides `cells` along the level set {g = level} of the continuous
/// piecewise-affine function g whose restriction to cells[i] is per_cell[i].
/// New vertices (edge crossings) are introduced by stellar subdivision in
/// lexicographic point order, which keeps the collection face-to-face and
/// makes the output deterministic. Afterwards every cell's vertex values sit
/// entirely on one side of the level. Volumes are conserved.
///
/// The caller guarantees g is globally continuous (values at shared vertices
/// agree regardless of which cell computes them); a single AffineFn for all
/// cells — an actual hyperplane cut — always qualifies. Throws
/// cell_cap_exceeded when the subdivision would outgrow config::cell_cap().
LevelSplit split_cells_at_level(std::vector<Simplex> cells, std::vector<AffineFn> per_cell,
                                const Rational& level);

/// Hyperplane cut: split every cell by {h = 0}. A hyperplane missing the
/// cells is a no-op.
LevelSplit split_cells_by_hyperplane(std::vector<Simplex> cells, const AffineFn& h);

/// Replaces every cell containing `face` by the cones over `w` (one child per
/// dropped face vertex). `w` must lie in the relative interior of `face`.
/// Cells not containing the face are untouched; `parent` rows track origins.
void stellar_subdivide(std::vector<Simplex>& cells, std::vector<std::size_t>& parent,
                       const std::vector<Point>& face, const Point& w);

/// Tiles one full-dimensional cell along {fn = level}: the returned
/// full-dimensional simplices partition the cell and each sits weakly on one
/// side of the level set. Purely local (no neighbors involved), so mapping
/// this over a complex generally breaks vertex-to-vertex conformity — fine
/// whenever the attached data is the restriction of one continuous function,
/// which is the case throughout the connective pipeline.
std::vector<Simplex> split_simplex_at_level(const Simplex& cell, const AffineFn& fn,
                                            const Rational& level);

/// The pieces of a full-dimensional `cell` on the closed side {fn >= level};
/// empty when the cell lies strictly on the other side. Full-dimensional
/// pieces only — boundary-only contact contributes nothing.
std::vector<Simplex> clip_simplex_above(const Simplex& cell, const AffineFn& fn,
                                        const Rational& level);

/// Local counterpart of split_cells_at_level for full-dimensional complexes:
/// every cell is tiled independently by its own affine's level set, with no
/// conformity maintenance across cells. Much faster; same per-cell sign
/// guarantee and volume conservation. Throws cell_cap_exceeded when the
/// total outgrows config::cell_cap().
LevelSplit partition_cells_at_level(const std::vector<Simplex>& cells,
                                    const std::vector<AffineFn>& per_cell,
                                    const Rational& level);

/// Coarsens a partition of full-dimensional simplices in place: whenever two
/// cells carry the same label, share an exact facet, and one facet vertex
/// lies strictly between their opposite vertices, replaces them by their
/// union (again a simplex) until no such pair remains. This exactly reverses
/// the fragmentation that repeated edge splitting produces, conserves volume,
/// and keeps `labels` aligned with `cells`. Deterministic.
void coarsen_partition(std::vector<Simplex>& cells, std::vector<std::size_t>& labels);

/// The set {x in S : h(x) = level} triangulated into simplices: S itself if h
/// is constantly level on S, a face or a lower-dimensional polytope slice
/// otherwise; empty when the level is missed. Deterministic and exact.
std::vector<Simplex> slice_simplex(const Simplex& s, const AffineFn& h, const Rational& level);

/// The unique affine function taking value values[i] at points[i]. Requires
/// n+1 affinely independent points in ambient dimension n (the vertices of a
/// full-dimensional simplex).
AffineFn affine_through(const std::vector<Point>& points, const std::vector<Rational>& values);

/// Sorted unique vertices of a cell collection.
std::vector<Point> collect_vertices(const std::vector<Simplex>& cells);

/// Sum of full-dimensional cell volumes.
Rational total_volume(const std::vector<Simplex>& cells);

/// Finite union of rational simplices in [0,1]^n, any mix of dimensions.
/// Canonicalized on construction: duplicate pieces removed, pieces contained
/// in another listed piece removed, remainder sorted. The canonical form is a
/// function of the construction, not of the point set; geometric questions go
/// through polyhedron_equal / polyhedron_contains.
class RationalPolyhedron {
public:
  static RationalPolyhedron empty(int ambient);
  static RationalPolyhedron from_simplices(int ambient, std::vector<Simplex> pieces);
  static RationalPolyhedron full_cube(int n);

  int ambient() const { return ambient_; }
  const std::vector<Simplex>& pieces() const { return pieces_; }
  bool is_empty() const { return pieces_.empty(); }

  bool contains_point(const Point& x) const;

  /// Every distinct hyperplane supporting a piece: affine-hull functionals
  /// and facet functionals of every piece, normalized and deduplicated.
  std::vector<AffineFn> supporting_functionals() const;

  friend bool operator==(const RationalPolyhedron& a, const RationalPolyhedron& b) = default;

private:
  RationalPolyhedron(int ambient, std::vector<Simplex> pieces);
  int ambient_;
  std::vector<Simplex> pieces_;
};

/// Point-set containment inner <= outer, decided exactly: each inner piece is
/// refined by outer's supporting hyperplanes, after which membership is
/// constant on every refined cell's relative interior, so barycenter tests
/// decide it.
bool polyhedron_contains(const RationalPolyhedron& outer, const RationalPolyhedron& inner);

/// Point-set equality via mutual containment over common refinements.
bool polyhedron_equal(const RationalPolyhedron& a, const RationalPolyhedron& b);

/// Exact intersection, including lower-dimensional touching sets.
RationalPolyhedron polyhedron_intersection(const RationalPolyhedron& a,
                                           const RationalPolyhedron& b);

}  // namespace rzl
