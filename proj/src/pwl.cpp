#include "rzl/pwl.hpp"

#include "rzl/config.hpp"
#include "rzl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>
#include <utility>

namespace rzl {

const char* to_string(CoefficientClass c) {
  return c == CoefficientClass::Integer ? "integer" : "rational";
}

namespace {

bool affine_less(const AffineFn& a, const AffineFn& b) {
  if (a.coeff != b.coeff) return a.coeff < b.coeff;
  return a.constant < b.constant;
}

bool is_integer(const Rational& q) { return rat_den(q) == 1; }

/// Distinct normalized supporting hyperplanes of a cell collection: facet
/// hyperplanes always, affine-hull hyperplanes for lower-dimensional cells.
std::vector<AffineFn> hyperplane_arsenal(const std::vector<Simplex>& cells) {
  std::vector<AffineFn> out;
  for (const Simplex& s : cells) {
    SimplexFunctionals fns = simplex_functionals(s);
    for (const AffineFn& h : fns.hull) out.push_back(h);
    for (const AffineFn& h : fns.facets) out.push_back(normalize_hyperplane(h));
  }
  std::sort(out.begin(), out.end(), affine_less);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Splits `cells` by every hyperplane in turn (locally per cell), composing
/// parent maps so the result maps each final cell to its original ancestor.
LevelSplit refine_by_hyperplanes(std::vector<Simplex> cells, const std::vector<AffineFn>& hs) {
  LevelSplit acc;
  acc.cells = std::move(cells);
  acc.parent.resize(acc.cells.size());
  std::iota(acc.parent.begin(), acc.parent.end(), std::size_t{0});
  for (const AffineFn& h : hs) {
    std::vector<AffineFn> per_cell(acc.cells.size(), h);
    LevelSplit step = partition_cells_at_level(acc.cells, per_cell, Rational(0));
    std::vector<std::size_t> parent(step.cells.size());
    for (std::size_t i = 0; i < step.cells.size(); ++i) parent[i] = acc.parent[step.parent[i]];
    acc.cells = std::move(step.cells);
    acc.parent = std::move(parent);
  }
  return acc;
}

std::size_t locate_cell(const std::vector<Simplex>& cells, const Point& x) {
  for (std::size_t i = 0; i < cells.size(); ++i)
    if (simplex_contains(cells[i], x)) return i;
  throw internal_error("locate_cell: point not covered by the complex");
}

AffineFn affine_sum(const AffineFn& a, const AffineFn& b) {
  AffineFn out = a;
  for (std::size_t i = 0; i < out.coeff.size(); ++i) out.coeff[i] += b.coeff[i];
  out.constant += b.constant;
  return out;
}

AffineFn affine_scale_shift(const AffineFn& a, const Rational& scale, const Rational& shift) {
  AffineFn out;
  out.coeff.reserve(a.coeff.size());
  for (const Rational& c : a.coeff) out.coeff.push_back(scale * c);
  out.constant = scale * a.constant + shift;
  return out;
}

AffineFn affine_const(int dim, const Rational& v) {
  AffineFn out;
  out.coeff.assign(dim, Rational(0));
  out.constant = v;
  return out;
}

}  // namespace

// ============================================================================
// PwlFunction
// ============================================================================

PwlFunction::PwlFunction(int dim, std::vector<Simplex> cells, std::vector<AffineFn> affines)
    : dim_(dim), cells_(std::move(cells)), affines_(std::move(affines)) {
  if (dim_ < 0) throw domain_error("pwl: negative dimension");
  if (cells_.empty()) throw domain_error("pwl: empty complex");
  if (cells_.size() != affines_.size())
    throw domain_error("pwl: one affine function per cell required");
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    if (cells_[i].ambient() != dim_ || cells_[i].dim() != dim_)
      throw domain_error("pwl: cells must be full-dimensional in [0,1]^dim");
    if (affines_[i].dim() != dim_) throw domain_error("pwl: affine dimension mismatch");
  }
  if (total_volume(cells_) != 1)
    throw domain_error("pwl: cells do not cover the cube (volume != 1)");
  std::map<Point, Rational> seen;
  for (std::size_t i = 0; i < cells_.size(); ++i)
    for (const Point& v : cells_[i].vertices()) {
      Rational val = affines_[i].eval(v);
      if (!in_unit_interval(val))
        throw domain_error("pwl: vertex value " + rat_to_string(val) + " outside [0,1]");
      auto [it, inserted] = seen.emplace(v, val);
      if (!inserted && it->second != val)
        throw domain_error("pwl: cells disagree at a shared vertex (discontinuity)");
    }
  canonicalize();
}

PwlFunction::PwlFunction(Trusted, int dim, std::vector<Simplex> cells,
                         std::vector<AffineFn> affines)
    : dim_(dim), cells_(std::move(cells)), affines_(std::move(affines)) {
  if (cells_.empty() || cells_.size() != affines_.size())
    throw internal_error("pwl: malformed pipeline complex");
  canonicalize();
}

PwlFunction PwlFunction::trusted(int dim, std::vector<Simplex> cells,
                                 std::vector<AffineFn> affines) {
  return PwlFunction(Trusted{}, dim, std::move(cells), std::move(affines));
}

void PwlFunction::canonicalize() {
  std::vector<std::size_t> order(cells_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (!(cells_[a] == cells_[b])) return simplex_lex_less(cells_[a], cells_[b]);
    return affine_less(affines_[a], affines_[b]);
  });
  std::vector<Simplex> sorted_cells;
  std::vector<AffineFn> sorted_affines;
  sorted_cells.reserve(cells_.size());
  sorted_affines.reserve(cells_.size());
  for (std::size_t i : order) {
    sorted_cells.push_back(std::move(cells_[i]));
    sorted_affines.push_back(std::move(affines_[i]));
  }
  cells_ = std::move(sorted_cells);
  affines_ = std::move(sorted_affines);
}

PwlFunction PwlFunction::constant(int dim, const Rational& value) {
  if (!in_unit_interval(value)) throw domain_error("pwl constant outside [0,1]");
  std::vector<Simplex> cells = kuhn_complex(dim);
  std::vector<AffineFn> affines(cells.size(), affine_const(dim, value));
  return trusted(dim, std::move(cells), std::move(affines));
}

PwlFunction PwlFunction::coordinate(int dim, int index) {
  if (index < 0 || index >= dim) throw domain_error("pwl coordinate index out of range");
  std::vector<Simplex> cells = kuhn_complex(dim);
  AffineFn proj = affine_const(dim, Rational(0));
  proj.coeff[index] = 1;
  std::vector<AffineFn> affines(cells.size(), proj);
  return trusted(dim, std::move(cells), std::move(affines));
}

Rational PwlFunction::eval(const Point& x) const {
  if (static_cast<int>(x.size()) != dim_) throw domain_error("pwl eval: dimension mismatch");
  for (const Rational& c : x)
    if (!in_unit_interval(c)) throw domain_error("pwl eval: coordinate outside [0,1]");
  return affines_[locate_cell(cells_, x)].eval(x);
}

// ============================================================================
// Refinement and pointwise connectives
// ============================================================================

namespace {

struct BBox {
  Point lo, hi;
};

BBox bbox_of(const Simplex& s) {
  BBox b{s.vertices()[0], s.vertices()[0]};
  for (const Point& v : s.vertices())
    for (std::size_t d = 0; d < v.size(); ++d) {
      if (v[d] < b.lo[d]) b.lo[d] = v[d];
      if (v[d] > b.hi[d]) b.hi[d] = v[d];
    }
  return b;
}

/// Open-box overlap: boxes touching only along a face cannot share a
/// full-dimensional intersection, so strict inequalities prune them.
bool boxes_overlap(const BBox& a, const BBox& b) {
  for (std::size_t d = 0; d < a.lo.size(); ++d)
    if (!(a.lo[d] < b.hi[d] && b.lo[d] < a.hi[d])) return false;
  return true;
}

bool box_contains(const BBox& b, const Point& x) {
  for (std::size_t d = 0; d < x.size(); ++d)
    if (x[d] < b.lo[d] || x[d] > b.hi[d]) return false;
  return true;
}

/// Collapses a fragmented complex to the arrangement of its distinct affine
/// pieces.  Requires that (cells, affines) describe a *continuous* function
/// (true for everything the connective pipeline builds: each stage restricts
/// one continuous function to smaller cells).
///
/// Exactness: the rebuilt cells are produced by cutting along every pairwise
/// equality {a_i = a_j} of distinct affines, so each rebuilt cell C lies
/// weakly on one side of each such hyperplane.  If two distinct affines were
/// both active on full-dimensional parts of C, continuity would make their
/// difference vanish at an interior point of C; an affine of constant sign on
/// a full-dimensional convex set that vanishes at an interior point is
/// identically zero, contradicting distinctness.  Hence the function is a
/// single affine on C, and the same argument shows any original cell
/// containing C's barycenter carries exactly that affine (even when the
/// barycenter only touches its boundary).
///
/// Merges neighbouring cells that carry the same affine whenever their union
/// is again a simplex; the function is unchanged.
void coarsen_by_affine(std::vector<Simplex>& cells, std::vector<AffineFn>& affines) {
  if (cells.size() < 2) return;
  std::map<std::pair<std::vector<Rational>, Rational>, std::size_t> ids;
  std::vector<std::size_t> labels;
  labels.reserve(cells.size());
  std::vector<AffineFn> rep;
  for (const AffineFn& a : affines) {
    auto [it, fresh] = ids.try_emplace({a.coeff, a.constant}, ids.size());
    if (fresh) rep.push_back(a);
    labels.push_back(it->second);
  }
  coarsen_partition(cells, labels);
  std::vector<AffineFn> out;
  out.reserve(cells.size());
  for (std::size_t l : labels) out.push_back(rep[l]);
  affines = std::move(out);
}

/// Besides shrinking the cell count, the rebuild resets vertex coordinates to
/// arrangement intersections, whose bit size depends on the affines alone and
/// not on the splitting history.
void simplify_complex(int dim, std::vector<Simplex>& cells, std::vector<AffineFn>& affines) {
  coarsen_by_affine(cells, affines);
  if (cells.size() < 32) return;
  std::vector<AffineFn> distinct = affines;
  std::sort(distinct.begin(), distinct.end(), affine_less);
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() > 12) return;

  std::vector<AffineFn> planes;
  for (std::size_t i = 0; i < distinct.size(); ++i)
    for (std::size_t j = i + 1; j < distinct.size(); ++j) {
      AffineFn diff = affine_sum(distinct[i],
                                 affine_scale_shift(distinct[j], Rational(-1), Rational(0)));
      bool flat = std::all_of(diff.coeff.begin(), diff.coeff.end(),
                              [](const Rational& c) { return c == 0; });
      if (flat) continue;  // parallel pieces: the equality locus is empty
      planes.push_back(normalize_hyperplane(diff));
    }
  std::sort(planes.begin(), planes.end(), affine_less);
  planes.erase(std::unique(planes.begin(), planes.end()), planes.end());
  // Cutting the whole cube grows roughly threefold per plane, so rebuilds
  // with many planes can never beat the input; skip them outright.
  if (planes.size() > 6) return;

  std::vector<Simplex> rebuilt;
  try {
    rebuilt = kuhn_complex(dim);
    for (const AffineFn& h : planes) {
      std::vector<AffineFn> per_cell(rebuilt.size(), h);
      rebuilt = partition_cells_at_level(rebuilt, per_cell, Rational(0)).cells;
      if (rebuilt.size() >= cells.size()) return;  // no gain; keep the input
    }
  } catch (const cell_cap_exceeded&) {
    return;
  }
  if (rebuilt.size() >= cells.size()) return;

  std::vector<BBox> obox;
  obox.reserve(cells.size());
  for (const Simplex& c : cells) obox.push_back(bbox_of(c));
  std::vector<AffineFn> out;
  out.reserve(rebuilt.size());
  for (const Simplex& c : rebuilt) {
    Point b = c.barycenter();
    const AffineFn* found = nullptr;
    for (std::size_t i = 0; i < cells.size() && found == nullptr; ++i)
      if (box_contains(obox[i], b) && simplex_contains(cells[i], b)) found = &affines[i];
    if (found == nullptr) throw internal_error("simplify_complex: barycenter not covered");
    out.push_back(*found);
  }
  cells = std::move(rebuilt);
  affines = std::move(out);
}

}  // namespace

PwlRefinement common_refinement(const PwlFunction& f, const PwlFunction& g) {
  if (f.dim() != g.dim()) throw domain_error("common_refinement: dimension mismatch");
  PwlRefinement out;
  out.dim = f.dim();

  // Same complex (leaves and scalar/negation images share cells verbatim):
  // nothing to overlay.
  if (f.cells() == g.cells()) {
    out.cells = f.cells();
    out.left = f.affines();
    out.right = g.affines();
    return out;
  }

  // A globally affine operand (constants, saturated functions) adopts the
  // other operand's complex; no overlay needed.
  auto single_affine = [](const PwlFunction& h) -> const AffineFn* {
    const AffineFn& a0 = h.affines().front();
    for (const AffineFn& a : h.affines())
      if (!(a == a0)) return nullptr;
    return &a0;
  };
  if (const AffineFn* fa = single_affine(f)) {
    out.cells = g.cells();
    out.left.assign(g.cells().size(), *fa);
    out.right = g.affines();
    return out;
  }
  if (const AffineFn* ga = single_affine(g)) {
    out.cells = f.cells();
    out.left = f.affines();
    out.right.assign(f.cells().size(), *ga);
    return out;
  }

  // Overlay. Candidate pairs are screened in double precision before any
  // exact work. The screens only ever *certify* facts (separation, strict
  // containment), never guess: every certificate carries an absolute slack
  // that swamps the rounding error of a handful of operations on [0,1]
  // coordinates scaled by the facet's own coefficient size, so a certified
  // answer is exact. Pairs certified neither way fall through to exact
  // clipping, which is always correct, merely slower.
  //
  // Per f-cell the screens decide one of:
  //   * strictly inside one g-cell: the pair is that g-cell alone, no clip;
  //   * every surviving g-neighbour carries one affine: those neighbours
  //     cover a dense subset of the cell, so by continuity g equals that
  //     affine on all of it, no clip;
  //   * otherwise: clip the cell through each surviving g-cell's facets; the
  //     full-dimensional pieces tile the cell with both parents known.
  const int dim = out.dim;
  constexpr double kSlack = 1e-9;
  std::vector<BBox> fbox, gbox;
  fbox.reserve(f.cells().size());
  for (const Simplex& c : f.cells()) fbox.push_back(bbox_of(c));
  gbox.reserve(g.cells().size());
  std::vector<std::vector<AffineFn>> gfacets;
  gfacets.reserve(g.cells().size());
  for (const Simplex& c : g.cells()) {
    gbox.push_back(bbox_of(c));
    // Facet functionals vanish on their facet and are 1 at the opposite
    // vertex, so the cell is exactly the set where all of them are >= 0.
    gfacets.push_back(simplex_functionals(c).facets);
  }

  // Dense ids for each side's distinct affines. Emitted pieces are labelled
  // with the id pair, so fragments whose tracked functions agree merge in the
  // coarsening pass below no matter which cells produced them.
  auto affine_ids = [](const std::vector<AffineFn>& as, std::size_t& count) {
    std::map<std::pair<std::vector<Rational>, Rational>, std::size_t> m;
    std::vector<std::size_t> ids;
    ids.reserve(as.size());
    for (const AffineFn& a : as)
      ids.push_back(m.try_emplace({a.coeff, a.constant}, m.size()).first->second);
    count = m.size();
    return ids;
  };
  std::size_t gcount = 0, fcount = 0;
  std::vector<std::size_t> fid = affine_ids(f.affines(), fcount);
  std::vector<std::size_t> gid = affine_ids(g.affines(), gcount);
  std::unordered_map<std::size_t, std::size_t> pair_dense;
  std::vector<std::size_t> labels;
  std::vector<std::size_t> rep_f, rep_g;  // first emission of each label
  auto label_for = [&](std::size_t i, std::size_t j) {
    auto [it, fresh] = pair_dense.try_emplace(fid[i] * gcount + gid[j], rep_f.size());
    if (fresh) {
      rep_f.push_back(i);
      rep_g.push_back(j);
    }
    return it->second;
  };

  const std::size_t sdim = static_cast<std::size_t>(dim);
  auto rounded_bounds = [sdim](const std::vector<BBox>& boxes) {
    std::vector<double> lo(boxes.size() * sdim), hi(boxes.size() * sdim);
    for (std::size_t i = 0; i < boxes.size(); ++i)
      for (std::size_t d = 0; d < sdim; ++d) {
        lo[i * sdim + d] = static_cast<double>(boxes[i].lo[d]) - kSlack;
        hi[i * sdim + d] = static_cast<double>(boxes[i].hi[d]) + kSlack;
      }
    return std::make_pair(std::move(lo), std::move(hi));
  };
  auto [flo, fhi] = rounded_bounds(fbox);
  auto [glo, ghi] = rounded_bounds(gbox);

  const std::size_t nverts = sdim + 1;
  const std::size_t frow = sdim + 1;
  // Vertices of both sides in doubles, vertex-major.
  auto rounded_vertices = [sdim, nverts](const std::vector<Simplex>& cs) {
    std::vector<double> vd(cs.size() * nverts * sdim);
    for (std::size_t i = 0; i < cs.size(); ++i)
      for (std::size_t t = 0; t < nverts; ++t)
        for (std::size_t d = 0; d < sdim; ++d)
          vd[(i * nverts + t) * sdim + d] = static_cast<double>(cs[i].vertices()[t][d]);
    return vd;
  };
  std::vector<double> fvd = rounded_vertices(f.cells());
  std::vector<double> gvd = rounded_vertices(g.cells());
  // Facet functionals in doubles (coefficients then constant), with a
  // per-facet slack proportional to the coefficient magnitudes.
  auto rounded_facets = [sdim, nverts, frow](const std::vector<AffineFn>& facets,
                                             std::size_t idx, std::vector<double>& fd,
                                             std::vector<double>& slack) {
    for (std::size_t t = 0; t < nverts; ++t) {
      double* row = fd.data() + (idx * nverts + t) * frow;
      const AffineFn& h = facets[t];
      double scale = 1.0;
      for (std::size_t d = 0; d < sdim; ++d) {
        row[d] = static_cast<double>(h.coeff[d]);
        scale += std::abs(row[d]);
      }
      row[sdim] = static_cast<double>(h.constant);
      scale += std::abs(row[sdim]);
      slack[idx * nverts + t] = kSlack * scale;
    }
  };
  std::vector<double> gfd(g.cells().size() * nverts * frow);
  std::vector<double> gslack(g.cells().size() * nverts);
  for (std::size_t j = 0; j < g.cells().size(); ++j) rounded_facets(gfacets[j], j, gfd, gslack);
  // The f-side facet screen is needed only for pairs the g-side screen leaves
  // open, so f-cell functionals are computed on first use.
  std::vector<std::vector<AffineFn>> ffacets(f.cells().size());
  std::vector<double> ffd(f.cells().size() * nverts * frow);
  std::vector<double> fslack(f.cells().size() * nverts);
  std::vector<char> fready(f.cells().size(), 0);

  // Screens one side's facet rows against the other side's vertices.
  // Returns -1 when some facet certifies separation, +1 when every facet has
  // all vertices certainly strictly above (containment in the facet side's
  // cell), 0 otherwise. Facets whose maximum is too close to zero to call
  // are flagged in near_mask for an exact follow-up: partitions are full of
  // cells that touch along shared boundaries, and those have a facet whose
  // true maximum is exactly zero, which no strict-margin test can certify.
  auto facet_screen = [sdim, nverts, frow](const double* rows, const double* slackp,
                                           const double* verts, unsigned& near_mask) {
    near_mask = 0;
    bool inside = true;
    for (std::size_t t = 0; t < nverts; ++t) {
      const double* row = rows + t * frow;
      const double slack = slackp[t];
      double mn = std::numeric_limits<double>::infinity(), mx = -mn;
      for (std::size_t v = 0; v < nverts; ++v) {
        double s = row[sdim];
        const double* p = verts + v * sdim;
        for (std::size_t d = 0; d < sdim; ++d) s += row[d] * p[d];
        mn = std::min(mn, s);
        mx = std::max(mx, s);
      }
      if (mx < -slack) return -1;
      if (mx <= slack) near_mask |= 1u << t;
      if (!(mn > slack)) inside = false;
    }
    return inside ? 1 : 0;
  };
  // A facet whose exact maximum over the other cell's vertices is <= 0 rules
  // out full-dimensional overlap: interior points of the other cell then
  // evaluate strictly negative (a nonpositive affine on a full-dimensional
  // simplex vanishing somewhere inside would vanish identically).
  auto exact_facet_rejects = [](const AffineFn& h, const Simplex& other) {
    for (const Point& v : other.vertices())
      if (h.eval(v) > 0) return false;
    return true;
  };

  std::vector<std::size_t> local;
  for (std::size_t i = 0; i < f.cells().size(); ++i) {
    local.clear();
    const AffineFn* uniform = nullptr;
    bool multi = false;
    bool emitted_sub = false;  // some g-cell already emitted as its own piece
    std::size_t inside_of = g.cells().size();  // sentinel: none certified
    const double* fl = flo.data() + i * sdim;
    const double* fh = fhi.data() + i * sdim;
    const double* fv = fvd.data() + i * nverts * sdim;
    for (std::size_t j = 0; j < g.cells().size(); ++j) {
      const double* gl = glo.data() + j * sdim;
      const double* gh = ghi.data() + j * sdim;
      bool maybe = true;
      for (std::size_t d = 0; d < sdim && maybe; ++d) maybe = fl[d] < gh[d] && gl[d] < fh[d];
      if (!maybe) continue;
      // Screen with this g-cell's facets: separation kills the pair, strict
      // containment nests the f-cell inside this g-cell, which therefore
      // meets no other g-cell in a full-dimensional set.
      unsigned gnear = 0;
      int gs = facet_screen(gfd.data() + j * nverts * frow, gslack.data() + j * nverts, fv,
                            gnear);
      if (gs < 0) continue;
      bool rejected = false;
      for (std::size_t t = 0; gnear >> t != 0 && !rejected; ++t)
        if ((gnear >> t) & 1u) rejected = exact_facet_rejects(gfacets[j][t], f.cells()[i]);
      if (rejected) continue;
      if (gs > 0) {
        inside_of = j;
        break;
      }
      // Screen with the f-cell's facets against this g-cell's vertices:
      // strict containment the other way round makes the g-cell itself the
      // pair's piece, with no clipping and no fragmentation.
      if (!fready[i]) {
        ffacets[i] = simplex_functionals(f.cells()[i]).facets;
        rounded_facets(ffacets[i], i, ffd, fslack);
        fready[i] = 1;
      }
      unsigned fnear = 0;
      int fs = facet_screen(ffd.data() + i * nverts * frow, fslack.data() + i * nverts,
                            gvd.data() + j * nverts * sdim, fnear);
      if (fs < 0) continue;
      for (std::size_t t = 0; fnear >> t != 0 && !rejected; ++t)
        if ((fnear >> t) & 1u) rejected = exact_facet_rejects(ffacets[i][t], g.cells()[j]);
      if (rejected) continue;
      if (fs > 0) {
        out.cells.push_back(g.cells()[j]);
        labels.push_back(label_for(i, j));
        emitted_sub = true;
        continue;
      }
      local.push_back(j);
      if (uniform == nullptr) uniform = &g.affines()[j];
      else if (!(*uniform == g.affines()[j])) multi = true;
    }
    if (inside_of != g.cells().size()) {
      // Pairs scanned before the break clip to nothing: the f-cell has no
      // full-dimensional overlap with any other g-cell.
      out.cells.push_back(f.cells()[i]);
      labels.push_back(label_for(i, inside_of));
      continue;
    }
    if (local.empty()) throw internal_error("common_refinement: uncovered cell");
    if (!multi && !emitted_sub) {
      // All surviving neighbours carry one affine and cover the cell densely.
      out.cells.push_back(f.cells()[i]);
      labels.push_back(label_for(i, local.front()));
      continue;
    }
    // Cut the f-cell once through every locally separating g-facet plane.
    // The pieces' interiors then avoid every facet plane of every surviving
    // neighbour, so each piece lies strictly inside exactly one of them,
    // found by evaluating facet functionals at the piece's barycenter.
    // Cutting by distinct planes instead of clipping against each neighbour
    // separately keeps fragmentation at the local arrangement size rather
    // than the neighbour count.
    std::vector<AffineFn> planes;
    for (std::size_t j : local) {
      const double* rows = gfd.data() + j * nverts * frow;
      for (std::size_t t = 0; t < nverts; ++t) {
        // Does {h = 0} strictly separate the f-cell's vertices? Screen in
        // doubles; settle near-zero readings exactly.
        const double* row = rows + t * frow;
        const double slack = gslack[j * nverts + t];
        double mn = std::numeric_limits<double>::infinity(), mx = -mn;
        for (std::size_t v = 0; v < nverts; ++v) {
          double s = row[sdim];
          const double* p = fv + v * sdim;
          for (std::size_t d = 0; d < sdim; ++d) s += row[d] * p[d];
          mn = std::min(mn, s);
          mx = std::max(mx, s);
        }
        bool separates;
        if (mn > slack || mx < -slack) separates = false;  // certified one-sided
        else if (mn < -slack && mx > slack) separates = true;
        else {
          bool pos = false, neg = false;
          const AffineFn& h = gfacets[j][t];
          for (const Point& v : f.cells()[i].vertices()) {
            Rational hv = h.eval(v);
            if (hv > 0) pos = true;
            else if (hv < 0) neg = true;
          }
          separates = pos && neg;
        }
        if (!separates) continue;
        AffineFn hn = normalize_hyperplane(gfacets[j][t]);
        bool known = false;
        for (const AffineFn& p : planes)
          if (p == hn) {
            known = true;
            break;
          }
        if (!known) planes.push_back(std::move(hn));
      }
    }
    // The cut count can grow with every plane, so the attempt carries a piece
    // budget: against finely fragmented neighbourhoods (many distinct planes
    // through one cell) it aborts and the pairwise clip below — linear in the
    // neighbour count — takes over. Both paths produce the same function.
    bool exploded = false;
    std::vector<Simplex> pieces{f.cells()[i]};
    const std::size_t piece_limit = 4 * local.size() + 16;
    for (const AffineFn& hn : planes) {
      std::vector<Simplex> next;
      for (const Simplex& piece : pieces)
        for (Simplex& cut : split_simplex_at_level(piece, hn, Rational(0)))
          next.push_back(std::move(cut));
      pieces = std::move(next);
      if (pieces.size() > piece_limit) {
        exploded = true;
        break;
      }
    }
    if (!exploded) {
      for (Simplex& piece : pieces) {
        Point b = piece.barycenter();
        std::size_t owner = local.size();
        for (std::size_t idx = 0; idx < local.size() && owner == local.size(); ++idx) {
          bool in = true;
          for (const AffineFn& h : gfacets[local[idx]])
            if (h.eval(b) < 0) {
              in = false;
              break;
            }
          if (in) owner = idx;
        }
        if (owner == local.size())
          throw internal_error("common_refinement: piece not located in any neighbour");
        out.cells.push_back(std::move(piece));
        labels.push_back(label_for(i, local[owner]));
      }
    } else {
      for (std::size_t j : local) {
        std::vector<Simplex> clipped{f.cells()[i]};
        for (const AffineFn& h : gfacets[j]) {
          std::vector<Simplex> next;
          for (const Simplex& piece : clipped)
            for (Simplex& kept : clip_simplex_above(piece, h, Rational(0)))
              next.push_back(std::move(kept));
          clipped = std::move(next);
          if (clipped.empty()) break;
        }
        for (Simplex& piece : clipped) {
          out.cells.push_back(std::move(piece));
          labels.push_back(label_for(i, j));
        }
      }
    }
    if (out.cells.size() > config::cell_cap())
      throw cell_cap_exceeded(out.cells.size(), config::cell_cap());
  }
  if (out.cells.empty()) throw internal_error("common_refinement: empty overlay");

  // Merge fragments whose (left, right) pair agrees; both tracked functions
  // stay affine on every merged cell.
  coarsen_partition(out.cells, labels);
  out.left.reserve(out.cells.size());
  out.right.reserve(out.cells.size());
  for (std::size_t l : labels) {
    out.left.push_back(f.affines()[rep_f[l]]);
    out.right.push_back(g.affines()[rep_g[l]]);
  }
  return out;
}

namespace {

/// Shared engine for the truncating binary connectives: forms the per-cell
/// affine `raw` on the common refinement, cuts along {raw = level}, then on
/// each piece keeps `raw` or replaces it by the constant branch, decided by
/// the barycenter (after the cut the comparison is uniform per piece).
PwlFunction truncate_combine(const PwlRefinement& r, const std::vector<AffineFn>& raw,
                             const Rational& level, bool keep_above,
                             const Rational& branch_value) {
  LevelSplit cut = partition_cells_at_level(r.cells, raw, level);
  std::vector<AffineFn> affines;
  affines.reserve(cut.cells.size());
  for (std::size_t i = 0; i < cut.cells.size(); ++i) {
    const AffineFn& a = raw[cut.parent[i]];
    Rational mid = a.eval(cut.cells[i].barycenter());
    bool branch = keep_above ? (mid < level) : (mid > level);
    affines.push_back(branch ? affine_const(r.dim, branch_value) : a);
  }
  simplify_complex(r.dim, cut.cells, affines);
  return PwlFunction::trusted(r.dim, std::move(cut.cells), std::move(affines));
}

/// min/max: cut the refinement along {left - right = 0} and pick a side per
/// piece by the barycenter sign.
PwlFunction extremum_combine(const PwlRefinement& r, bool take_min) {
  std::vector<AffineFn> diff;
  diff.reserve(r.cells.size());
  for (std::size_t i = 0; i < r.cells.size(); ++i)
    diff.push_back(affine_sum(r.left[i], affine_scale_shift(r.right[i], Rational(-1), Rational(0))));
  LevelSplit cut = partition_cells_at_level(r.cells, diff, Rational(0));
  std::vector<AffineFn> affines;
  affines.reserve(cut.cells.size());
  for (std::size_t i = 0; i < cut.cells.size(); ++i) {
    std::size_t p = cut.parent[i];
    Rational mid = diff[p].eval(cut.cells[i].barycenter());
    bool left_smaller = mid <= 0;
    affines.push_back((take_min == left_smaller) ? r.left[p] : r.right[p]);
  }
  simplify_complex(r.dim, cut.cells, affines);
  return PwlFunction::trusted(r.dim, std::move(cut.cells), std::move(affines));
}

/// |left - right|: cut along the sign change and take the positive branch.
PwlFunction chang_dist_combine(const PwlRefinement& r) {
  std::vector<AffineFn> diff;
  diff.reserve(r.cells.size());
  for (std::size_t i = 0; i < r.cells.size(); ++i)
    diff.push_back(affine_sum(r.left[i], affine_scale_shift(r.right[i], Rational(-1), Rational(0))));
  LevelSplit cut = partition_cells_at_level(r.cells, diff, Rational(0));
  std::vector<AffineFn> affines;
  affines.reserve(cut.cells.size());
  for (std::size_t i = 0; i < cut.cells.size(); ++i) {
    const AffineFn& d = diff[cut.parent[i]];
    Rational mid = d.eval(cut.cells[i].barycenter());
    affines.push_back(mid >= 0 ? d : affine_scale_shift(d, Rational(-1), Rational(0)));
  }
  simplify_complex(r.dim, cut.cells, affines);
  return PwlFunction::trusted(r.dim, std::move(cut.cells), std::move(affines));
}

}  // namespace

PwlFunction apply_connective(PwlOp op, const PwlFunction& f, const PwlFunction* g) {
  if (op == PwlOp::Neg) {
    if (g != nullptr) throw domain_error("neg takes one operand");
    std::vector<AffineFn> affines;
    affines.reserve(f.affines().size());
    for (const AffineFn& a : f.affines())
      affines.push_back(affine_scale_shift(a, Rational(-1), Rational(1)));
    return PwlFunction::trusted(f.dim(), f.cells(), std::move(affines));
  }
  if (g == nullptr) throw domain_error("binary connective needs two operands");
  PwlRefinement r = common_refinement(f, *g);
  switch (op) {
    case PwlOp::Oplus: {
      std::vector<AffineFn> sum;
      sum.reserve(r.cells.size());
      for (std::size_t i = 0; i < r.cells.size(); ++i)
        sum.push_back(affine_sum(r.left[i], r.right[i]));
      return truncate_combine(r, sum, Rational(1), /*keep_above=*/false, Rational(1));
    }
    case PwlOp::Odot: {
      std::vector<AffineFn> sum;
      sum.reserve(r.cells.size());
      for (std::size_t i = 0; i < r.cells.size(); ++i)
        sum.push_back(affine_scale_shift(affine_sum(r.left[i], r.right[i]), Rational(1), Rational(-1)));
      return truncate_combine(r, sum, Rational(0), /*keep_above=*/true, Rational(0));
    }
    case PwlOp::Min:
      return extremum_combine(r, /*take_min=*/true);
    case PwlOp::Max:
      return extremum_combine(r, /*take_min=*/false);
    case PwlOp::ChangDist:
      return chang_dist_combine(r);
    case PwlOp::Neg:
      break;
  }
  throw internal_error("apply_connective: unhandled operation");
}

PwlFunction pwl_scalar(const Rational& r, const PwlFunction& f) {
  if (!in_unit_interval(r)) throw domain_error("scalar outside [0,1]");
  std::vector<AffineFn> affines;
  affines.reserve(f.affines().size());
  for (const AffineFn& a : f.affines()) affines.push_back(affine_scale_shift(a, r, Rational(0)));
  return PwlFunction::trusted(f.dim(), f.cells(), std::move(affines));
}

PwlFunction pwl_nabla(const Rational& r, const PwlFunction& f) {
  if (!in_unit_interval(r)) throw domain_error("scalar outside [0,1]");
  std::vector<AffineFn> affines;
  affines.reserve(f.affines().size());
  for (const AffineFn& a : f.affines())
    affines.push_back(affine_scale_shift(a, r, Rational(1) - r));
  return PwlFunction::trusted(f.dim(), f.cells(), std::move(affines));
}

// ============================================================================
// Compilation
// ============================================================================

namespace {

PwlFunction compile_rec(const Formula& f, int dim, std::map<const void*, PwlFunction>& memo) {
  auto hit = memo.find(f.node_key());
  if (hit != memo.end()) return hit->second;
  PwlFunction result = [&]() -> PwlFunction {
    switch (f.kind()) {
      case Formula::Kind::Var:
        return PwlFunction::coordinate(dim, f.var_index() - 1);
      case Formula::Kind::Const1:
        return PwlFunction::constant(dim, Rational(1));
      case Formula::Kind::Neg: {
        PwlFunction c = compile_rec(f.child(), dim, memo);
        return apply_connective(PwlOp::Neg, c);
      }
      case Formula::Kind::Oplus: {
        PwlFunction a = compile_rec(f.left(), dim, memo);
        PwlFunction b = compile_rec(f.right(), dim, memo);
        return apply_connective(PwlOp::Oplus, a, &b);
      }
      case Formula::Kind::Nabla: {
        if (!f.scalar().is_exact())
          throw domain_error(
              "exact compilation requires exact scalars; use interval compilation");
        PwlFunction c = compile_rec(f.child(), dim, memo);
        return pwl_nabla(f.scalar().exact_value(), c);
      }
    }
    throw internal_error("compile: unknown node kind");
  }();
  memo.emplace(f.node_key(), result);
  return result;
}

struct EnvelopePair {
  PwlFunction lower;
  PwlFunction upper;
};

EnvelopePair envelope_rec(const Formula& f, int dim, int scalar_index,
                          std::map<const void*, EnvelopePair>& memo) {
  auto hit = memo.find(f.node_key());
  if (hit != memo.end()) return hit->second;
  EnvelopePair result = [&]() -> EnvelopePair {
    switch (f.kind()) {
      case Formula::Kind::Var: {
        PwlFunction p = PwlFunction::coordinate(dim, f.var_index() - 1);
        return {p, p};
      }
      case Formula::Kind::Const1: {
        PwlFunction p = PwlFunction::constant(dim, Rational(1));
        return {p, p};
      }
      case Formula::Kind::Neg: {
        EnvelopePair c = envelope_rec(f.child(), dim, scalar_index, memo);
        return {apply_connective(PwlOp::Neg, c.upper), apply_connective(PwlOp::Neg, c.lower)};
      }
      case Formula::Kind::Oplus: {
        EnvelopePair a = envelope_rec(f.left(), dim, scalar_index, memo);
        EnvelopePair b = envelope_rec(f.right(), dim, scalar_index, memo);
        return {apply_connective(PwlOp::Oplus, a.lower, &b.lower),
                apply_connective(PwlOp::Oplus, a.upper, &b.upper)};
      }
      case Formula::Kind::Nabla: {
        EnvelopePair c = envelope_rec(f.child(), dim, scalar_index, memo);
        if (f.scalar().is_exact()) {
          const Rational r = f.scalar().exact_value();
          return {pwl_nabla(r, c.lower), pwl_nabla(r, c.upper)};
        }
        // x |-> 1 - r(1-x) increases in x and decreases in r, so the lower
        // envelope takes the scalar's upper bound and vice versa.
        RatInterval s = f.scalar().approx(scalar_index);
        return {pwl_nabla(s.hi, c.lower), pwl_nabla(s.lo, c.upper)};
      }
    }
    throw internal_error("interval compilation: unknown node kind");
  }();
  memo.emplace(f.node_key(), result);
  return result;
}

int checked_dim(const Formula& f, int dim) {
  if (dim < f.arity())
    throw domain_error("compilation dimension smaller than the formula arity");
  return dim;
}

}  // namespace

PwlFunction compile(const Formula& f) { return compile(f, f.arity()); }

PwlFunction compile(const Formula& f, int dim) {
  std::map<const void*, PwlFunction> memo;
  return compile_rec(f, checked_dim(f, dim), memo);
}

IntervalPwl compile_interval(const Formula& f, int k) { return compile_interval(f, k, f.arity()); }

IntervalPwl compile_interval(const Formula& f, int k, int dim) {
  if (k < 0) throw domain_error("precision index must be nonnegative");
  std::map<const void*, EnvelopePair> memo;
  EnvelopePair p = envelope_rec(f, checked_dim(f, dim), scalar_query_index(f, k), memo);
  return IntervalPwl{k, std::move(p.lower), std::move(p.upper)};
}

// ============================================================================
// Composition
// ============================================================================

PwlFunction compose(const PwlFunction& outer, const std::vector<PwlFunction>& inner) {
  const int m = outer.dim();
  if (static_cast<int>(inner.size()) != m)
    throw domain_error("compose: outer arity differs from the number of inner functions");
  if (m == 0) {
    // Closed outer function: a constant, composed over an empty list, would
    // leave the target dimension unspecified; use the one-point cube.
    return PwlFunction::constant(0, outer.affines()[0].constant);
  }
  const int n = inner[0].dim();
  for (const PwlFunction& g : inner)
    if (g.dim() != n) throw domain_error("compose: inner dimensions differ");

  // Common refinement of all inner complexes, tracking each one's affine.
  // Overlay one inner function at a time: clip every current cell to every
  // box-overlapping cell of the next complex, so both parents stay known.
  std::vector<Simplex> cells = inner[0].cells();
  std::vector<std::vector<AffineFn>> comp(m);
  comp[0] = inner[0].affines();
  for (int i = 1; i < m; ++i) {
    if (cells == inner[i].cells()) {
      comp[i] = inner[i].affines();
      continue;
    }
    bool uniform = std::all_of(inner[i].affines().begin(), inner[i].affines().end(),
                               [&](const AffineFn& a) { return a == inner[i].affines().front(); });
    if (uniform) {
      comp[i].assign(cells.size(), inner[i].affines().front());
      continue;
    }
    std::vector<BBox> abox;
    abox.reserve(cells.size());
    for (const Simplex& c : cells) abox.push_back(bbox_of(c));
    std::vector<BBox> gbox;
    std::vector<std::vector<AffineFn>> gfacets;
    gbox.reserve(inner[i].cells().size());
    gfacets.reserve(inner[i].cells().size());
    for (const Simplex& c : inner[i].cells()) {
      gbox.push_back(bbox_of(c));
      gfacets.push_back(simplex_functionals(c).facets);
    }
    std::vector<Simplex> next_cells;
    std::vector<std::vector<AffineFn>> next_comp(m);
    for (std::size_t a = 0; a < cells.size(); ++a) {
      for (std::size_t j = 0; j < inner[i].cells().size(); ++j) {
        if (!boxes_overlap(abox[a], gbox[j])) continue;
        std::vector<Simplex> pieces{cells[a]};
        for (const AffineFn& h : gfacets[j]) {
          std::vector<Simplex> kept;
          for (const Simplex& piece : pieces)
            for (Simplex& part : clip_simplex_above(piece, h, Rational(0)))
              kept.push_back(std::move(part));
          pieces = std::move(kept);
          if (pieces.empty()) break;
        }
        for (Simplex& piece : pieces) {
          next_cells.push_back(std::move(piece));
          for (int t = 0; t < i; ++t) next_comp[t].push_back(comp[t][a]);
          next_comp[i].push_back(inner[i].affines()[j]);
        }
        if (next_cells.size() > config::cell_cap())
          throw cell_cap_exceeded(next_cells.size(), config::cell_cap());
      }
    }
    cells = std::move(next_cells);
    for (int t = 0; t <= i; ++t) comp[t] = std::move(next_comp[t]);
  }

  // Cut along the preimage of every breakpoint hyperplane of the outer
  // function; each pullback is continuous piecewise-affine, one affine per
  // current cell.
  for (const AffineFn& h : hyperplane_arsenal(outer.cells())) {
    std::vector<AffineFn> pullback;
    pullback.reserve(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      AffineFn p = affine_const(n, h.constant);
      for (int i = 0; i < m; ++i)
        if (h.coeff[i] != 0) p = affine_sum(p, affine_scale_shift(comp[i][c], h.coeff[i], Rational(0)));
      pullback.push_back(std::move(p));
    }
    LevelSplit cut = partition_cells_at_level(cells, pullback, Rational(0));
    cells = std::move(cut.cells);
    for (int j = 0; j < m; ++j) {
      std::vector<AffineFn> moved;
      moved.reserve(cells.size());
      for (std::size_t c = 0; c < cells.size(); ++c) moved.push_back(comp[j][cut.parent[c]]);
      comp[j] = std::move(moved);
    }
  }

  // Each cell now maps into a single outer cell; compose affinely.
  std::vector<AffineFn> affines;
  affines.reserve(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    Point image(m);
    Point bary = cells[c].barycenter();
    for (int i = 0; i < m; ++i) image[i] = comp[i][c].eval(bary);
    const AffineFn& oa = outer.affines()[locate_cell(outer.cells(), image)];
    AffineFn out = affine_const(n, oa.constant);
    for (int i = 0; i < m; ++i)
      if (oa.coeff[i] != 0) out = affine_sum(out, affine_scale_shift(comp[i][c], oa.coeff[i], Rational(0)));
    affines.push_back(std::move(out));
  }
  simplify_complex(n, cells, affines);
  return PwlFunction::trusted(n, std::move(cells), std::move(affines));
}

// ============================================================================
// Comparisons, extrema, integral
// ============================================================================

namespace {

/// Applies `visit(cell_index, left_affine, right_affine, cell)` over the
/// common refinement; returns false as soon as visit does.
bool refinement_all(const PwlFunction& f, const PwlFunction& g,
                    bool (*pred)(const Rational&, const Rational&)) {
  PwlRefinement r = common_refinement(f, g);
  for (std::size_t i = 0; i < r.cells.size(); ++i)
    for (const Point& v : r.cells[i].vertices())
      if (!pred(r.left[i].eval(v), r.right[i].eval(v))) return false;
  return true;
}

}  // namespace

bool pwl_equal(const PwlFunction& f, const PwlFunction& g) {
  return refinement_all(f, g, [](const Rational& a, const Rational& b) { return a == b; });
}

bool pwl_leq(const PwlFunction& f, const PwlFunction& g) {
  return refinement_all(f, g, [](const Rational& a, const Rational& b) { return a <= b; });
}

namespace {

ValueWitness extremum(const PwlFunction& f, bool minimize) {
  std::optional<ValueWitness> best;
  for (std::size_t i = 0; i < f.cells().size(); ++i)
    for (const Point& v : f.cells()[i].vertices()) {
      Rational val = f.affines()[i].eval(v);
      bool better = !best || (minimize ? val < best->value : val > best->value) ||
                    (val == best->value && v < best->where);
      if (better) best = ValueWitness{std::move(val), v};
    }
  return *best;
}

}  // namespace

ValueWitness pwl_min(const PwlFunction& f) { return extremum(f, true); }
ValueWitness pwl_max(const PwlFunction& f) { return extremum(f, false); }

Rational pwl_integral(const PwlFunction& f) {
  Rational acc(0);
  for (std::size_t i = 0; i < f.cells().size(); ++i) {
    const Simplex& s = f.cells()[i];
    Rational mean(0);
    for (const Point& v : s.vertices()) mean += f.affines()[i].eval(v);
    mean /= Rational(static_cast<int>(s.vertices().size()));
    acc += simplex_volume(s) * mean;
  }
  return acc;
}

// ============================================================================
// Linearity regions, coefficient class, MV multiples, zero sets
// ============================================================================

std::vector<std::vector<std::size_t>> linearity_regions(const PwlFunction& f) {
  const std::size_t n = f.cells().size();
  std::vector<std::size_t> root(n);
  std::iota(root.begin(), root.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (root[x] != x) x = root[x] = root[root[x]];
    return x;
  };
  auto share_vertex = [&](const Simplex& a, const Simplex& b) {
    for (const Point& v : a.vertices())
      if (std::binary_search(b.vertices().begin(), b.vertices().end(), v)) return true;
    return false;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (f.affines()[i] == f.affines()[j] && share_vertex(f.cells()[i], f.cells()[j])) {
        std::size_t a = find(i), b = find(j);
        if (a != b) root[std::max(a, b)] = std::min(a, b);
      }
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < n; ++i) groups[find(i)].push_back(i);
  std::vector<std::vector<std::size_t>> out;
  out.reserve(groups.size());
  for (auto& [r, members] : groups) out.push_back(std::move(members));
  return out;
}

CoefficientClass coefficient_class(const PwlFunction& f) {
  for (const auto& region : linearity_regions(f)) {
    const AffineFn& a = f.affines()[region.front()];
    if (!is_integer(a.constant)) return CoefficientClass::Rational;
    for (const Rational& c : a.coeff)
      if (!is_integer(c)) return CoefficientClass::Rational;
  }
  return CoefficientClass::Integer;
}

PwlFunction mv_multiple(const PwlFunction& f, const Integer& k) {
  if (k < 1) throw domain_error("mv_multiple: the multiplier must be a positive integer");
  std::vector<AffineFn> scaled;
  scaled.reserve(f.affines().size());
  for (const AffineFn& a : f.affines())
    scaled.push_back(affine_scale_shift(a, Rational(k), Rational(0)));
  LevelSplit cut = partition_cells_at_level(f.cells(), scaled, Rational(1));
  std::vector<AffineFn> affines;
  affines.reserve(cut.cells.size());
  for (std::size_t i = 0; i < cut.cells.size(); ++i) {
    const AffineFn& a = scaled[cut.parent[i]];
    affines.push_back(a.eval(cut.cells[i].barycenter()) > 1 ? affine_const(f.dim(), Rational(1))
                                                            : a);
  }
  simplify_complex(f.dim(), cut.cells, affines);
  return PwlFunction::trusted(f.dim(), std::move(cut.cells), std::move(affines));
}

RationalPolyhedron pwl_zero_set(const PwlFunction& f) {
  std::vector<Simplex> pieces;
  for (std::size_t i = 0; i < f.cells().size(); ++i) {
    std::vector<Point> zeros;
    for (const Point& v : f.cells()[i].vertices())
      if (f.affines()[i].eval(v) == 0) zeros.push_back(v);
    if (!zeros.empty()) pieces.emplace_back(f.dim(), std::move(zeros));
  }
  return RationalPolyhedron::from_simplices(f.dim(), std::move(pieces));
}

// ============================================================================
// Restriction to a polyhedron
// ============================================================================

RestrictedPwl restrict_to(const PwlFunction& f, const RationalPolyhedron& P) {
  if (P.ambient() != f.dim()) throw domain_error("restrict: dimension mismatch");
  RestrictedPwl out;
  out.dim = f.dim();
  std::vector<AffineFn> arsenal = hyperplane_arsenal(f.cells());
  for (const Simplex& piece : P.pieces()) {
    LevelSplit ref = refine_by_hyperplanes({piece}, arsenal);
    for (const Simplex& cell : ref.cells) {
      out.cells.push_back(cell);
      out.affines.push_back(f.affines()[locate_cell(f.cells(), cell.barycenter())]);
    }
  }
  return out;
}

bool restricted_equal(const RestrictedPwl& a, const RestrictedPwl& b) {
  if (a.dim != b.dim) throw domain_error("restricted_equal: dimension mismatch");
  if (a.is_empty() || b.is_empty()) return a.is_empty() == b.is_empty();
  std::vector<AffineFn> arsenal = hyperplane_arsenal(b.cells);
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    LevelSplit ref = refine_by_hyperplanes({a.cells[i]}, arsenal);
    for (const Simplex& cell : ref.cells) {
      Point bary = cell.barycenter();
      std::size_t j = 0;
      for (; j < b.cells.size(); ++j)
        if (simplex_contains(b.cells[j], bary)) break;
      if (j == b.cells.size())
        throw domain_error("restricted_equal: domains differ (point of one outside the other)");
      for (const Point& v : cell.vertices())
        if (a.affines[i].eval(v) != b.affines[j].eval(v)) return false;
    }
  }
  return true;
}

std::optional<ValueWitness> restricted_min(const RestrictedPwl& r) {
  std::optional<ValueWitness> best;
  for (std::size_t i = 0; i < r.cells.size(); ++i)
    for (const Point& v : r.cells[i].vertices()) {
      Rational val = r.affines[i].eval(v);
      bool better = !best || val < best->value || (val == best->value && v < best->where);
      if (better) best = ValueWitness{std::move(val), v};
    }
  return best;
}

}  // namespace rzl
