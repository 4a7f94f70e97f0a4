#include "rzl/geometry.hpp"

#include "rzl/config.hpp"
#include "rzl/errors.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <tuple>
#include <unordered_map>

namespace rzl {

Rational AffineFn::eval(const Point& x) const {
  if (x.size() != coeff.size()) throw internal_error("AffineFn::eval: dimension mismatch");
  Rational acc = constant;
  for (std::size_t i = 0; i < coeff.size(); ++i)
    if (coeff[i] != 0) acc += coeff[i] * x[i];
  return acc;
}

AffineFn normalize_hyperplane(const AffineFn& l) {
  std::vector<Rational> all(l.coeff);
  all.push_back(l.constant);
  Integer den_lcm = 1;
  for (const Rational& q : all) den_lcm = lcm(den_lcm, rat_den(q));
  Integer num_gcd = 0;
  for (const Rational& q : all) num_gcd = gcd(num_gcd, Integer(rat_num(q) * (den_lcm / rat_den(q))));
  if (num_gcd == 0) throw internal_error("normalize_hyperplane: zero functional");
  Rational scale(den_lcm, num_gcd);
  for (const Rational& q : all)
    if (q != 0) {
      if (q * scale < 0) scale = -scale;
      break;
    }
  AffineFn out;
  out.coeff.reserve(l.coeff.size());
  for (const Rational& q : l.coeff) out.coeff.push_back(q * scale);
  out.constant = l.constant * scale;
  return out;
}

// ============================================================================
// Exact linear algebra (reduced row echelon form and friends)
// ============================================================================

namespace {

using Matrix = std::vector<std::vector<Rational>>;

// In-place RREF; returns the pivot column per pivot row, in order.
std::vector<int> rref(Matrix& m) {
  std::vector<int> pivots;
  if (m.empty()) return pivots;
  int rows = static_cast<int>(m.size());
  int cols = static_cast<int>(m[0].size());
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int pivot_row = -1;
    for (int i = r; i < rows; ++i)
      if (m[i][c] != 0) {
        pivot_row = i;
        break;
      }
    if (pivot_row < 0) continue;
    std::swap(m[r], m[pivot_row]);
    Rational head = m[r][c];
    for (int j = c; j < cols; ++j) m[r][j] /= head;
    for (int i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rational factor = m[i][c];
      for (int j = c; j < cols; ++j) m[i][j] -= factor * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

int edge_rank(const std::vector<Point>& vertices) {
  if (vertices.size() <= 1) return 0;
  Matrix m;
  m.reserve(vertices.size() - 1);
  for (std::size_t i = 1; i < vertices.size(); ++i) {
    std::vector<Rational> row(vertices[i].size());
    for (std::size_t d = 0; d < row.size(); ++d) row[d] = vertices[i][d] - vertices[0][d];
    m.push_back(std::move(row));
  }
  return static_cast<int>(rref(m).size());
}

// Keep only pieces not strictly contained in another piece. The input must be
// deduplicated; then mutual containment of distinct simplices is impossible,
// so the maximal pieces are exactly the undominated ones. A simplex lies in a
// convex set iff all its vertices do.
std::vector<Simplex> drop_dominated(const std::vector<Simplex>& pieces) {
  std::vector<Simplex> out;
  for (const Simplex& f : pieces) {
    bool dominated = false;
    for (const Simplex& g : pieces) {
      if (f == g) continue;
      if (std::all_of(f.vertices().begin(), f.vertices().end(),
                      [&](const Point& v) { return simplex_contains(g, v); })) {
        dominated = true;
        break;
      }
    }
    if (!dominated) out.push_back(f);
  }
  return out;
}

}  // namespace

// ============================================================================
// Simplex
// ============================================================================

Simplex::Simplex(int ambient, std::vector<Point> vertices)
    : ambient_(ambient), vertices_(std::move(vertices)) {
  if (ambient_ < 0) throw domain_error("simplex: negative ambient dimension");
  if (vertices_.empty()) throw domain_error("simplex: empty vertex list");
  for (const Point& v : vertices_) {
    if (static_cast<int>(v.size()) != ambient_)
      throw domain_error("simplex: vertex dimension differs from ambient dimension");
    for (const Rational& c : v)
      if (!in_unit_interval(c))
        throw domain_error("simplex: vertex coordinate " + rat_to_string(c) + " outside [0,1]");
  }
  std::sort(vertices_.begin(), vertices_.end());
  if (std::adjacent_find(vertices_.begin(), vertices_.end()) != vertices_.end())
    throw domain_error("simplex: repeated vertex");
  if (static_cast<int>(vertices_.size()) > ambient_ + 1 ||
      edge_rank(vertices_) != static_cast<int>(vertices_.size()) - 1)
    throw domain_error("simplex: vertices not affinely independent");
}

Simplex::Simplex(Unchecked, int ambient, std::vector<Point> vertices)
    : ambient_(ambient), vertices_(std::move(vertices)) {
  std::sort(vertices_.begin(), vertices_.end());
}

Simplex Simplex::unchecked(int ambient, std::vector<Point> vertices) {
  return Simplex(Unchecked{}, ambient, std::move(vertices));
}

Point Simplex::barycenter() const {
  Point c(ambient_, Rational(0));
  for (const Point& v : vertices_)
    for (int d = 0; d < ambient_; ++d) c[d] += v[d];
  Rational count(static_cast<int>(vertices_.size()));
  for (int d = 0; d < ambient_; ++d) c[d] /= count;
  return c;
}

std::vector<Simplex> Simplex::faces() const {
  std::vector<Simplex> out;
  std::size_t n = vertices_.size();
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    std::vector<Point> subset;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (std::size_t{1} << i)) subset.push_back(vertices_[i]);
    out.emplace_back(ambient_, std::move(subset));
  }
  return out;
}

bool simplex_lex_less(const Simplex& a, const Simplex& b) {
  if (a.dim() != b.dim()) return a.dim() < b.dim();
  return a.vertices() < b.vertices();
}

Rational simplex_volume(const Simplex& s) {
  if (s.dim() != s.ambient())
    throw domain_error("simplex_volume: simplex is not full-dimensional");
  int n = s.ambient();
  if (n == 0) return Rational(1);
  Matrix m;
  m.reserve(n);
  for (int i = 1; i <= n; ++i) {
    std::vector<Rational> row(n);
    for (int d = 0; d < n; ++d) row[d] = s.vertices()[i][d] - s.vertices()[0][d];
    m.push_back(std::move(row));
  }
  Rational det(1);
  for (int c = 0, r = 0; c < n; ++c, ++r) {
    int pivot_row = -1;
    for (int i = r; i < n; ++i)
      if (m[i][c] != 0) {
        pivot_row = i;
        break;
      }
    if (pivot_row < 0) return Rational(0);
    if (pivot_row != r) {
      std::swap(m[r], m[pivot_row]);
      det = -det;
    }
    det *= m[r][c];
    for (int i = r + 1; i < n; ++i) {
      if (m[i][c] == 0) continue;
      Rational factor = m[i][c] / m[r][c];
      for (int j = c; j < n; ++j) m[i][j] -= factor * m[r][j];
    }
  }
  if (det < 0) det = -det;
  Integer fact = 1;
  for (int i = 2; i <= n; ++i) fact *= i;
  return det / Rational(fact);
}

std::optional<std::vector<Rational>> barycentric_coordinates(const Simplex& s, const Point& x) {
  if (static_cast<int>(x.size()) != s.ambient())
    throw domain_error("barycentric_coordinates: point dimension mismatch");
  std::size_t k = s.vertices().size();
  Matrix m;
  m.reserve(s.ambient() + 1);
  for (int d = 0; d < s.ambient(); ++d) {
    std::vector<Rational> row(k + 1);
    for (std::size_t j = 0; j < k; ++j) row[j] = s.vertices()[j][d];
    row[k] = x[d];
    m.push_back(std::move(row));
  }
  m.emplace_back(k + 1, Rational(1));  // sum of weights = 1, augmented entry 1
  std::vector<int> pivots = rref(m);
  for (int p : pivots)
    if (p == static_cast<int>(k)) return std::nullopt;  // pivot in augmented column
  if (pivots.size() != k)
    throw internal_error("barycentric_coordinates: degenerate simplex slipped through");
  std::vector<Rational> lambda(k);
  for (std::size_t r = 0; r < pivots.size(); ++r) lambda[pivots[r]] = m[r][k];
  return lambda;
}

bool simplex_contains(const Simplex& s, const Point& x) {
  auto lambda = barycentric_coordinates(s, x);
  if (!lambda) return false;
  for (const Rational& l : *lambda)
    if (l < 0) return false;
  return true;
}

std::vector<Simplex> kuhn_complex(int n) {
  if (n < 0 || n > config::kMaxCubeDim)
    throw domain_error("cube triangulation: dimension out of range");
  std::vector<Simplex> cells;
  if (n == 0) {
    cells.emplace_back(0, std::vector<Point>{Point{}});
    return cells;
  }
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  do {
    std::vector<Point> vs;
    vs.reserve(n + 1);
    Point p(n, Rational(0));
    vs.push_back(p);
    for (int step = 0; step < n; ++step) {
      p[perm[step]] = 1;
      vs.push_back(p);
    }
    cells.emplace_back(n, std::move(vs));
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::sort(cells.begin(), cells.end(), simplex_lex_less);
  return cells;
}

std::vector<Simplex> triangulate_cube(int n) {
  if (n < 1) throw domain_error("triangulate_cube: dimension out of range");
  return kuhn_complex(n);
}

SimplexFunctionals simplex_functionals(const Simplex& s) {
  SimplexFunctionals out;
  int n = s.ambient();
  std::size_t k = s.vertices().size();

  // Affine hull: nullspace of the (k x (n+1)) system [v | 1] y = 0.
  {
    Matrix m;
    m.reserve(k);
    for (const Point& v : s.vertices()) {
      std::vector<Rational> row(n + 1);
      for (int d = 0; d < n; ++d) row[d] = v[d];
      row[n] = 1;
      m.push_back(std::move(row));
    }
    std::vector<int> pivots = rref(m);
    std::vector<bool> is_pivot(n + 1, false);
    for (int p : pivots) is_pivot[p] = true;
    for (int free = 0; free <= n; ++free) {
      if (is_pivot[free]) continue;
      std::vector<Rational> y(n + 1, Rational(0));
      y[free] = 1;
      for (std::size_t r = 0; r < pivots.size(); ++r) y[pivots[r]] = -m[r][free];
      AffineFn fn;
      fn.coeff.assign(y.begin(), y.begin() + n);
      fn.constant = y[n];
      out.hull.push_back(normalize_hyperplane(fn));
    }
  }

  // One functional per facet: zero on the facet, one at the opposite vertex.
  if (s.dim() >= 1) {
    for (std::size_t omit = 0; omit < k; ++omit) {
      Matrix m;
      m.reserve(k);
      for (std::size_t j = 0; j < k; ++j) {
        std::vector<Rational> row(n + 2);
        for (int d = 0; d < n; ++d) row[d] = s.vertices()[j][d];
        row[n] = 1;
        row[n + 1] = (j == omit) ? Rational(1) : Rational(0);
        m.push_back(std::move(row));
      }
      std::vector<int> pivots = rref(m);
      std::vector<Rational> y(n + 1, Rational(0));
      for (std::size_t r = 0; r < pivots.size(); ++r) {
        if (pivots[r] == n + 1) throw internal_error("facet functional: inconsistent system");
        y[pivots[r]] = m[r][n + 1];
      }
      AffineFn fn;
      fn.coeff.assign(y.begin(), y.begin() + n);
      fn.constant = y[n];
      out.facets.push_back(fn);
    }
  }
  return out;
}

// ============================================================================
// Level-set subdivision via stellar subdivision at edge crossings
// ============================================================================

void stellar_subdivide(std::vector<Simplex>& cells, std::vector<std::size_t>& parent,
                       const std::vector<Point>& face, const Point& w) {
  if (cells.size() != parent.size()) throw internal_error("stellar_subdivide: payload mismatch");
  std::vector<Simplex> next;
  std::vector<std::size_t> next_parent;
  next.reserve(cells.size());
  next_parent.reserve(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const std::vector<Point>& vs = cells[i].vertices();
    bool has_face = std::all_of(face.begin(), face.end(), [&](const Point& f) {
      return std::binary_search(vs.begin(), vs.end(), f);
    });
    if (!has_face) {
      next.push_back(std::move(cells[i]));
      next_parent.push_back(parent[i]);
      continue;
    }
    for (const Point& drop : face) {
      std::vector<Point> child;
      child.reserve(vs.size());
      for (const Point& v : vs)
        if (v != drop) child.push_back(v);
      child.push_back(w);
      next.push_back(Simplex::unchecked(cells[i].ambient(), std::move(child)));
      next_parent.push_back(parent[i]);
    }
  }
  cells = std::move(next);
  parent = std::move(next_parent);
}

LevelSplit split_cells_at_level(std::vector<Simplex> cells, std::vector<AffineFn> per_cell,
                                const Rational& level) {
  if (cells.size() != per_cell.size())
    throw internal_error("split_cells_at_level: one affine per cell required");
  LevelSplit out;
  out.cells = std::move(cells);
  out.parent.resize(out.cells.size());
  for (std::size_t i = 0; i < out.parent.size(); ++i) out.parent[i] = i;

  // Values of the (continuous) function at original vertices. New vertices
  // land exactly on the level, so they never contribute further crossings and
  // the candidate set below is complete from the start.
  std::map<Point, Rational> value;
  auto value_of = [&](const Point& p, std::size_t cell) -> const Rational& {
    auto it = value.find(p);
    if (it == value.end()) it = value.emplace(p, per_cell[out.parent[cell]].eval(p)).first;
    return it->second;
  };

  std::set<std::tuple<Point, Point, Point>> pending;  // (crossing, endpoint a, endpoint b)
  for (std::size_t i = 0; i < out.cells.size(); ++i) {
    const std::vector<Point>& vs = out.cells[i].vertices();
    for (std::size_t p = 0; p < vs.size(); ++p)
      for (std::size_t q = p + 1; q < vs.size(); ++q) {
        const Rational& va = value_of(vs[p], i);
        const Rational& vb = value_of(vs[q], i);
        if ((va < level && vb > level) || (va > level && vb < level)) {
          Rational t = (level - va) / (vb - va);
          Point w(vs[p].size());
          for (std::size_t d = 0; d < w.size(); ++d)
            w[d] = vs[p][d] + t * (vs[q][d] - vs[p][d]);
          pending.emplace(std::move(w), vs[p], vs[q]);
        }
      }
  }

  while (!pending.empty()) {
    auto [w, a, b] = *pending.begin();
    pending.erase(pending.begin());
    bool edge_alive = false;
    for (const Simplex& c : out.cells) {
      const std::vector<Point>& vs = c.vertices();
      if (std::binary_search(vs.begin(), vs.end(), a) &&
          std::binary_search(vs.begin(), vs.end(), b)) {
        edge_alive = true;
        break;
      }
    }
    if (!edge_alive) continue;
    stellar_subdivide(out.cells, out.parent, {a, b}, w);
    value.emplace(std::move(w), level);
    if (out.cells.size() > config::cell_cap())
      throw cell_cap_exceeded(out.cells.size(), config::cell_cap());
  }
  return out;
}

LevelSplit split_cells_by_hyperplane(std::vector<Simplex> cells, const AffineFn& h) {
  std::vector<AffineFn> per_cell(cells.size(), h);
  return split_cells_at_level(std::move(cells), std::move(per_cell), Rational(0));
}

namespace {

/// A simplex under construction, with fn's value at each vertex kept
/// index-aligned so children inherit values instead of re-evaluating.
struct ValuedCell {
  std::vector<Point> vs;
  std::vector<Rational> val;
};

/// Core of split_simplex_at_level: only the root is ever evaluated; every
/// child vertex is either inherited or the crossing point (value = level).
std::vector<ValuedCell> split_valued(const Simplex& cell, const AffineFn& fn,
                                     const Rational& level) {
  std::vector<ValuedCell> done;
  std::vector<ValuedCell> work(1);
  work.front().vs = cell.vertices();
  work.front().val.reserve(work.front().vs.size());
  for (const Point& v : work.front().vs) work.front().val.push_back(fn.eval(v));
  while (!work.empty()) {
    ValuedCell s = std::move(work.back());
    work.pop_back();
    int p = -1, q = -1;
    for (std::size_t i = 0; i < s.vs.size() && p < 0; ++i)
      for (std::size_t j = i + 1; j < s.vs.size(); ++j)
        if ((s.val[i] < level && s.val[j] > level) || (s.val[i] > level && s.val[j] < level)) {
          p = static_cast<int>(i);
          q = static_cast<int>(j);
          break;
        }
    if (p < 0) {
      done.push_back(std::move(s));
      continue;
    }
    // The crossing point lies strictly inside the edge, so replacing either
    // endpoint keeps affine independence, and both children lose this
    // crossing edge while gaining none (one endpoint sits at the level).
    Rational t = (level - s.val[p]) / (s.val[q] - s.val[p]);
    Point w(s.vs[p].size());
    for (std::size_t d = 0; d < w.size(); ++d) w[d] = s.vs[p][d] + t * (s.vs[q][d] - s.vs[p][d]);
    ValuedCell first = s;
    first.vs[p] = w;
    first.val[p] = level;
    s.vs[q] = std::move(w);
    s.val[q] = level;
    work.push_back(std::move(first));
    work.push_back(std::move(s));
  }
  return done;
}

}  // namespace

std::vector<Simplex> split_simplex_at_level(const Simplex& cell, const AffineFn& fn,
                                            const Rational& level) {
  std::vector<Simplex> out;
  for (ValuedCell& piece : split_valued(cell, fn, level))
    out.push_back(Simplex::unchecked(cell.ambient(), std::move(piece.vs)));
  return out;
}

std::vector<Simplex> clip_simplex_above(const Simplex& cell, const AffineFn& fn,
                                        const Rational& level) {
  std::vector<Simplex> kept;
  for (ValuedCell& piece : split_valued(cell, fn, level)) {
    // Each piece is weakly on one side, so it belongs to the closed upper
    // side exactly when every vertex value is >= level.
    bool upper = std::all_of(piece.val.begin(), piece.val.end(),
                             [&](const Rational& v) { return v >= level; });
    if (upper) kept.push_back(Simplex::unchecked(cell.ambient(), std::move(piece.vs)));
  }
  return kept;
}

LevelSplit partition_cells_at_level(const std::vector<Simplex>& cells,
                                    const std::vector<AffineFn>& per_cell,
                                    const Rational& level) {
  if (cells.size() != per_cell.size())
    throw internal_error("partition_cells_at_level: one affine per cell required");
  LevelSplit out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    for (Simplex& piece : split_simplex_at_level(cells[i], per_cell[i], level)) {
      out.cells.push_back(std::move(piece));
      out.parent.push_back(i);
    }
    if (out.cells.size() > config::cell_cap())
      throw cell_cap_exceeded(out.cells.size(), config::cell_cap());
  }
  return out;
}

namespace {

/// The facet vertex strictly between a and b, if any. Exact: v = a + t(b-a)
/// with 0 < t < 1, t read off the first coordinate where a and b differ.
const Point* between_on_facet(const std::vector<Point>& facet, const Point& a, const Point& b) {
  std::size_t d0 = a.size();
  for (std::size_t d = 0; d < a.size(); ++d)
    if (a[d] != b[d]) {
      d0 = d;
      break;
    }
  if (d0 == a.size()) return nullptr;  // a == b: cannot happen for distinct cells
  for (const Point& v : facet) {
    Rational t = (v[d0] - a[d0]) / (b[d0] - a[d0]);
    if (!(t > 0 && t < 1)) continue;
    bool on_segment = true;
    for (std::size_t d = 0; d < a.size() && on_segment; ++d)
      on_segment = (v[d] == a[d] + t * (b[d] - a[d]));
    if (on_segment) return &v;
  }
  return nullptr;
}

}  // namespace

namespace {

/// Order-insensitive only across runs of the same input: points are hashed
/// through their double approximation (equal rationals give equal doubles),
/// and digest collisions are resolved by exact comparison at the caller.
std::size_t facet_digest(const std::vector<Point>& vs, std::size_t skip) {
  std::size_t h = 0xcbf29ce484222325ull;
  for (std::size_t k = 0; k < vs.size(); ++k) {
    if (k == skip) continue;
    for (const Rational& x : vs[k]) {
      std::size_t hx = std::hash<double>()(static_cast<double>(x));
      h ^= hx + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
  }
  return h;
}

bool same_facet(const std::vector<Point>& a, std::size_t skip_a, const std::vector<Point>& b,
                std::size_t skip_b) {
  std::size_t ia = 0, ib = 0;
  while (true) {
    if (ia == skip_a) ++ia;
    if (ib == skip_b) ++ib;
    if (ia == a.size()) return ib == b.size();
    if (ib == b.size()) return false;
    if (!(a[ia] == b[ib])) return false;
    ++ia;
    ++ib;
  }
}

}  // namespace

void coarsen_partition(std::vector<Simplex>& cells, std::vector<std::size_t>& labels) {
  if (cells.size() != labels.size())
    throw internal_error("coarsen_partition: one label per cell required");
  if (cells.size() < 2) return;
  std::vector<char> dead(cells.size(), 0);
  // A facet (exact vertex set) can bound at most two live cells of a
  // partition; buckets hold (cell, opposite-vertex index) entries and are
  // cleaned lazily as cells die.
  std::unordered_map<std::size_t, std::vector<std::pair<std::size_t, std::size_t>>> by_facet;
  by_facet.reserve(cells.size() * (cells.front().vertices().size() + 1));
  std::vector<std::size_t> pending(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) pending[i] = cells.size() - 1 - i;
  while (!pending.empty()) {
    std::size_t i = pending.back();
    pending.pop_back();
    if (dead[i]) continue;
    const std::vector<Point>& vs = cells[i].vertices();
    bool merged = false;
    for (std::size_t j = 0; !merged && j < vs.size(); ++j) {
      auto& bucket = by_facet[facet_digest(vs, j)];
      for (auto& [other, l] : bucket) {
        if (dead[other] || labels[other] != labels[i]) continue;
        const std::vector<Point>& ws = cells[other].vertices();
        if (!same_facet(vs, j, ws, l)) continue;
        const Point& a = ws[l];
        const Point& b = vs[j];
        std::vector<Point> facet;
        facet.reserve(vs.size() - 1);
        for (std::size_t k = 0; k < vs.size(); ++k)
          if (k != j) facet.push_back(vs[k]);
        const Point* v = between_on_facet(facet, a, b);
        if (v == nullptr) continue;
        std::vector<Point> merged_vs;
        merged_vs.reserve(vs.size());
        for (const Point& w : facet)
          if (!(w == *v)) merged_vs.push_back(w);
        merged_vs.push_back(a);
        merged_vs.push_back(b);
        // The union of two disjoint-interior full-dimensional simplices has
        // positive volume, so these vertices are affinely independent.
        std::size_t label = labels[i];
        int ambient = cells[i].ambient();
        dead[i] = 1;
        dead[other] = 1;
        cells.push_back(Simplex::unchecked(ambient, std::move(merged_vs)));
        labels.push_back(label);
        dead.push_back(0);
        pending.push_back(cells.size() - 1);
        merged = true;
        break;
      }
      if (!merged) bucket.emplace_back(i, j);
    }
  }
  std::size_t keep = 0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (dead[i]) continue;
    if (keep != i) {
      cells[keep] = std::move(cells[i]);
      labels[keep] = labels[i];
    }
    ++keep;
  }
  cells.erase(cells.begin() + static_cast<std::ptrdiff_t>(keep), cells.end());
  labels.resize(keep);
}

std::vector<Simplex> slice_simplex(const Simplex& s, const AffineFn& h, const Rational& level) {
  LevelSplit split = split_cells_at_level({s}, {h}, level);
  std::vector<Simplex> collected;
  for (const Simplex& cell : split.cells) {
    std::vector<Point> zeros;
    for (const Point& v : cell.vertices())
      if (h.eval(v) == level) zeros.push_back(v);
    if (!zeros.empty()) collected.emplace_back(s.ambient(), std::move(zeros));
  }
  std::sort(collected.begin(), collected.end(), simplex_lex_less);
  collected.erase(std::unique(collected.begin(), collected.end()), collected.end());
  return drop_dominated(collected);
}

AffineFn affine_through(const std::vector<Point>& points, const std::vector<Rational>& values) {
  if (points.empty() || points.size() != values.size())
    throw internal_error("affine_through: need one value per point");
  const std::size_t n = points[0].size();
  if (points.size() != n + 1)
    throw internal_error("affine_through: need n+1 points in dimension n");
  Matrix m;
  m.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    std::vector<Rational> row(n + 2);
    for (std::size_t d = 0; d < n; ++d) row[d] = points[i][d];
    row[n] = 1;
    row[n + 1] = values[i];
    m.push_back(std::move(row));
  }
  std::vector<int> pivots = rref(m);
  if (pivots.size() != n + 1 || pivots.back() == static_cast<int>(n + 1))
    throw internal_error("affine_through: points are affinely dependent");
  AffineFn out;
  out.coeff.resize(n);
  for (std::size_t r = 0; r < pivots.size(); ++r) {
    if (pivots[r] < static_cast<int>(n))
      out.coeff[pivots[r]] = m[r][n + 1];
    else
      out.constant = m[r][n + 1];
  }
  return out;
}

std::vector<Point> collect_vertices(const std::vector<Simplex>& cells) {
  std::vector<Point> out;
  for (const Simplex& c : cells)
    out.insert(out.end(), c.vertices().begin(), c.vertices().end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Rational total_volume(const std::vector<Simplex>& cells) {
  Rational acc(0);
  for (const Simplex& c : cells)
    if (c.dim() == c.ambient()) acc += simplex_volume(c);
  return acc;
}

// ============================================================================
// RationalPolyhedron
// ============================================================================

RationalPolyhedron::RationalPolyhedron(int ambient, std::vector<Simplex> pieces)
    : ambient_(ambient), pieces_(std::move(pieces)) {
  if (ambient_ < 0) throw domain_error("polyhedron: negative ambient dimension");
  for (const Simplex& s : pieces_)
    if (s.ambient() != ambient_)
      throw domain_error("polyhedron: piece ambient dimension mismatch");
  std::sort(pieces_.begin(), pieces_.end(), simplex_lex_less);
  pieces_.erase(std::unique(pieces_.begin(), pieces_.end()), pieces_.end());
  pieces_ = drop_dominated(pieces_);
}

RationalPolyhedron RationalPolyhedron::empty(int ambient) {
  return RationalPolyhedron(ambient, {});
}

RationalPolyhedron RationalPolyhedron::from_simplices(int ambient, std::vector<Simplex> pieces) {
  return RationalPolyhedron(ambient, std::move(pieces));
}

RationalPolyhedron RationalPolyhedron::full_cube(int n) {
  return RationalPolyhedron(n, kuhn_complex(n));
}

bool RationalPolyhedron::contains_point(const Point& x) const {
  for (const Simplex& s : pieces_)
    if (simplex_contains(s, x)) return true;
  return false;
}

std::vector<AffineFn> RationalPolyhedron::supporting_functionals() const {
  std::vector<AffineFn> out;
  for (const Simplex& s : pieces_) {
    SimplexFunctionals fns = simplex_functionals(s);
    for (const AffineFn& h : fns.hull) out.push_back(h);
    for (const AffineFn& h : fns.facets) out.push_back(normalize_hyperplane(h));
  }
  auto key = [](const AffineFn& f) {
    std::vector<Rational> k = f.coeff;
    k.push_back(f.constant);
    return k;
  };
  std::sort(out.begin(), out.end(),
            [&](const AffineFn& a, const AffineFn& b) { return key(a) < key(b); });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool polyhedron_contains(const RationalPolyhedron& outer, const RationalPolyhedron& inner) {
  if (outer.ambient() != inner.ambient())
    throw domain_error("polyhedron_contains: ambient dimension mismatch");
  if (inner.is_empty()) return true;
  if (outer.is_empty()) return false;
  std::vector<AffineFn> fns = outer.supporting_functionals();
  for (const Simplex& piece : inner.pieces()) {
    std::vector<Simplex> cells{piece};
    for (const AffineFn& h : fns) {
      LevelSplit split = split_cells_by_hyperplane(std::move(cells), h);
      cells = std::move(split.cells);
    }
    for (const Simplex& c : cells)
      if (!outer.contains_point(c.barycenter())) return false;
  }
  return true;
}

bool polyhedron_equal(const RationalPolyhedron& a, const RationalPolyhedron& b) {
  return polyhedron_contains(a, b) && polyhedron_contains(b, a);
}

RationalPolyhedron polyhedron_intersection(const RationalPolyhedron& a,
                                           const RationalPolyhedron& b) {
  if (a.ambient() != b.ambient())
    throw domain_error("polyhedron_intersection: ambient dimension mismatch");
  if (a.is_empty() || b.is_empty()) return RationalPolyhedron::empty(a.ambient());
  std::vector<AffineFn> fns = b.supporting_functionals();
  std::vector<Simplex> kept;
  for (const Simplex& piece : a.pieces()) {
    std::vector<Simplex> cells{piece};
    for (const AffineFn& h : fns) {
      LevelSplit split = split_cells_by_hyperplane(std::move(cells), h);
      cells = std::move(split.cells);
    }
    // Membership in b is constant on the relative interior of every face of
    // the refined cells, so barycenter tests pick out exactly the faces that
    // lie inside b — including boundary-only contacts of lower dimension.
    for (const Simplex& c : cells)
      for (const Simplex& face : c.faces())
        if (b.contains_point(face.barycenter())) kept.push_back(face);
  }
  return RationalPolyhedron::from_simplices(a.ambient(), std::move(kept));
}

}  // namespace rzl
