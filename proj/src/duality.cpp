#include "rzl/duality.hpp"

#include "rzl/config.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace rzl {

const char* to_string(AlgebraClass c) {
  switch (c) {
    case AlgebraClass::MV: return "MV";
    case AlgebraClass::DMV: return "DMV";
    case AlgebraClass::RMV: return "RMV";
  }
  return "?";
}

Presentation Presentation::exact(AlgebraClass cls, PwlFunction generator) {
  if (cls == AlgebraClass::MV && coefficient_class(generator) != CoefficientClass::Integer)
    throw domain_error(
        "an MV presentation needs an integer-coefficient generator "
        "(mv_generator produces an equivalent one)");
  const int n = generator.dim();
  return Presentation(cls, n, std::variant<PwlFunction, IntervalPwl>(std::move(generator)));
}

Presentation Presentation::enclosure(IntervalPwl generator) {
  const int n = generator.lower.dim();
  return Presentation(AlgebraClass::RMV, n,
                      std::variant<PwlFunction, IntervalPwl>(std::move(generator)));
}

const PwlFunction& Presentation::exact_generator() const {
  if (!is_exact())
    throw domain_error("presentation holds enclosure data, not an exact generator");
  return std::get<PwlFunction>(gen_);
}

const IntervalPwl& Presentation::interval_generator() const {
  if (is_exact())
    throw domain_error("presentation holds an exact generator, not enclosure data");
  return std::get<IntervalPwl>(gen_);
}

ZeroSetResult zero_set(const Presentation& p) {
  if (p.is_exact()) {
    RationalPolyhedron z = pwl_zero_set(p.exact_generator());
    return {true, z, z, std::nullopt};
  }
  const IntervalPwl& g = p.interval_generator();
  return {false, pwl_zero_set(g.lower), pwl_zero_set(g.upper), g.precision};
}

namespace {

Point face_barycenter(const std::vector<Point>& vs) {
  Point b(vs.front().size(), Rational(0));
  for (const Point& v : vs)
    for (std::size_t i = 0; i < b.size(); ++i) b[i] += v[i];
  for (Rational& c : b) c /= static_cast<int>(vs.size());
  return b;
}

}  // namespace

Presentation presentation_of(const RationalPolyhedron& P, AlgebraClass cls) {
  if (cls == AlgebraClass::MV)
    throw domain_error(
        "presentation_of produces rational hat coefficients; request DMV or RMV "
        "(mv_generator converts the generator afterwards)");
  const int n = P.ambient();
  if (P.is_empty()) return Presentation::exact(cls, PwlFunction::constant(n, Rational(1)));

  // Cut the cube triangulation along every hyperplane supporting a piece of
  // P. Afterwards membership in P is constant on the relative interior of
  // every face of every cell, so a barycenter test decides it.
  std::vector<Simplex> cells = kuhn_complex(n);
  for (const AffineFn& h : P.supporting_functionals()) {
    LevelSplit s = split_cells_by_hyperplane(std::move(cells), h);
    cells = std::move(s.cells);
  }

  std::map<Point, Rational> label;
  auto label_of = [&](const Point& v) -> const Rational& {
    auto it = label.find(v);
    if (it == label.end())
      it = label.emplace(v, P.contains_point(v) ? Rational(0) : Rational(1)).first;
    return it->second;
  };

  // A spurious zero face: >= 2 vertices, all labeled 0, barycenter outside P.
  // Interpolating the labels would wrongly vanish on its whole span. One scan
  // suffices: repairs insert a vertex labeled 1, so every face created later
  // contains a 1-labeled vertex and can never become all-zero.
  std::set<std::vector<Point>> pending;
  for (const Simplex& c : cells) {
    std::vector<Point> zeros;
    for (const Point& v : c.vertices())
      if (label_of(v) == 0) zeros.push_back(v);
    if (zeros.size() < 2) continue;
    const unsigned full = 1u << zeros.size();
    for (unsigned mask = 1; mask < full; ++mask) {
      if (std::popcount(mask) < 2) continue;
      std::vector<Point> face;
      for (std::size_t i = 0; i < zeros.size(); ++i)
        if (mask & (1u << i)) face.push_back(zeros[i]);
      if (!P.contains_point(face_barycenter(face))) pending.insert(std::move(face));
    }
  }

  std::vector<std::size_t> parent(cells.size());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;

  while (!pending.empty()) {
    std::vector<Point> face = *pending.begin();
    pending.erase(pending.begin());
    // The face may have been destroyed by an earlier repair; once gone it can
    // never reappear, because subdivision only shrinks cell vertex sets.
    bool alive = false;
    for (const Simplex& c : cells)
      if (std::includes(c.vertices().begin(), c.vertices().end(), face.begin(), face.end())) {
        alive = true;
        break;
      }
    if (!alive) continue;
    Point w = face_barycenter(face);
    label.emplace(w, Rational(1));
    stellar_subdivide(cells, parent, face, w);
    if (cells.size() > config::cell_cap())
      throw cell_cap_exceeded(cells.size(), config::cell_cap());
  }

  std::vector<AffineFn> affines;
  affines.reserve(cells.size());
  for (const Simplex& c : cells) {
    std::vector<Rational> vals;
    vals.reserve(c.vertices().size());
    for (const Point& v : c.vertices()) vals.push_back(label_of(v));
    affines.push_back(affine_through(c.vertices(), vals));
  }
  return Presentation::exact(cls, PwlFunction(n, std::move(cells), std::move(affines)));
}

MvGeneratorResult mv_generator(const PwlFunction& f) {
  Integer k = 1;
  for (const std::vector<std::size_t>& region : linearity_regions(f)) {
    const AffineFn& a = f.affines()[region.front()];
    for (const Rational& c : a.coeff) k = lcm(k, rat_den(c));
    k = lcm(k, rat_den(a.constant));
  }
  PwlFunction witness = mv_multiple(f, k);
  return {std::move(k), std::move(witness)};
}

MvGeneratedResult is_mv_generated(const Presentation& p) {
  MvGeneratedResult out;
  if (p.is_exact()) {
    MvGeneratorResult g = mv_generator(p.exact_generator());
    out.known = true;
    out.k = std::move(g.k);
    out.witness = std::move(g.witness);
    return out;
  }
  const IntervalPwl& g = p.interval_generator();
  out.known = false;
  out.outer = pwl_zero_set(g.lower);
  out.inner = pwl_zero_set(g.upper);
  out.precision = g.precision;
  return out;
}

namespace {

int class_rank(AlgebraClass c) {
  switch (c) {
    case AlgebraClass::MV: return 0;
    case AlgebraClass::DMV: return 1;
    case AlgebraClass::RMV: return 2;
  }
  throw internal_error("class_rank: unhandled algebra class");
}

}  // namespace

Presentation extend_scalars(const Presentation& p, AlgebraClass target) {
  if (class_rank(target) < class_rank(p.algebra()))
    throw domain_error(std::string("extend_scalars only widens the scalar class: ") +
                       to_string(p.algebra()) + " -> " + to_string(target) + " narrows");
  if (p.is_exact()) return Presentation::exact(target, p.exact_generator());
  return Presentation::enclosure(p.interval_generator());
}

void Substitution::set(int var_index, Formula image) {
  if (var_index < 1) throw domain_error("substitution variables are 1-based");
  images_.insert_or_assign(var_index, std::move(image));
}

namespace {

Formula apply_rec(const Substitution& sigma, const Formula& f,
                  std::map<const void*, Formula>& memo) {
  auto hit = memo.find(f.node_key());
  if (hit != memo.end()) return hit->second;
  Formula out = [&]() -> Formula {
    switch (f.kind()) {
      case Formula::Kind::Var: {
        auto img = sigma.images().find(f.var_index());
        return img == sigma.images().end() ? f : img->second;
      }
      case Formula::Kind::Const1:
        return f;
      case Formula::Kind::Neg:
        return Formula::neg(apply_rec(sigma, f.child(), memo));
      case Formula::Kind::Oplus:
        return Formula::oplus(apply_rec(sigma, f.left(), memo),
                              apply_rec(sigma, f.right(), memo));
      case Formula::Kind::Nabla:
        return Formula::nabla(f.scalar(), apply_rec(sigma, f.child(), memo));
    }
    throw internal_error("apply: unhandled formula kind");
  }();
  memo.emplace(f.node_key(), out);
  return out;
}

}  // namespace

Formula apply(const Substitution& sigma, const Formula& f) {
  std::map<const void*, Formula> memo;
  return apply_rec(sigma, f, memo);
}

MvPreservingResult is_mv_preserving(const Substitution& sigma) {
  for (const auto& [x, image] : sigma.images())
    if (image.inexact_scalar_count() > 0)
      throw domain_error("is_mv_preserving: the image of v" + std::to_string(x) +
                         " contains an inexact scalar; only exact images are decidable");
  MvPreservingResult out;
  for (const auto& [x, image] : sigma.images()) {
    if (coefficient_class(compile(image)) != CoefficientClass::Integer) {
      out.preserving = false;
      out.offender = x;
      return out;
    }
  }
  return out;
}

namespace {

/// The k-fold truncated sum f + ... + f built from the binary connective by
/// double-and-add: min(1, a·f) + min(1, b·f) truncates to min(1, (a+b)·f)
/// for nonnegative f, so the accumulator stays the exact partial sum.
PwlFunction k_fold_oplus(const PwlFunction& f, const Integer& k) {
  if (k < 1) throw domain_error("k_fold_oplus needs k >= 1");
  if (k == 1) return f;
  const unsigned top = boost::multiprecision::msb(k);
  PwlFunction acc = f;
  for (int i = static_cast<int>(top) - 1; i >= 0; --i) {
    acc = apply_connective(PwlOp::Oplus, acc, &acc);
    if (boost::multiprecision::bit_test(k, static_cast<unsigned>(i)))
      acc = apply_connective(PwlOp::Oplus, acc, &f);
  }
  return acc;
}

}  // namespace

LGeneratedWitness l_generated_witness(const Formula& phi) {
  if (phi.inexact_scalar_count() > 0)
    throw domain_error(
        "l_generated_witness needs exact scalars; for enclosure data use "
        "is_mv_generated on an enclosure presentation");
  PwlFunction f = compile(phi);
  MvGeneratorResult g = mv_generator(f);
  const bool leq = pwl_leq(f, g.witness);
  const bool ksum = pwl_equal(g.witness, k_fold_oplus(f, g.k));
  return {std::move(g.k), std::move(f), std::move(g.witness), leq, ksum};
}

}  // namespace rzl
