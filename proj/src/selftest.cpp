#include "rzl/selftest.hpp"

#include "rzl/analysis.hpp"
#include "rzl/errors.hpp"
#include "rzl/parser.hpp"

#include <utility>

namespace rzl {

int Rng::below(int n) {
  if (n < 1) throw internal_error("Rng::below requires n >= 1");
  return static_cast<int>(raw() % static_cast<std::uint64_t>(n));
}

Rational Rng::unit_rational(int max_den) {
  if (max_den < 1) throw internal_error("Rng::unit_rational requires max_den >= 1");
  int q = 1 + below(max_den);
  int p = below(q + 1);
  return Rational(p, q);
}

Point Rng::point(int dim, int max_den) {
  Point p;
  p.reserve(static_cast<size_t>(dim));
  for (int d = 0; d < dim; ++d) p.push_back(unit_rational(max_den));
  return p;
}

namespace {

/// Derived connectives expand into the core algebra, so a nominally shallow
/// tree can carry hundreds of expanded nodes, and the exact cell complexes of
/// such formulas are genuinely enormous.  Draws above this budget are redrawn
/// with a shallower depth (depth 1 always fits).
constexpr int kNodeBudget = 48;

Formula formula_rec(Rng& rng, int arity, int depth, int max_den) {
  if (depth <= 0 || rng.below(4) == 0) {
    if (arity > 0) {
      int c = rng.below(6);
      if (c == 0) return Formula::const1();
      if (c == 1) return Formula::eta(Scalar(rng.unit_rational(max_den)));
      return Formula::var(1 + rng.below(arity));
    }
    return rng.below(2) == 0 ? Formula::const1()
                             : Formula::eta(Scalar(rng.unit_rational(max_den)));
  }
  switch (rng.below(8)) {
    case 0:
      return Formula::neg(formula_rec(rng, arity, depth - 1, max_den));
    case 1:
      return Formula::nabla(Scalar(rng.unit_rational(max_den)),
                            formula_rec(rng, arity, depth - 1, max_den));
    case 2:
      return Formula::delta(Scalar(rng.unit_rational(max_den)),
                            formula_rec(rng, arity, depth - 1, max_den));
    case 3:
      return Formula::oplus(formula_rec(rng, arity, depth - 1, max_den),
                            formula_rec(rng, arity, depth - 1, max_den));
    case 4:
      return Formula::odot(formula_rec(rng, arity, depth - 1, max_den),
                           formula_rec(rng, arity, depth - 1, max_den));
    case 5:
      return Formula::imp(formula_rec(rng, arity, depth - 1, max_den),
                          formula_rec(rng, arity, depth - 1, max_den));
    case 6:
      return Formula::vee(formula_rec(rng, arity, depth - 1, max_den),
                          formula_rec(rng, arity, depth - 1, max_den));
    default:
      return Formula::wedge(formula_rec(rng, arity, depth - 1, max_den),
                            formula_rec(rng, arity, depth - 1, max_den));
  }
}

Formula l_formula_rec(Rng& rng, int arity, int depth) {
  if (depth <= 0 || rng.below(4) == 0) {
    if (arity > 0 && rng.below(5) != 0) return Formula::var(1 + rng.below(arity));
    return rng.below(2) == 0 ? Formula::const1() : Formula::const0();
  }
  switch (rng.below(6)) {
    case 0:
      return Formula::neg(l_formula_rec(rng, arity, depth - 1));
    case 1:
      return Formula::oplus(l_formula_rec(rng, arity, depth - 1),
                            l_formula_rec(rng, arity, depth - 1));
    case 2:
      return Formula::odot(l_formula_rec(rng, arity, depth - 1),
                           l_formula_rec(rng, arity, depth - 1));
    case 3:
      return Formula::imp(l_formula_rec(rng, arity, depth - 1),
                          l_formula_rec(rng, arity, depth - 1));
    case 4:
      return Formula::vee(l_formula_rec(rng, arity, depth - 1),
                          l_formula_rec(rng, arity, depth - 1));
    default:
      return Formula::wedge(l_formula_rec(rng, arity, depth - 1),
                            l_formula_rec(rng, arity, depth - 1));
  }
}

}  // namespace

Formula random_formula(Rng& rng, int arity, int depth, int max_den) {
  for (int d = depth;; --d) {
    Formula f = formula_rec(rng, arity, d, max_den);
    if (d <= 1 || f.node_count() <= kNodeBudget) return f;
  }
}

Formula random_l_formula(Rng& rng, int arity, int depth) {
  for (int d = depth;; --d) {
    Formula f = l_formula_rec(rng, arity, d);
    if (d <= 1 || f.node_count() <= kNodeBudget) return f;
  }
}

Simplex random_simplex(Rng& rng, int dim, int max_den) {
  if (dim < 1) throw internal_error("random_simplex requires dim >= 1");
  int want = 1 + rng.below(dim + 1);
  std::vector<Point> verts;
  verts.push_back(rng.point(dim, max_den));
  int stale = 0;
  while (static_cast<int>(verts.size()) < want && stale < 64) {
    Point cand = rng.point(dim, max_den);
    auto trial = verts;
    trial.push_back(cand);
    try {
      Simplex probe(dim, trial);
      verts = std::move(trial);
      stale = 0;
    } catch (const domain_error&) {
      ++stale;  // affinely dependent or duplicate; draw again
    }
  }
  return Simplex(dim, verts);
}

RationalPolyhedron random_polyhedron(Rng& rng, int dim, int max_pieces, int max_den) {
  int pieces = 1 + rng.below(max_pieces);
  std::vector<Simplex> parts;
  parts.reserve(static_cast<size_t>(pieces));
  for (int i = 0; i < pieces; ++i) parts.push_back(random_simplex(rng, dim, max_den));
  return RationalPolyhedron::from_simplices(dim, parts);
}

const std::vector<std::string>& axiom_scheme_names() {
  static const std::vector<std::string> names = {"L1", "L2", "L3", "L4",
                                                 "R1", "R2", "R3", "R4"};
  return names;
}

Formula axiom_instance(const std::string& scheme, const Formula& phi, const Formula& psi,
                       const Formula& chi, const Rational& r, const Rational& q) {
  if (scheme == "L1") return Formula::imp(phi, Formula::imp(psi, phi));
  if (scheme == "L2")
    return Formula::imp(Formula::imp(phi, psi),
                        Formula::imp(Formula::imp(psi, chi), Formula::imp(phi, chi)));
  if (scheme == "L3")
    return Formula::imp(Formula::vee(phi, psi), Formula::vee(psi, phi));
  if (scheme == "L4")
    return Formula::imp(Formula::imp(Formula::neg(psi), Formula::neg(phi)),
                        Formula::imp(phi, psi));
  if (scheme == "R1")
    return Formula::iff(Formula::nabla(Scalar(r), Formula::imp(phi, psi)),
                        Formula::imp(Formula::nabla(Scalar(r), phi),
                                     Formula::nabla(Scalar(r), psi)));
  if (scheme == "R2")
    return Formula::iff(Formula::nabla(Scalar(unit_truncated_diff(r, q)), phi),
                        Formula::imp(Formula::nabla(Scalar(q), phi),
                                     Formula::nabla(Scalar(r), phi)));
  if (scheme == "R3")
    return Formula::iff(Formula::nabla(Scalar(r), Formula::nabla(Scalar(q), phi)),
                        Formula::nabla(Scalar(r * q), phi));
  if (scheme == "R4")
    return Formula::iff(Formula::nabla(Scalar(Rational(1)), phi), phi);
  throw domain_error("unknown axiom scheme: " + scheme);
}

AxiomSuiteResult run_axiom_suite(std::uint64_t seed, int per_scheme) {
  if (per_scheme < 1) throw domain_error("axiom suite needs at least one instance per scheme");
  AxiomSuiteResult out;
  out.seed = seed;
  out.per_scheme = per_scheme;
  out.all_pass = true;
  Rng rng(seed);
  for (const auto& scheme : axiom_scheme_names()) {
    int ok = 0;
    for (int i = 0; i < per_scheme; ++i) {
      Formula phi = random_formula(rng, 3, 1 + rng.below(5), 8);
      Formula psi = random_formula(rng, 3, 1 + rng.below(5), 8);
      Formula chi = random_formula(rng, 3, 1 + rng.below(5), 8);
      Rational r = rng.unit_rational(8);
      Rational q = rng.unit_rational(8);
      Formula inst = axiom_instance(scheme, phi, psi, chi, r, q);
      DegreeResult deg = truth_degree(inst);
      if (deg.kind == DegreeResult::Kind::Exact && deg.value == Rational(1)) {
        ++ok;
      } else {
        out.all_pass = false;
        out.failures.push_back(scheme + ": " + print_formula(inst));
      }
    }
    out.passed[scheme] = ok;
  }
  return out;
}

}  // namespace rzl
