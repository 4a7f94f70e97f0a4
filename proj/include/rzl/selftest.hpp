#pragma once

#include "rzl/formula.hpp"
#include "rzl/geometry.hpp"

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace rzl {

/// Deterministic random source: the fully specified mt19937_64 stream with
/// plain modulo draws, so a seed names the same sequence on every platform
/// and standard library.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t raw() { return engine_(); }

  /// Draw from [0, n); n >= 1.
  int below(int n);

  /// Random rational in [0,1] with denominator at most max_den.
  Rational unit_rational(int max_den);

  /// Random point of [0,1]^dim with coordinate denominators at most max_den.
  Point point(int dim, int max_den);

private:
  std::mt19937_64 engine_;
};

/// Random exact formula over v1..v_arity: depth-bounded connective tree
/// drawing from the full exact signature (including scalar connectives with
/// denominators at most max_den). arity 0 produces closed formulas.
Formula random_formula(Rng& rng, int arity, int depth, int max_den);

/// Scalar-free variant: only the core connectives and constants.
Formula random_l_formula(Rng& rng, int arity, int depth);

/// Random simplex inside [0,1]^dim: 1 to dim+1 affinely independent vertices
/// with coordinate denominators at most max_den.
Simplex random_simplex(Rng& rng, int dim, int max_den);

/// Union of 1..max_pieces random simplices.
RationalPolyhedron random_polyhedron(Rng& rng, int dim, int max_pieces, int max_den);

/// The eight axiom schemes of the system, L1..L4 (scalar-free) and R1..R4
/// (scalar bookkeeping), in canonical order.
const std::vector<std::string>& axiom_scheme_names();

/// Instantiates a scheme. L schemes use phi/psi/chi as needed; R schemes use
/// phi plus the scalars r (R1-R4) and q (R2, R3).
Formula axiom_instance(const std::string& scheme, const Formula& phi, const Formula& psi,
                       const Formula& chi, const Rational& r, const Rational& q);

struct AxiomSuiteResult {
  std::uint64_t seed = 0;
  int per_scheme = 0;
  std::map<std::string, int> passed;  // scheme -> instances with truth degree exactly 1
  bool all_pass = false;
  std::vector<std::string> failures;  // offending instances in printed form
};

/// Draws per_scheme random instantiations of each scheme (arity <= 3, depth
/// <= 5, rational scalars) and checks that each has truth degree exactly 1.
AxiomSuiteResult run_axiom_suite(std::uint64_t seed, int per_scheme);

}  // namespace rzl
