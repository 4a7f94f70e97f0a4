#pragma once

#include "rzl/creal.hpp"
#include "rzl/scalar.hpp"

#include <cstddef>
#include <memory>
#include <vector>

namespace rzl {

/// Which connectives a formula uses:
///   L  - no scalar connectives at all,
///   QL - scalar connectives with exact rational scalars only,
///   RL - at least one properly computable-real scalar.
enum class SignatureClass { L, QL, RL };

const char* to_string(SignatureClass c);

/// Immutable formula over the connectives {~, +, nabla[r]} plus the constant 1
/// and 1-based variables. Everything else (delta, ->, ., \/, /\, eta, d) is a
/// derived constructor that builds its definition, so the tree only ever
/// carries the five core kinds.
class Formula {
public:
  enum class Kind { Var, Const1, Neg, Oplus, Nabla };

  // --- core constructors ---
  static Formula var(int index);  // 1-based
  static Formula const1();
  static Formula neg(Formula f);
  static Formula oplus(Formula a, Formula b);
  static Formula nabla(Scalar r, Formula f);

  // --- derived constructors (definitional) ---
  static Formula const0() { return neg(const1()); }
  static Formula delta(Scalar r, Formula f);          // ~ nabla[r] ~f
  static Formula imp(Formula a, Formula b);           // ~a + b
  static Formula odot(Formula a, Formula b);          // ~(~a + ~b)
  static Formula vee(Formula a, Formula b);           // a + (b . ~a)
  static Formula wedge(Formula a, Formula b);         // ~(~a \/ ~b)
  static Formula chang_dist(Formula a, Formula b);    // (~a . b) + (a . ~b)
  static Formula iff(Formula a, Formula b);           // (a -> b) . (b -> a)
  static Formula eta(Scalar r);                       // delta[r] 1
  static Formula div_by_k(int k, Formula f);          // delta[1/k] f

  Kind kind() const;
  int var_index() const;        // Var only
  Formula child() const;        // Neg, Nabla
  Formula left() const;         // Oplus
  Formula right() const;        // Oplus
  const Scalar& scalar() const; // Nabla

  /// Largest variable index that occurs; 0 for closed formulas.
  int arity() const;

  SignatureClass signature() const;

  std::size_t node_count() const;

  /// Number of scalar connective nodes whose scalar has no exact value.
  /// Zero exactly when the formula admits the exact compilation path.
  std::size_t inexact_scalar_count() const;

  bool operator==(const Formula& other) const;
  bool operator!=(const Formula& other) const { return !(*this == other); }

  /// Stable identity of the underlying shared node; equal keys imply equal
  /// subtrees. Used for memoization during compilation.
  const void* node_key() const { return node_.get(); }

private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Exact evaluation at a rational point of the cube. Requires every scalar in
/// the formula to be exact and point dimension >= arity; coordinates must lie
/// in [0,1].
Rational eval(const Formula& f, const std::vector<Rational>& point);

/// Enclosure evaluation at precision index k: the result contains the true
/// value, has width <= 2^-k, and shrinks monotonically as k grows. Uses the
/// same scalar index schedule as interval compilation, so the two agree.
RatInterval eval_interval(const Formula& f, const std::vector<Rational>& point, int k);

/// Scalar enclosure index used internally for a target overall width of 2^-k.
int scalar_query_index(const Formula& f, int k);

}  // namespace rzl
