#include "rzl/formula.hpp"

#include "rzl/errors.hpp"

#include <algorithm>
#include <optional>

namespace rzl {

const char* to_string(SignatureClass c) {
  switch (c) {
    case SignatureClass::L: return "L";
    case SignatureClass::QL: return "QL";
    case SignatureClass::RL: return "RL";
  }
  throw internal_error("unreachable signature class");
}

struct Formula::Node {
  Kind kind;
  int var = 0;
  std::optional<Scalar> scalar;
  std::shared_ptr<const Node> a;
  std::shared_ptr<const Node> b;

  // Cached structural measures; formulas are immutable.
  int arity = 0;
  std::size_t nodes = 1;
  std::size_t inexact_scalars = 0;
  bool has_nabla = false;
  bool all_scalars_exact = true;
};

Formula Formula::var(int index) {
  if (index < 1) throw domain_error("variable index must be >= 1");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Var;
  n->var = index;
  n->arity = index;
  return Formula(std::move(n));
}

Formula Formula::const1() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Const1;
  return Formula(std::move(n));
}

Formula Formula::neg(Formula f) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Neg;
  n->a = std::move(f.node_);
  n->arity = n->a->arity;
  n->nodes = 1 + n->a->nodes;
  n->inexact_scalars = n->a->inexact_scalars;
  n->has_nabla = n->a->has_nabla;
  n->all_scalars_exact = n->a->all_scalars_exact;
  return Formula(std::move(n));
}

Formula Formula::oplus(Formula a, Formula b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Oplus;
  n->a = std::move(a.node_);
  n->b = std::move(b.node_);
  n->arity = std::max(n->a->arity, n->b->arity);
  n->nodes = 1 + n->a->nodes + n->b->nodes;
  n->inexact_scalars = n->a->inexact_scalars + n->b->inexact_scalars;
  n->has_nabla = n->a->has_nabla || n->b->has_nabla;
  n->all_scalars_exact = n->a->all_scalars_exact && n->b->all_scalars_exact;
  return Formula(std::move(n));
}

Formula Formula::nabla(Scalar r, Formula f) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Nabla;
  n->scalar = std::move(r);
  n->a = std::move(f.node_);
  n->arity = n->a->arity;
  n->nodes = 1 + n->a->nodes;
  bool exact = n->scalar->is_exact();
  n->inexact_scalars = n->a->inexact_scalars + (exact ? 0 : 1);
  n->has_nabla = true;
  n->all_scalars_exact = n->a->all_scalars_exact && exact;
  return Formula(std::move(n));
}

Formula Formula::delta(Scalar r, Formula f) { return neg(nabla(std::move(r), neg(std::move(f)))); }

Formula Formula::imp(Formula a, Formula b) { return oplus(neg(std::move(a)), std::move(b)); }

Formula Formula::odot(Formula a, Formula b) {
  return neg(oplus(neg(std::move(a)), neg(std::move(b))));
}

Formula Formula::vee(Formula a, Formula b) {
  Formula nega = neg(a);
  return oplus(std::move(a), odot(std::move(b), std::move(nega)));
}

Formula Formula::wedge(Formula a, Formula b) {
  return neg(vee(neg(std::move(a)), neg(std::move(b))));
}

Formula Formula::chang_dist(Formula a, Formula b) {
  Formula left = odot(neg(a), b);
  Formula right = odot(std::move(a), neg(std::move(b)));
  return oplus(std::move(left), std::move(right));
}

Formula Formula::iff(Formula a, Formula b) {
  Formula forward = imp(a, b);
  Formula backward = imp(std::move(b), std::move(a));
  return odot(std::move(forward), std::move(backward));
}

Formula Formula::eta(Scalar r) { return delta(std::move(r), const1()); }

Formula Formula::div_by_k(int k, Formula f) {
  if (k < 1) throw domain_error("div_by_k: k must be >= 1");
  return delta(Scalar(Rational(1, k)), std::move(f));
}

Formula::Kind Formula::kind() const { return node_->kind; }

int Formula::var_index() const {
  if (node_->kind != Kind::Var) throw internal_error("var_index on non-variable");
  return node_->var;
}

Formula Formula::child() const {
  if (node_->kind != Kind::Neg && node_->kind != Kind::Nabla)
    throw internal_error("child on node without a single child");
  return Formula(node_->a);
}

Formula Formula::left() const {
  if (node_->kind != Kind::Oplus) throw internal_error("left on non-oplus");
  return Formula(node_->a);
}

Formula Formula::right() const {
  if (node_->kind != Kind::Oplus) throw internal_error("right on non-oplus");
  return Formula(node_->b);
}

const Scalar& Formula::scalar() const {
  if (node_->kind != Kind::Nabla) throw internal_error("scalar on non-nabla");
  return *node_->scalar;
}

int Formula::arity() const { return node_->arity; }

SignatureClass Formula::signature() const {
  if (!node_->has_nabla) return SignatureClass::L;
  return node_->all_scalars_exact ? SignatureClass::QL : SignatureClass::RL;
}

std::size_t Formula::node_count() const { return node_->nodes; }

std::size_t Formula::inexact_scalar_count() const { return node_->inexact_scalars; }

bool Formula::operator==(const Formula& other) const {
  if (node_ == other.node_) return true;
  if (kind() != other.kind()) return false;
  switch (kind()) {
    case Kind::Var: return var_index() == other.var_index();
    case Kind::Const1: return true;
    case Kind::Neg: return child() == other.child();
    case Kind::Oplus: return left() == other.left() && right() == other.right();
    case Kind::Nabla: return scalar() == other.scalar() && child() == other.child();
  }
  throw internal_error("unreachable formula kind");
}

// ============================================================================
// Evaluation
// ============================================================================

static void check_point(const Formula& f, const std::vector<Rational>& point) {
  if (static_cast<int>(point.size()) < f.arity())
    throw domain_error("point dimension " + std::to_string(point.size()) +
                       " below formula arity " + std::to_string(f.arity()));
  for (const Rational& c : point)
    if (!in_unit_interval(c))
      throw domain_error("point coordinate " + rat_to_string(c) + " outside [0,1]");
}

static Rational eval_rec(const Formula& f, const std::vector<Rational>& point) {
  switch (f.kind()) {
    case Formula::Kind::Var: return point[f.var_index() - 1];
    case Formula::Kind::Const1: return Rational(1);
    case Formula::Kind::Neg: return unit_neg(eval_rec(f.child(), point));
    case Formula::Kind::Oplus:
      return unit_oplus(eval_rec(f.left(), point), eval_rec(f.right(), point));
    case Formula::Kind::Nabla: {
      // nabla_r x = 1 - r(1 - x), the dual of delta_r x = r x.
      Rational r = f.scalar().exact_value();
      Rational x = eval_rec(f.child(), point);
      return Rational(1) - r * (Rational(1) - x);
    }
  }
  throw internal_error("unreachable formula kind");
}

Rational eval(const Formula& f, const std::vector<Rational>& point) {
  check_point(f, point);
  if (f.inexact_scalar_count() > 0)
    throw domain_error("exact eval requires exact scalars; use eval_interval");
  return eval_rec(f, point);
}

int scalar_query_index(const Formula& f, int k) {
  if (k < 0) throw domain_error("precision index must be >= 0");
  auto inexact = static_cast<int>(f.inexact_scalar_count());
  // Deep enough that the per-node widths sum below 2^-k: S <= 2^(S-1).
  return k + std::max(inexact, 1) - 1;
}

static RatInterval eval_iv_rec(const Formula& f, const std::vector<Rational>& point, int j) {
  switch (f.kind()) {
    case Formula::Kind::Var: {
      Rational x = point[f.var_index() - 1];
      return {x, x};
    }
    case Formula::Kind::Const1: return {Rational(1), Rational(1)};
    case Formula::Kind::Neg: return iv_complement(eval_iv_rec(f.child(), point, j));
    case Formula::Kind::Oplus:
      return iv_oplus(eval_iv_rec(f.left(), point, j), eval_iv_rec(f.right(), point, j));
    case Formula::Kind::Nabla: {
      RatInterval r = f.scalar().approx(j);
      RatInterval x = eval_iv_rec(f.child(), point, j);
      // 1 - r(1-x): decreasing in r, increasing in x.
      return {Rational(1) - r.hi * (Rational(1) - x.lo),
              Rational(1) - r.lo * (Rational(1) - x.hi)};
    }
  }
  throw internal_error("unreachable formula kind");
}

RatInterval eval_interval(const Formula& f, const std::vector<Rational>& point, int k) {
  check_point(f, point);
  return eval_iv_rec(f, point, scalar_query_index(f, k));
}

}  // namespace rzl
