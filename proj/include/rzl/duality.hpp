#pragma once

#include "rzl/errors.hpp"
#include "rzl/formula.hpp"
#include "rzl/geometry.hpp"
#include "rzl/pwl.hpp"

#include <map>
#include <optional>
#include <variant>

namespace rzl {

/// Scalar class of a finitely presented algebra: MV admits integer
/// coefficients only, DMV all rationals, RMV additionally certified
/// enclosures of real coefficients.
enum class AlgebraClass { MV, DMV, RMV };

const char* to_string(AlgebraClass c);

/// A finitely presented algebra, given as the scalar class, the number of
/// free generators, and one generator of the defining ideal: an exact
/// piecewise-linear function, or a certified-enclosure pair for real scalar
/// data (always class RMV). The exact factory enforces the coefficient-class
/// invariant: an MV presentation needs an integer-coefficient generator.
class Presentation {
public:
  static Presentation exact(AlgebraClass cls, PwlFunction generator);
  static Presentation enclosure(IntervalPwl generator);

  AlgebraClass algebra() const { return cls_; }
  int arity() const { return arity_; }
  bool is_exact() const { return std::holds_alternative<PwlFunction>(gen_); }
  const PwlFunction& exact_generator() const;     // throws domain_error on enclosure data
  const IntervalPwl& interval_generator() const;  // throws domain_error on exact data

private:
  Presentation(AlgebraClass cls, int arity, std::variant<PwlFunction, IntervalPwl> gen)
      : cls_(cls), arity_(arity), gen_(std::move(gen)) {}
  AlgebraClass cls_;
  int arity_;
  std::variant<PwlFunction, IntervalPwl> gen_;
};

/// Zero locus of a presentation's generator. Exact generators give the
/// polyhedron itself (outer == inner); enclosure generators give an outer
/// enclosure (zero set of the lower envelope) and an inner enclosure (zero
/// set of the upper envelope), recording the enclosure's precision index.
/// The outer enclosure shrinks and the inner one grows as precision
/// increases, squeezing the true zero set between them.
struct ZeroSetResult {
  bool exact = true;
  RationalPolyhedron outer;
  RationalPolyhedron inner;
  std::optional<int> precision;
};

ZeroSetResult zero_set(const Presentation& p);

/// The presentation whose generator's zero locus is exactly P: triangulates
/// the cube so that P is a union of faces, labels vertices 0 on P and 1 off
/// P, interpolates, and repairs any spurious all-zero face (one whose
/// interior escapes P) by stellar subdivision at its barycenter. The hat
/// coefficients are rational but not integer in general, so cls must be DMV
/// or RMV; empty P yields the constant-1 generator (inconsistent
/// presentation).
Presentation presentation_of(const RationalPolyhedron& P, AlgebraClass cls);

struct MvGeneratorResult {
  Integer k;            // truncated-sum multiplier
  PwlFunction witness;  // min(1, k*f); integer coefficient class
};

/// Integer-coefficient replacement for a rational generator: b = min(1, k*f)
/// where k is the lcm of every coefficient and constant denominator across
/// the maximal linearity regions. Guarantees coefficient_class(b) = Integer,
/// zero_set(b) = zero_set(f), f <= b pointwise, and b equal to the k-fold
/// truncated sum of f — the two ideal-domination certificates.
MvGeneratorResult mv_generator(const PwlFunction& f);

struct MvGeneratedResult {
  /// True when the verdict is "yes"; false means "unknown at this precision"
  /// (enclosure data can never certify "no": rationality of the limit is not
  /// decidable from finitely many digits).
  bool known = true;
  std::optional<Integer> k;            // yes path
  std::optional<PwlFunction> witness;  // yes path
  std::optional<RationalPolyhedron> outer;  // unknown path: zero-set enclosures
  std::optional<RationalPolyhedron> inner;
  std::optional<int> precision;
};

/// Whether the presented ideal admits an integer-coefficient generator:
/// always yes with the mv_generator witness for exact generators of any
/// class; unknown (with the zero-set enclosure pair) for enclosure data.
MvGeneratedResult is_mv_generated(const Presentation& p);

/// Relabels a presentation into a wider scalar class (MV -> DMV -> RMV;
/// same-class is the identity). The generator, hence the zero set, is
/// unchanged — scalar extension is presented by the image of the same
/// generator. Narrowing throws domain_error.
Presentation extend_scalars(const Presentation& p, AlgebraClass target);

/// A substitution of formulas for variables, total on the 1-based variable
/// indices it declares; variables without a declared image stay fixed.
class Substitution {
public:
  Substitution() = default;
  explicit Substitution(std::map<int, Formula> images) : images_(std::move(images)) {}

  void set(int var_index, Formula image);
  const std::map<int, Formula>& images() const { return images_; }

private:
  std::map<int, Formula> images_;
};

/// Simultaneous syntactic substitution of the declared images.
Formula apply(const Substitution& sigma, const Formula& f);

struct MvPreservingResult {
  bool preserving = true;
  std::optional<int> offender;  // least declared variable whose image leaves MV
};

/// True iff every declared image compiles to an integer-coefficient
/// function, i.e. the substitution carries scalar-free terms to scalar-free
/// terms. Images containing inexact scalars are rejected with domain_error.
MvPreservingResult is_mv_preserving(const Substitution& sigma);

struct LGeneratedWitness {
  Integer k;
  PwlFunction term_function;  // the input's compiled function f
  PwlFunction witness;        // the integer-coefficient b
  bool leq_certificate;       // f <= b at every common vertex
  bool ksum_certificate;      // b == k-fold truncated sum of f
};

/// The scalar-free witness for a rational-scalar formula: b = mv_generator
/// of its term function together with the two verified ideal-domination
/// certificates, so the formula and the witness present the same theory.
/// Formulas with inexact scalars are rejected with a pointer to
/// is_mv_generated.
LGeneratedWitness l_generated_witness(const Formula& phi);

}  // namespace rzl
