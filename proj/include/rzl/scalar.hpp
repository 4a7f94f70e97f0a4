#pragma once

#include "rzl/creal.hpp"
#include "rzl/rational.hpp"

#include <string>
#include <variant>

namespace rzl {

/// Scalar attached to a scalar connective: either an exact rational in [0,1]
/// or a named computable real. A computable real that was constructed from an
/// exact rational still counts as exact (is_exact), so formulas using it take
/// the exact compilation path.
class Scalar {
public:
  Scalar(Rational value);  // NOLINT(google-explicit-constructor)
  Scalar(CReal value);     // NOLINT(google-explicit-constructor)

  bool is_creal() const { return std::holds_alternative<CReal>(value_); }

  /// True when an exact rational value is available.
  bool is_exact() const;

  /// The exact value; requires is_exact().
  Rational exact_value() const;

  /// Enclosure at index k; degenerate when exact.
  RatInterval approx(int k) const;

  /// Grammar-compatible text: "p/q" for rationals, the registered name for
  /// computable reals.
  std::string text() const;

  /// Structural equality: rationals by value, computable reals by handle.
  friend bool operator==(const Scalar& a, const Scalar& b);

private:
  std::variant<Rational, CReal> value_;
};

}  // namespace rzl
