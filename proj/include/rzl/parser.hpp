#pragma once

#include "rzl/errors.hpp"
#include "rzl/formula.hpp"

#include <string>
#include <string_view>

namespace rzl {

/// Parses the ASCII formula grammar:
///
///   formula := imp
///   imp     := oplus ("->" imp)?               (right associative)
///   oplus   := unary (("+"|"."|"\/"|"/\") unary)*   (equal precedence, left)
///   unary   := "~" unary | "nabla[" scalar "]" unary
///            | "delta[" scalar "]" unary | atom
///   atom    := "v" INT | "1" | "0" | "eta[" scalar "]" | "(" formula ")"
///   scalar  := INT "/" INT | INT | NAME
///
/// "0" is sugar for ~1; delta and eta build their definitions. NAME scalars
/// are resolved against the registry (null registry: any NAME is an error).
/// Scalars must lie in [0,1]. Throws parse_error with line/column.
Formula parse_formula(std::string_view text, const ScalarRegistry* registry = nullptr);

/// Canonical text; parse_formula(print_formula(f)) reconstructs f exactly.
/// Derived shapes that have surface syntax (delta, eta, ->, ., 0) are printed
/// in that syntax; everything else uses the core connectives.
std::string print_formula(const Formula& f);

/// Parses a comma-separated rational point, e.g. "1/3, 2/5"; "" is the empty
/// point. Coordinates must lie in [0,1].
std::vector<Rational> parse_point(std::string_view text);

}  // namespace rzl
