#pragma once

#include "rzl/creal.hpp"
#include "rzl/errors.hpp"
#include "rzl/formula.hpp"
#include "rzl/pwl.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace rzl {

/// Certified rational envelopes of an inexact-scalar formula at precision
/// index k: lower <= f <= upper, sup-width <= 2^-k, monotone in k. This is
/// interval compilation exposed under its approximation-theoretic name;
/// formulas whose scalars are all exact get equal envelopes.
IntervalPwl sandwich(const Formula& f, int k);

/// A deterministic formula sequence with an optional declared convergence
/// rate. Both generators must be pure (same index, same result) and may
/// throw domain_error to signal failure at an index.
struct FormulaSequence {
  std::function<Formula(int)> formula_at;           // required
  std::function<Rational(int)> rate_at;             // optional: empty if no declared rate
  bool has_rate() const { return static_cast<bool>(rate_at); }
};

struct LimitCheckRow {
  int n = 0;
  Rational delta;   // exact sup distance ||d(phi_n, phi)||_u
  Rational bound;   // 1 - r_n (rate mode) or 1 - r (threshold mode)
  bool holds = false;
};

struct LimitCheckResult {
  enum class Mode { Rate, Threshold };
  Mode mode = Mode::Rate;
  std::vector<LimitCheckRow> rows;   // one per index 0..upto
  bool all_hold = false;             // rate mode summary
  /// Threshold mode: least k with delta_n <= 1-r for all checked n >= k;
  /// empty when even the last index fails.
  std::optional<int> least_index;
};

/// Rate mode: checks delta_n <= 1 - r_n for every n <= upto, where
/// delta_n = ||d(phi_n, phi)||_u computed exactly. Requires a declared rate,
/// nondecreasing over the checked prefix. All formulas must be exact.
LimitCheckResult check_limit(const FormulaSequence& seq, const Formula& target, int upto);

/// Threshold mode: same deltas, fixed bound 1 - r, and reports the least
/// index from which the bound holds through upto.
LimitCheckResult check_limit(const FormulaSequence& seq, const Formula& target, int upto,
                             const Rational& r);

/// The canonical PWL interpolant of samples on the uniform grid with mesh
/// 1/m over [0,1]^n: affine on each grid Kuhn cell, agreeing with the
/// samples at grid points. `samples` lists the (m+1)^n grid values in
/// lexicographic index order ((0,...,0), (0,...,1/m), ...). The returned
/// bound L*n/m dominates the sup error for any L-Lipschitz (1-norm) source.
struct ApproximationResult {
  PwlFunction interpolant;
  Rational error_bound;
};

ApproximationResult approximate_continuous(int n, int m, const std::vector<Rational>& samples,
                                           const Rational& lipschitz);

/// Parses a JSON sequence specification:
///   { "kind": "scalar-ramp", "formula": "<formula>",
///     "schedule": "one-minus-pow2" }
///     -> phi_n = delta[1-2^-n] formula, declared rate r_n = 1-2^-n
///   { "kind": "explicit", "formulas": ["...", ...], "rates": ["p/q", ...]? }
///     -> the listed formulas (indices past the end fail); optional rates.
FormulaSequence parse_sequence_spec(const std::string& json_text,
                                    const ScalarRegistry* registry = nullptr);

}  // namespace rzl
