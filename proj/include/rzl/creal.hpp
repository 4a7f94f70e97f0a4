#pragma once

#include "rzl/rational.hpp"

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace rzl {

/// Closed rational interval; the enclosure type every inexact query returns.
struct RatInterval {
  Rational lo;
  Rational hi;
  Rational width() const { return hi - lo; }
  bool contains(const Rational& q) const { return lo <= q && q <= hi; }
};

// Interval lifts of the [0,1] kernel. Inputs and outputs stay inside [0,1];
// each result encloses every pointwise combination of values from the inputs.
RatInterval iv_product(const RatInterval& a, const RatInterval& b);
RatInterval iv_complement(const RatInterval& a);
RatInterval iv_truncated_diff(const RatInterval& a, const RatInterval& b);
RatInterval iv_oplus(const RatInterval& a, const RatInterval& b);

/// A computable real in [0,1], presented as a monotone sandwich of rationals:
/// approx(k) = [lo_k, hi_k] with lo_k nondecreasing, hi_k nonincreasing,
/// hi_k - lo_k <= 2^-k, and the represented value inside every enclosure.
///
/// Handles share state: copies are cheap and memoize together. A generator
/// that violates the sandwich contract is rejected — the first few indices at
/// construction, every later index when it is first queried.
class CReal {
public:
  using Generator = std::function<RatInterval(int)>;

  /// Exact embedding; approx(k) is degenerate at the value for every k.
  static CReal from_rational(std::string name, Rational value);

  /// Square root of a rational in [0,1], by bisection from [0,1]:
  /// index k costs k exact comparisons and has width exactly 2^-k
  /// (smaller once the bracket collapses onto an exact root).
  static CReal sqrt_of(std::string name, Rational radicand);

  /// Arbitrary user generator; audited on first use and per query.
  static CReal from_generator(std::string name, Generator gen);

  RatInterval approx(int k) const;

  const std::string& name() const;

  /// Exact rational value when one is known (from_rational), else nullopt.
  const std::optional<Rational>& exact() const;

  /// Same underlying constant object (not value equality).
  bool same_handle(const CReal& other) const { return impl_ == other.impl_; }

  // Derived constants; enclosures are interval lifts queried at an index
  // deep enough to keep the advertised width schedule.
  CReal product(const CReal& other, std::string name) const;
  CReal complement(std::string name) const;
  CReal truncated_diff(const CReal& other, std::string name) const;

private:
  struct Impl;
  static CReal make_audited(std::string name, Generator gen, std::optional<Rational> exact);
  explicit CReal(std::shared_ptr<Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<Impl> impl_;
};

/// Named scalar constants usable from formula text. Lookup is by the exact
/// name; registration rejects duplicates and malformed names.
class ScalarRegistry {
public:
  /// Empty registry.
  ScalarRegistry() = default;

  /// Registry with the stock constants (currently sqrt2_over_2 = sqrt(1/2)).
  static ScalarRegistry with_builtins();

  void register_constant(const CReal& value);
  const CReal* find(const std::string& name) const;

  /// Loads lines of the form "name = sqrt(p/q)" or "name = p/q".
  /// '#' starts a comment; blank lines are skipped.
  void load_table(const std::string& text);

  std::vector<std::string> names() const;

private:
  std::map<std::string, CReal> entries_;
};

}  // namespace rzl
