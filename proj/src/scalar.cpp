#include "rzl/scalar.hpp"

#include "rzl/errors.hpp"

namespace rzl {

Scalar::Scalar(Rational value) : value_(std::move(value)) {
  if (!in_unit_interval(std::get<Rational>(value_)))
    throw domain_error("scalar " + rat_to_string(std::get<Rational>(value_)) +
                       " outside [0,1]");
}

Scalar::Scalar(CReal value) : value_(std::move(value)) {}

bool Scalar::is_exact() const {
  if (auto* q = std::get_if<Rational>(&value_)) {
    (void)q;
    return true;
  }
  return std::get<CReal>(value_).exact().has_value();
}

Rational Scalar::exact_value() const {
  if (auto* q = std::get_if<Rational>(&value_)) return *q;
  const auto& exact = std::get<CReal>(value_).exact();
  if (!exact) throw domain_error("scalar '" + std::get<CReal>(value_).name() + "' is not exact");
  return *exact;
}

RatInterval Scalar::approx(int k) const {
  if (is_exact()) {
    Rational v = exact_value();
    return {v, v};
  }
  return std::get<CReal>(value_).approx(k);
}

std::string Scalar::text() const {
  if (auto* q = std::get_if<Rational>(&value_)) return rat_to_string(*q);
  return std::get<CReal>(value_).name();
}

bool operator==(const Scalar& a, const Scalar& b) {
  if (a.value_.index() != b.value_.index()) return false;
  if (auto* q = std::get_if<Rational>(&a.value_)) return *q == std::get<Rational>(b.value_);
  return std::get<CReal>(a.value_).same_handle(std::get<CReal>(b.value_));
}

}  // namespace rzl
