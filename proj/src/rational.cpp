#include "rzl/rational.hpp"

#include "rzl/errors.hpp"

namespace rzl {

std::string rat_to_string(const Rational& q) {
  return rat_num(q).str() + "/" + rat_den(q).str();
}

Rational rat_from_string(std::string_view text) {
  if (text.empty()) throw parse_error("empty rational literal");
  bool negative = false;
  std::size_t pos = 0;
  if (text[pos] == '-') {
    negative = true;
    ++pos;
  }
  auto read_int = [&](std::string_view what) -> Integer {
    if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
      throw parse_error("expected " + std::string(what) + " in rational literal '" +
                        std::string(text) + "'");
    Integer value = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      value = value * 10 + (text[pos] - '0');
      ++pos;
    }
    return value;
  };
  Integer num = read_int("numerator");
  Integer den = 1;
  if (pos < text.size() && text[pos] == '/') {
    ++pos;
    den = read_int("denominator");
    if (den == 0) throw parse_error("zero denominator in rational literal '" + std::string(text) + "'");
  }
  if (pos != text.size())
    throw parse_error("trailing characters in rational literal '" + std::string(text) + "'");
  Rational q(num, den);
  return negative ? Rational(-q) : q;
}

Rational pow2_neg(int k) {
  if (k < 0) throw domain_error("pow2_neg: negative index");
  Integer den = Integer(1) << k;
  return Rational(Integer(1), den);
}

}  // namespace rzl
