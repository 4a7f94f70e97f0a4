#include "rzl/parser.hpp"

#include "rzl/errors.hpp"

#include <algorithm>
#include <cctype>
#include <optional>

namespace rzl {

namespace {

enum class Tok { Arrow, Plus, Dot, Vee, Wedge, Tilde, LParen, RParen, LBracket, RBracket,
                 Slash, Int, Ident, End };

struct Token {
  Tok kind;
  std::string text;   // Ident
  Integer number;     // Int
  std::size_t line = 1, col = 1;
};

class Lexer {
public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }

  Token take() {
    Token t = current_;
    advance();
    return t;
  }

private:
  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) step();
    current_ = Token{Tok::End, "", 0, line_, col_};
    if (pos_ >= text_.size()) return;
    char c = text_[pos_];
    if (c == '-') {
      expect_next('>', "'->'");
      current_.kind = Tok::Arrow;
      return;
    }
    if (c == '\\') {
      expect_next('/', "'\\/'");
      current_.kind = Tok::Vee;
      return;
    }
    if (c == '/') {
      if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '\\') {
        step(); step();
        current_.kind = Tok::Wedge;
        return;
      }
      step();
      current_.kind = Tok::Slash;
      return;
    }
    switch (c) {
      case '+': step(); current_.kind = Tok::Plus; return;
      case '.': step(); current_.kind = Tok::Dot; return;
      case '~': step(); current_.kind = Tok::Tilde; return;
      case '(': step(); current_.kind = Tok::LParen; return;
      case ')': step(); current_.kind = Tok::RParen; return;
      case '[': step(); current_.kind = Tok::LBracket; return;
      case ']': step(); current_.kind = Tok::RBracket; return;
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      Integer value = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        value = value * 10 + (text_[pos_] - '0');
        step();
      }
      current_.kind = Tok::Int;
      current_.number = value;
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string ident;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ident += text_[pos_];
        step();
      }
      current_.kind = Tok::Ident;
      current_.text = std::move(ident);
      return;
    }
    throw parse_error(std::string("unexpected character '") + c + "'", line_, col_);
  }

  void expect_next(char want, const char* what) {
    if (pos_ + 1 >= text_.size() || text_[pos_ + 1] != want)
      throw parse_error(std::string("expected ") + what, line_, col_);
    step();
    step();
  }

  void step() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1, col_ = 1;
  Token current_;
};

class Parser {
public:
  Parser(std::string_view text, const ScalarRegistry* registry)
      : lex_(text), registry_(registry) {}

  Formula parse() {
    Formula f = imp();
    const Token& t = lex_.peek();
    if (t.kind != Tok::End)
      throw parse_error("trailing input after formula", t.line, t.col);
    return f;
  }

private:
  [[noreturn]] void fail(const std::string& msg) {
    const Token& t = lex_.peek();
    throw parse_error(msg, t.line, t.col);
  }

  void expect(Tok kind, const char* what) {
    if (lex_.peek().kind != kind) fail(std::string("expected ") + what);
    lex_.take();
  }

  Formula imp() {
    Formula lhs = family();
    if (lex_.peek().kind == Tok::Arrow) {
      lex_.take();
      return Formula::imp(std::move(lhs), imp());
    }
    return lhs;
  }

  Formula family() {
    Formula acc = unary();
    for (;;) {
      switch (lex_.peek().kind) {
        case Tok::Plus: lex_.take(); acc = Formula::oplus(std::move(acc), unary()); break;
        case Tok::Dot: lex_.take(); acc = Formula::odot(std::move(acc), unary()); break;
        case Tok::Vee: lex_.take(); acc = Formula::vee(std::move(acc), unary()); break;
        case Tok::Wedge: lex_.take(); acc = Formula::wedge(std::move(acc), unary()); break;
        default: return acc;
      }
    }
  }

  Formula unary() {
    const Token& t = lex_.peek();
    if (t.kind == Tok::Tilde) {
      lex_.take();
      return Formula::neg(unary());
    }
    if (t.kind == Tok::Ident && (t.text == "nabla" || t.text == "delta")) {
      std::string which = lex_.take().text;
      Scalar r = bracketed_scalar();
      Formula body = unary();
      return which == "nabla" ? Formula::nabla(std::move(r), std::move(body))
                              : Formula::delta(std::move(r), std::move(body));
    }
    return atom();
  }

  Formula atom() {
    const Token& t = lex_.peek();
    if (t.kind == Tok::Int) {
      Token n = lex_.take();
      if (n.number == 1) return Formula::const1();
      if (n.number == 0) return Formula::const0();
      throw parse_error("expected a formula; bare integers other than 0/1 are not atoms",
                        n.line, n.col);
    }
    if (t.kind == Tok::LParen) {
      lex_.take();
      Formula inner = imp();
      expect(Tok::RParen, "')'");
      return inner;
    }
    if (t.kind == Tok::Ident) {
      if (t.text == "eta") {
        lex_.take();
        return Formula::eta(bracketed_scalar());
      }
      if (t.text.size() > 1 && t.text[0] == 'v' &&
          std::all_of(t.text.begin() + 1, t.text.end(),
                      [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        Token v = lex_.take();
        Integer index(v.text.substr(1));
        if (index < 1 || index > 1000000) throw parse_error("variable index out of range", v.line, v.col);
        return Formula::var(static_cast<int>(index));
      }
      fail("unknown atom '" + t.text + "'");
    }
    fail("expected a formula");
  }

  Scalar bracketed_scalar() {
    expect(Tok::LBracket, "'['");
    Scalar r = scalar();
    expect(Tok::RBracket, "']'");
    return r;
  }

  Scalar scalar() {
    const Token& t = lex_.peek();
    if (t.kind == Tok::Int) {
      Token num = lex_.take();
      Integer den = 1;
      if (lex_.peek().kind == Tok::Slash) {
        lex_.take();
        if (lex_.peek().kind != Tok::Int) fail("expected denominator");
        Token d = lex_.take();
        den = d.number;
        if (den == 0) throw parse_error("zero denominator in scalar", d.line, d.col);
      }
      Rational q(num.number, den);
      if (!in_unit_interval(q))
        throw parse_error("scalar " + rat_to_string(q) + " outside [0,1]", num.line, num.col);
      return Scalar(q);
    }
    if (t.kind == Tok::Ident) {
      Token name = lex_.take();
      const CReal* c = registry_ ? registry_->find(name.text) : nullptr;
      if (!c)
        throw parse_error("unknown scalar constant '" + name.text + "'", name.line, name.col);
      return Scalar(*c);
    }
    fail("expected a scalar");
  }

  Lexer lex_;
  const ScalarRegistry* registry_;
};

}  // namespace

Formula parse_formula(std::string_view text, const ScalarRegistry* registry) {
  return Parser(text, registry).parse();
}

// ============================================================================
// Printer
// ============================================================================

namespace {

// Binding strength of a rendered fragment, loosest first.
enum class Level { Imp = 0, Family = 1, Unary = 2, Atom = 3 };

struct Rendered {
  std::string text;
  Level level;
};

std::string scalar_text(const Scalar& r) {
  if (!r.is_creal()) {
    Rational q = r.exact_value();
    if (rat_den(q) == 1) return rat_num(q).str();
    return rat_to_string(q);
  }
  return r.text();
}

Rendered render(const Formula& f);

std::string at_least(const Formula& f, Level floor) {
  Rendered r = render(f);
  if (static_cast<int>(r.level) < static_cast<int>(floor)) return "(" + r.text + ")";
  return r.text;
}

// Sugar recognizers over the core tree.

bool is_const1(const Formula& f) { return f.kind() == Formula::Kind::Const1; }

// ~ nabla[r] ~x
std::optional<std::pair<Scalar, Formula>> match_delta(const Formula& f) {
  if (f.kind() != Formula::Kind::Neg) return std::nullopt;
  Formula inner = f.child();
  if (inner.kind() != Formula::Kind::Nabla) return std::nullopt;
  Formula body = inner.child();
  if (body.kind() != Formula::Kind::Neg) return std::nullopt;
  return std::make_pair(inner.scalar(), body.child());
}

// ~(~a + ~b)
std::optional<std::pair<Formula, Formula>> match_odot(const Formula& f) {
  if (f.kind() != Formula::Kind::Neg) return std::nullopt;
  Formula inner = f.child();
  if (inner.kind() != Formula::Kind::Oplus) return std::nullopt;
  Formula l = inner.left(), r = inner.right();
  if (l.kind() != Formula::Kind::Neg || r.kind() != Formula::Kind::Neg) return std::nullopt;
  return std::make_pair(l.child(), r.child());
}

Rendered render(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Var:
      return {"v" + std::to_string(f.var_index()), Level::Atom};
    case Formula::Kind::Const1:
      return {"1", Level::Atom};
    case Formula::Kind::Nabla:
      return {"nabla[" + scalar_text(f.scalar()) + "] " + at_least(f.child(), Level::Unary),
              Level::Unary};
    case Formula::Kind::Neg: {
      if (auto d = match_delta(f)) {
        if (is_const1(d->second)) return {"eta[" + scalar_text(d->first) + "]", Level::Atom};
        return {"delta[" + scalar_text(d->first) + "] " + at_least(d->second, Level::Unary),
                Level::Unary};
      }
      if (auto o = match_odot(f)) {
        // Left slot of the equal-precedence family accepts a family chain.
        return {at_least(o->first, Level::Family) + " . " + at_least(o->second, Level::Unary),
                Level::Family};
      }
      if (is_const1(f.child())) return {"0", Level::Atom};
      return {"~" + at_least(f.child(), Level::Unary), Level::Unary};
    }
    case Formula::Kind::Oplus: {
      Formula l = f.left();
      if (l.kind() == Formula::Kind::Neg && !match_delta(l) && !match_odot(l) &&
          !is_const1(l.child())) {
        // ~a + b reads as a -> b; both parse to the same tree.
        return {at_least(l.child(), Level::Family) + " -> " + at_least(f.right(), Level::Imp),
                Level::Imp};
      }
      return {at_least(l, Level::Family) + " + " + at_least(f.right(), Level::Unary),
              Level::Family};
    }
  }
  throw internal_error("unreachable formula kind");
}

}  // namespace

std::string print_formula(const Formula& f) { return render(f).text; }

std::vector<Rational> parse_point(std::string_view text) {
  std::vector<Rational> out;
  std::size_t start = 0;
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  if (trim(text).empty()) return out;
  while (true) {
    std::size_t comma = text.find(',', start);
    std::string_view piece = trim(text.substr(start, comma == std::string_view::npos
                                                         ? std::string_view::npos
                                                         : comma - start));
    Rational q = rat_from_string(piece);
    if (!in_unit_interval(q))
      throw parse_error("point coordinate " + rat_to_string(q) + " outside [0,1]");
    out.push_back(std::move(q));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace rzl
