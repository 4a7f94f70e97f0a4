#include "rzl/creal.hpp"

#include "rzl/errors.hpp"

#include <cctype>
#include <sstream>

namespace rzl {

RatInterval iv_product(const RatInterval& a, const RatInterval& b) {
  // Operands live in [0,1], so the product is monotone in both endpoints.
  return {a.lo * b.lo, a.hi * b.hi};
}

RatInterval iv_complement(const RatInterval& a) {
  return {Rational(1) - a.hi, Rational(1) - a.lo};
}

RatInterval iv_truncated_diff(const RatInterval& a, const RatInterval& b) {
  return {unit_truncated_diff(a.lo, b.hi), unit_truncated_diff(a.hi, b.lo)};
}

RatInterval iv_oplus(const RatInterval& a, const RatInterval& b) {
  return {unit_oplus(a.lo, b.lo), unit_oplus(a.hi, b.hi)};
}

struct CReal::Impl {
  std::string name;
  Generator gen;
  std::optional<Rational> exact;
  mutable std::mutex mu;
  mutable std::map<int, RatInterval> memo;

  RatInterval query(int k) const {
    if (k < 0) throw domain_error("CReal::approx: negative precision index");
    std::lock_guard<std::mutex> lock(mu);
    auto it = memo.find(k);
    if (it != memo.end()) return it->second;
    RatInterval v = gen(k);
    audit(k, v);
    memo.emplace(k, v);
    return v;
  }

  // The sandwich contract, checked against whatever neighbors are cached.
  void audit(int k, const RatInterval& v) const {
    if (!(in_unit_interval(v.lo) && in_unit_interval(v.hi)) || v.lo > v.hi)
      throw domain_error("scalar constant '" + name + "': enclosure at index " +
                         std::to_string(k) + " is not a subinterval of [0,1]");
    if (v.width() > pow2_neg(k))
      throw domain_error("scalar constant '" + name + "': enclosure at index " +
                         std::to_string(k) + " wider than 2^-" + std::to_string(k));
    auto after = memo.lower_bound(k);
    if (after != memo.end() && (v.lo > after->second.lo || v.hi < after->second.hi))
      throw domain_error("scalar constant '" + name + "': enclosures not monotone in k");
    if (after != memo.begin()) {
      const auto& before = std::prev(after)->second;
      if (before.lo > v.lo || before.hi < v.hi)
        throw domain_error("scalar constant '" + name + "': enclosures not monotone in k");
    }
  }
};

static void check_name(const std::string& name) {
  if (name.empty()) throw domain_error("scalar constant name must be nonempty");
  if (!(std::islower(static_cast<unsigned char>(name[0])) || name[0] == '_'))
    throw domain_error("scalar constant name '" + name + "' must start with [a-z_]");
  for (char c : name)
    if (!(std::islower(static_cast<unsigned char>(c)) ||
          std::isdigit(static_cast<unsigned char>(c)) || c == '_'))
      throw domain_error("scalar constant name '" + name + "' has characters outside [a-z0-9_]");
}

CReal CReal::from_rational(std::string name, Rational value) {
  if (!in_unit_interval(value))
    throw domain_error("scalar constant '" + name + "': value outside [0,1]");
  Rational v = value;
  return make_audited(std::move(name), [v](int) { return RatInterval{v, v}; }, value);
}

CReal CReal::sqrt_of(std::string name, Rational radicand) {
  if (!in_unit_interval(radicand))
    throw domain_error("scalar constant '" + name + "': radicand outside [0,1]");
  Rational r = radicand;
  // Rebuilding the bracket from scratch per index keeps the generator pure;
  // the memo above makes repeated queries cheap anyway.
  auto gen = [r](int k) {
    Rational lo(0), hi(1);
    for (int step = 0; step < k; ++step) {
      Rational mid = (lo + hi) / 2;
      if (mid * mid <= r)
        lo = mid;
      else
        hi = mid;
    }
    return RatInterval{lo, hi};
  };
  std::optional<Rational> exact;
  // Recognize exact square roots of the radicand so e.g. sqrt(1/4) is exact.
  Integer num = rat_num(radicand), den = rat_den(radicand);
  Integer sn = sqrt(num), sd = sqrt(den);
  if (sn * sn == num && sd * sd == den) exact = Rational(sn, sd);
  return make_audited(std::move(name), gen, exact);
}

CReal CReal::from_generator(std::string name, Generator gen) {
  return make_audited(std::move(name), std::move(gen), std::nullopt);
}

CReal CReal::make_audited(std::string name, Generator gen, std::optional<Rational> exact) {
  check_name(name);
  auto impl = std::make_shared<CReal::Impl>();
  impl->name = std::move(name);
  impl->gen = std::move(gen);
  impl->exact = std::move(exact);
  CReal out{impl};
  for (int k = 0; k <= 4; ++k) out.approx(k);  // construction-time audit
  return out;
}

RatInterval CReal::approx(int k) const { return impl_->query(k); }

const std::string& CReal::name() const { return impl_->name; }

const std::optional<Rational>& CReal::exact() const { return impl_->exact; }

CReal CReal::product(const CReal& other, std::string name) const {
  CReal a = *this, b = other;
  std::optional<Rational> exact;
  if (a.exact() && b.exact()) exact = *a.exact() * *b.exact();
  // One extra index on each operand halves both widths, keeping <= 2^-k.
  return make_audited(
      std::move(name), [a, b](int k) { return iv_product(a.approx(k + 1), b.approx(k + 1)); },
      exact);
}

CReal CReal::complement(std::string name) const {
  CReal a = *this;
  std::optional<Rational> exact;
  if (a.exact()) exact = unit_neg(*a.exact());
  return make_audited(std::move(name), [a](int k) { return iv_complement(a.approx(k)); }, exact);
}

CReal CReal::truncated_diff(const CReal& other, std::string name) const {
  CReal a = *this, b = other;
  std::optional<Rational> exact;
  if (a.exact() && b.exact()) exact = unit_truncated_diff(*a.exact(), *b.exact());
  return make_audited(
      std::move(name),
      [a, b](int k) { return iv_truncated_diff(a.approx(k + 1), b.approx(k + 1)); }, exact);
}

// ============================================================================
// Registry
// ============================================================================

ScalarRegistry ScalarRegistry::with_builtins() {
  ScalarRegistry reg;
  reg.register_constant(CReal::sqrt_of("sqrt2_over_2", Rational(1, 2)));
  return reg;
}

void ScalarRegistry::register_constant(const CReal& value) {
  check_name(value.name());
  auto [it, inserted] = entries_.emplace(value.name(), value);
  (void)it;
  if (!inserted) throw domain_error("scalar constant '" + value.name() + "' already registered");
}

const CReal* ScalarRegistry::find(const std::string& name) const {
  auto it = entries_.find(name);
  return it == entries_.end() ? nullptr : &it->second;
}

void ScalarRegistry::load_table(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      std::size_t b = s.find_first_not_of(" \t\r");
      std::size_t e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string entry = trim(line);
    if (entry.empty()) continue;
    auto eq = entry.find('=');
    if (eq == std::string::npos)
      throw parse_error("scalar table: missing '=' on line " + std::to_string(lineno));
    std::string name = trim(entry.substr(0, eq));
    std::string expr = trim(entry.substr(eq + 1));
    if (expr.rfind("sqrt(", 0) == 0 && expr.back() == ')') {
      Rational radicand = rat_from_string(expr.substr(5, expr.size() - 6));
      register_constant(CReal::sqrt_of(name, radicand));
    } else {
      Rational value = rat_from_string(expr);
      if (!in_unit_interval(value))
        throw parse_error("scalar table: value outside [0,1] on line " + std::to_string(lineno));
      register_constant(CReal::from_rational(name, value));
    }
  }
}

std::vector<std::string> ScalarRegistry::names() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& [name, value] : entries_) out.push_back(name);
  return out;
}

}  // namespace rzl
