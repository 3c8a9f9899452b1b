#include "qfa/scalar.hpp"

#include <cctype>
#include <ostream>
#include <sstream>
#include <vector>

#include "qfa/errors.hpp"

namespace qfa {

Scalar::Scalar(LaurentPoly num, LaurentPoly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw DomainError("Scalar: zero denominator");
  normalize();
}

void Scalar::normalize(bool run_gcd) {
  if (num_.is_zero()) {
    den_ = LaurentPoly::one();
    return;
  }
  // Move the denominator's monomial unit into the numerator.
  int dv = den_.min_ev(), dz = den_.min_ez();
  if (dv != 0 || dz != 0) {
    den_ = den_.shifted(-dv, -dz);
    num_ = num_.shifted(-dv, -dz);
  }
  int av = num_.min_ev(), az = num_.min_ez();
  if (run_gcd && !den_.is_constant()) {
    LaurentPoly num_ord = num_.shifted(-av, -az);
    LaurentPoly g = laurent_gcd(num_ord, den_);
    if (!g.is_constant()) {
      num_ = laurent_div_exact(num_ord, g).shifted(av, az);
      den_ = laurent_div_exact(den_, g);
      dv = den_.min_ev();
      dz = den_.min_ez();
      if (dv != 0 || dz != 0) {  // gcd scale may reintroduce a unit
        den_ = den_.shifted(-dv, -dz);
        num_ = num_.shifted(-dv, -dz);
      }
    }
  }
  // Make the denominator integer-primitive with positive leading coefficient.
  Rational lcm_den(1), gcd_num(0);
  for (const auto& [key, c] : den_.terms()) lcm_den = integer_lcm(lcm_den, c.denominator());
  for (const auto& [key, c] : den_.terms()) gcd_num = integer_gcd(gcd_num, (c * lcm_den).abs());
  Rational sigma = lcm_den / gcd_num;
  if (den_.leading_coeff().sign() < 0) sigma = -sigma;
  if (sigma != Rational(1)) {
    den_ = den_.scaled(sigma);
    num_ = num_.scaled(sigma);
  }
}

Scalar Scalar::operator-() const {
  Scalar r;
  r.num_ = -num_;
  r.den_ = den_;
  return r;
}

Scalar& Scalar::operator+=(const Scalar& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  if (den_ == o.den_) {
    num_ += o.num_;
    normalize();
    return *this;
  }
  LaurentPoly g = laurent_gcd(den_, o.den_);
  if (g.is_constant()) {
    num_ = num_ * o.den_ + o.num_ * den_;
    den_ = den_ * o.den_;
  } else {
    LaurentPoly db = laurent_div_exact(den_, g);
    LaurentPoly dd = laurent_div_exact(o.den_, g);
    num_ = num_ * dd + o.num_ * db;
    den_ = den_ * dd;
  }
  normalize();
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) { return *this += -o; }

Scalar& Scalar::operator*=(const Scalar& o) {
  if (is_zero() || o.is_zero()) return *this = Scalar();
  // Cross-cancel first; the full product of canonical fractions is then
  // already reduced and only the unit/scaling normalization is needed.
  LaurentPoly a = num_, b = den_, c = o.num_, d = o.den_;
  if (!b.is_constant() && !c.is_constant()) {
    LaurentPoly g = laurent_gcd(c, b);
    if (!g.is_constant()) {
      c = laurent_div_exact(c, g);
      b = laurent_div_exact(b, g);
    }
  }
  if (!d.is_constant() && !a.is_constant()) {
    LaurentPoly g = laurent_gcd(a, d);
    if (!g.is_constant()) {
      a = laurent_div_exact(a, g);
      d = laurent_div_exact(d, g);
    }
  }
  num_ = a * c;
  den_ = b * d;
  normalize(/*run_gcd=*/false);
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) { return *this *= o.inverse(); }

Scalar Scalar::inverse() const {
  if (is_zero()) throw DomainError("Scalar: division by zero");
  Scalar r;
  r.num_ = den_;
  r.den_ = num_;
  r.normalize(/*run_gcd=*/false);
  return r;
}

bool Scalar::operator<(const Scalar& o) const {
  if (num_ != o.num_) return num_ < o.num_;
  return den_ < o.den_;
}

int Scalar::pole_order_at_one() const {
  if (is_zero()) throw DomainError("Scalar: pole order of zero is undefined");
  // Reduced form: (z-1) divides at most one of numerator, denominator.
  return den_.z1_multiplicity() - num_.z1_multiplicity();
}

Scalar Scalar::eval_z_one() const {
  if (is_zero()) return Scalar();
  int order = pole_order_at_one();
  if (order > 0) throw PoleAtOne(order);
  // order <= 0 means the reduced denominator has no (z-1) factor, so the
  // substitution is regular as it stands.
  return Scalar(num_.subst_z_one(), den_.subst_z_one());
}

namespace {

void print_poly(std::ostream& os, const LaurentPoly& p) {
  if (p.is_zero()) {
    os << "0";
    return;
  }
  bool first = true;
  // Descending (ev, ez) order.
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    const auto& [key, c] = *it;
    Rational a = c.abs();
    if (first) {
      if (c.sign() < 0) os << "-";
      first = false;
    } else {
      os << (c.sign() < 0 ? " - " : " + ");
    }
    bool has_var = key.first != 0 || key.second != 0;
    if (!has_var) {
      os << a.str();
    } else {
      bool printed = false;
      if (a != Rational(1)) {
        os << a.str();
        printed = true;
      }
      if (key.first != 0) {
        if (printed) os << "*";
        os << "v^" << key.first;
        printed = true;
      }
      if (key.second != 0) {
        if (printed) os << "*";
        os << "z^" << key.second;
      }
    }
  }
}

struct PolyParser {
  const std::string& s;
  size_t pos = 0;

  explicit PolyParser(const std::string& text) : s(text) {}

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!eat(c)) throw DomainError(std::string("Scalar parse: expected '") + c + "' at offset " + std::to_string(pos));
  }

  int parse_int() {
    skip_ws();
    size_t start = pos;
    if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ++pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == start) throw DomainError("Scalar parse: expected integer at offset " + std::to_string(start));
    return std::stoi(s.substr(start, pos - start));
  }

  Rational parse_rational(bool allow_sign) {
    skip_ws();
    size_t start = pos;
    if (allow_sign && pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ++pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == start || (pos == start + 1 && !std::isdigit(static_cast<unsigned char>(s[start]))))
      throw DomainError("Scalar parse: expected rational at offset " + std::to_string(start));
    std::string text = s.substr(start, pos - start);
    skip_ws();
    if (pos < s.size() && s[pos] == '/' && pos + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[pos + 1]))) {
      ++pos;
      size_t dstart = pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      text += "/" + s.substr(dstart, pos - dstart);
    }
    return Rational::parse(text);
  }

  // term := factor ('*' factor)*
  void parse_term(LaurentPoly& acc, int sign) {
    Rational coeff(sign);
    int ev = 0, ez = 0;
    bool more = true;
    while (more) {
      skip_ws();
      if (pos < s.size() && (s[pos] == 'v' || s[pos] == 'z')) {
        char var = s[pos++];
        expect('^');
        int e = parse_int();
        (var == 'v' ? ev : ez) += e;
      } else {
        coeff *= parse_rational(/*allow_sign=*/false);
      }
      more = eat('*');
    }
    acc.add_term(ev, ez, coeff);
  }

  LaurentPoly parse_poly() {
    LaurentPoly acc;
    skip_ws();
    int sign = 1;
    if (eat('-'))
      sign = -1;
    else
      eat('+');
    parse_term(acc, sign);
    while (true) {
      skip_ws();
      if (eat('+'))
        sign = 1;
      else if (eat('-'))
        sign = -1;
      else
        break;
      parse_term(acc, sign);
    }
    return acc;
  }
};

}  // namespace

std::string Scalar::str() const {
  std::ostringstream os;
  os << "(";
  print_poly(os, num_);
  os << ")";
  if (!den_.is_one()) {
    os << "/(";
    print_poly(os, den_);
    os << ")";
  }
  return os.str();
}

Scalar Scalar::parse(const std::string& text) {
  PolyParser p(text);
  p.expect('(');
  LaurentPoly num = p.parse_poly();
  p.expect(')');
  LaurentPoly den = LaurentPoly::one();
  p.skip_ws();
  if (p.eat('/')) {
    p.expect('(');
    den = p.parse_poly();
    p.expect(')');
  }
  p.skip_ws();
  if (p.pos != p.s.size()) throw DomainError("Scalar parse: trailing input at offset " + std::to_string(p.pos));
  return Scalar(std::move(num), std::move(den));
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.str(); }

}  // namespace qfa
