#include "qfa/rational.hpp"

#include <ostream>
#include <stdexcept>

namespace qfa {

Rational::Rational(long num, long den) : v_(static_cast<signed long>(num), static_cast<signed long>(den)) {
  if (den == 0) throw std::domain_error("Rational: zero denominator");
  v_.canonicalize();
}

Rational Rational::parse(const std::string& text) {
  if (text.empty()) throw std::domain_error("Rational: empty literal");
  mpq_class v;
  if (v.set_str(text, 10) != 0) throw std::domain_error("Rational: bad literal '" + text + "'");
  if (v.get_den() == 0) throw std::domain_error("Rational: zero denominator in '" + text + "'");
  v.canonicalize();
  return Rational(v);
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("Rational: division by zero");
  v_ /= o.v_;
  return *this;
}

Rational Rational::inverse() const {
  if (is_zero()) throw std::domain_error("Rational: inverse of zero");
  return Rational(mpq_class(1) / v_);
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

Rational integer_gcd(const Rational& a, const Rational& b) {
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), a.raw().get_num().get_mpz_t(), b.raw().get_num().get_mpz_t());
  return Rational(mpq_class(g));
}

Rational integer_lcm(const Rational& a, const Rational& b) {
  mpz_class l;
  mpz_lcm(l.get_mpz_t(), a.raw().get_num().get_mpz_t(), b.raw().get_num().get_mpz_t());
  return Rational(mpq_class(l));
}

}  // namespace qfa
