#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <string>

namespace qfa {

// Arbitrary-precision rational with plain value semantics. gmpxx returns
// expression templates from its operators, which interacts badly with
// generic code (Eigen in particular), so every operation here collapses to
// a canonical mpq_class immediately.
class Rational {
public:
  Rational() : v_(0) {}
  Rational(long n) : v_(static_cast<signed long>(n)) {}
  Rational(int n) : v_(n) {}
  Rational(long num, long den);
  explicit Rational(const mpq_class& v) : v_(v) { v_.canonicalize(); }

  // Parses "p" or "p/q" with optional sign.
  static Rational parse(const std::string& text);

  Rational operator-() const { return Rational(mpq_class(-v_)); }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return mpq_cmp(a.v_.get_mpq_t(), b.v_.get_mpq_t()) == 0; }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) { return mpq_cmp(a.v_.get_mpq_t(), b.v_.get_mpq_t()) < 0; }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

  bool is_zero() const { return mpq_sgn(v_.get_mpq_t()) == 0; }
  bool is_integer() const { return v_.get_den() == 1; }
  int sign() const { return mpq_sgn(v_.get_mpq_t()); }

  // Valid only when the value fits; callers guard with is_integer() plus
  // known desk-scale bounds.
  long to_long() const { return mpz_get_si(v_.get_num().get_mpz_t()); }

  Rational numerator() const { return Rational(mpq_class(v_.get_num())); }
  Rational denominator() const { return Rational(mpq_class(v_.get_den())); }

  Rational abs() const { return sign() < 0 ? -*this : *this; }
  Rational inverse() const;

  std::string str() const { return v_.get_str(); }
  const mpq_class& raw() const { return v_; }

private:
  mpq_class v_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

// gcd/lcm on integer-valued Rationals; used for content normalization.
Rational integer_gcd(const Rational& a, const Rational& b);
Rational integer_lcm(const Rational& a, const Rational& b);

}  // namespace qfa
