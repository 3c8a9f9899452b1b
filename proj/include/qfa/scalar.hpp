#pragma once

#include <iosfwd>
#include <string>

#include "qfa/laurent.hpp"

namespace qfa {

// Element of the ground field k(z) = Q(v, z), v = q^{1/D}, held as a reduced
// fraction of Laurent polynomials in a fixed normal form:
//   - the denominator is an ordinary polynomial with no v- or z-monomial
//     factor, integer coefficients with content 1, and positive leading
//     coefficient under descending (ev, ez) order;
//   - numerator and denominator share no polynomial factor.
// Equal field elements therefore have identical representations, and
// operator== is plain structural equality.
class Scalar {
public:
  Scalar() : num_(), den_(LaurentPoly::one()) {}
  Scalar(int n) : Scalar(Rational(n)) {}
  Scalar(long n) : Scalar(Rational(n)) {}
  Scalar(const Rational& r) : num_(LaurentPoly::monomial(r, 0, 0)), den_(LaurentPoly::one()) {}
  Scalar(LaurentPoly num, LaurentPoly den);
  explicit Scalar(LaurentPoly num) : num_(std::move(num)), den_(LaurentPoly::one()) {}

  static Scalar v_power(int k) { return Scalar(LaurentPoly::monomial(Rational(1), k, 0)); }
  static Scalar z_power(int k) { return Scalar(LaurentPoly::monomial(Rational(1), 0, k)); }
  static Scalar monomial(const Rational& c, int ev, int ez) { return Scalar(LaurentPoly::monomial(c, ev, ez)); }

  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_.is_one() && den_.is_one(); }
  bool z_free() const { return num_.z_free() && den_.z_free(); }

  const LaurentPoly& num() const { return num_; }
  const LaurentPoly& den() const { return den_; }

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);
  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

  Scalar inverse() const;

  friend bool operator==(const Scalar& a, const Scalar& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }
  bool operator<(const Scalar& o) const;  // arbitrary total order for containers

  // Order m with s = (z-1)^{-m} u, u finite and nonzero at z = 1.
  // m > 0: pole; m < 0: zero of order -m. Rejects s = 0.
  int pole_order_at_one() const;

  // Substitutes z = 1; throws PoleAtOne when pole_order_at_one() > 0.
  Scalar eval_z_one() const;

  std::string str() const;
  static Scalar parse(const std::string& text);

private:
  void normalize(bool run_gcd = true);

  LaurentPoly num_;
  LaurentPoly den_;
};

std::ostream& operator<<(std::ostream& os, const Scalar& s);

}  // namespace qfa
