#pragma once

#include <map>
#include <string>
#include <utility>

#include "qfa/rational.hpp"

namespace qfa {

// Laurent polynomial in the two session variables v (= q^{1/D}) and z (the
// weight-family deformation), with rational coefficients. Terms are kept in
// a sorted map keyed by (v-exponent, z-exponent), so iteration order and
// printing are canonical. Only nonzero coefficients are stored.
class LaurentPoly {
public:
  using Key = std::pair<int, int>;  // (ev, ez)
  using TermMap = std::map<Key, Rational>;

  LaurentPoly() = default;
  static LaurentPoly zero() { return LaurentPoly(); }
  static LaurentPoly one() { return monomial(Rational(1), 0, 0); }
  static LaurentPoly monomial(const Rational& c, int ev, int ez);

  bool is_zero() const { return terms_.empty(); }
  bool is_one() const;
  bool is_constant() const;  // single (0,0) term or zero

  const TermMap& terms() const { return terms_; }
  void add_term(int ev, int ez, const Rational& c);

  LaurentPoly operator-() const;
  LaurentPoly& operator+=(const LaurentPoly& o);
  LaurentPoly& operator-=(const LaurentPoly& o);
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
  LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }
  LaurentPoly scaled(const Rational& c) const;
  LaurentPoly shifted(int dv, int dz) const;  // times v^dv z^dz

  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const LaurentPoly& a, const LaurentPoly& b) { return !(a == b); }
  bool operator<(const LaurentPoly& o) const { return terms_ < o.terms_; }

  int min_ev() const;
  int max_ev() const;
  int min_ez() const;
  int max_ez() const;
  bool z_free() const { return is_zero() || (min_ez() == 0 && max_ez() == 0); }

  // Leading coefficient under descending (ev, ez) lexicographic order.
  const Rational& leading_coeff() const;

  LaurentPoly subst_z_one() const;

  // Multiplicity of the factor (z - 1); zero polynomial is rejected.
  int z1_multiplicity() const;

  // Exact quotient by (z - 1); requires z1_multiplicity() >= 1.
  LaurentPoly divide_z_minus_one() const;

private:
  TermMap terms_;
};

// GCD of the ordinary-polynomial parts (monomial units stripped); the result
// has min exponents 0 in both variables and an unspecified nonzero scale.
LaurentPoly laurent_gcd(const LaurentPoly& a, const LaurentPoly& b);

// Exact quotient a / b; throws std::domain_error when b does not divide a
// (up to monomial units, which are handled).
LaurentPoly laurent_div_exact(const LaurentPoly& a, const LaurentPoly& b);

}  // namespace qfa
