#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "qfa/errors.hpp"
#include "qfa/linalg.hpp"
#include "qfa/scalar.hpp"

using namespace qfa;

namespace {

Scalar v(int k) { return Scalar::v_power(k); }
Scalar z(int k) { return Scalar::z_power(k); }

// Random nonzero-ish scalar built from small Laurent polynomials.
Scalar random_scalar(std::mt19937& rng, bool with_z = true) {
  std::uniform_int_distribution<int> coeff(-4, 4);
  std::uniform_int_distribution<int> expo(-3, 3);
  std::uniform_int_distribution<int> nterms(1, 3);
  auto poly = [&]() {
    LaurentPoly p;
    int n = nterms(rng);
    for (int i = 0; i < n; ++i) p.add_term(expo(rng), with_z ? expo(rng) : 0, Rational(coeff(rng)));
    return p;
  };
  LaurentPoly num = poly();
  LaurentPoly den;
  while (den.is_zero()) den = poly();
  return Scalar(num, den);
}

}  // namespace

TEST_CASE("field arithmetic basics") {
  CHECK((v(1) - Scalar(1)) / (v(1) - Scalar(1)) == Scalar(1));
  CHECK((v(2) - v(-2)) / (v(1) - v(-1)) == v(1) + v(-1));
  CHECK(Scalar(1) / (z(1) - Scalar(1)) + Scalar(1) / (Scalar(1) - z(1)) == Scalar(0));
  CHECK_THROWS_AS(Scalar(1) / Scalar(0), DomainError);
}

TEST_CASE("field axioms on random triples") {
  std::mt19937 rng(20240811);
  for (int iter = 0; iter < 60; ++iter) {
    Scalar a = random_scalar(rng), b = random_scalar(rng), c = random_scalar(rng);
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a + b == b + a);
    CHECK(a * b == b * a);
    if (!a.is_zero()) {
      CHECK(a * a.inverse() == Scalar(1));
      CHECK(a / a == Scalar(1));
    }
    CHECK(a - a == Scalar(0));
  }
}

TEST_CASE("normal form is canonical") {
  // The same value assembled along different routes must be bit-identical.
  Scalar a = (v(2) - Scalar(1)) / (v(1) + Scalar(1));
  Scalar b = v(1) - Scalar(1);
  CHECK(a == b);
  CHECK(a.str() == b.str());
  // Denominator scaling convention: primitive, positive leading coefficient.
  Scalar c = Scalar(1) / (Scalar(Rational(-1, 2)) * v(1) + Scalar(1));
  CHECK(c.den().leading_coeff() > Rational(0));
  for (const auto& [key, coeff] : c.den().terms()) CHECK(coeff.is_integer());
}

TEST_CASE("pole order at z = 1") {
  CHECK(Scalar(1).pole_order_at_one() == 0);
  CHECK((Scalar(1) / (z(1) - Scalar(1))).pole_order_at_one() == 1);
  Scalar s = (z(1) - Scalar(1)) * (z(1) - Scalar(1)) * v(1) / (z(1) - Scalar(1));
  CHECK(s.pole_order_at_one() == -1);
  CHECK_THROWS_AS(Scalar(0).pole_order_at_one(), DomainError);

  std::mt19937 rng(7);
  int done = 0;
  while (done < 25) {
    Scalar a = random_scalar(rng), b = random_scalar(rng);
    if (a.is_zero() || b.is_zero()) continue;
    CHECK((a * b).pole_order_at_one() == a.pole_order_at_one() + b.pole_order_at_one());
    ++done;
  }
}

TEST_CASE("evaluation at z = 1") {
  CHECK((z(2) - Scalar(1)) / (z(1) - Scalar(1)) == z(1) + Scalar(1));
  CHECK(((z(2) - Scalar(1)) / (z(1) - Scalar(1))).eval_z_one() == Scalar(2));
  CHECK(v(1).eval_z_one() == v(1));
  CHECK(((z(1) - Scalar(1)) / (z(1) + Scalar(1))).eval_z_one() == Scalar(0));
  try {
    (Scalar(1) / ((z(1) - Scalar(1)) * (z(1) - Scalar(1)))).eval_z_one();
    CHECK(false);
  } catch (const PoleAtOne& e) {
    CHECK(e.order == 2);
  }
}

TEST_CASE("serialization round trip") {
  std::mt19937 rng(99);
  for (int iter = 0; iter < 40; ++iter) {
    Scalar a = random_scalar(rng);
    Scalar back = Scalar::parse(a.str());
    CHECK(back == a);
    CHECK(back.str() == a.str());
  }
  CHECK(Scalar::parse("(0)") == Scalar(0));
  CHECK(Scalar::parse("(3/2*v^2*z^-1 - 1)") == Scalar::monomial(Rational(3, 2), 2, -1) - Scalar(1));
  CHECK(Scalar::parse("(v^2 - 1)/(v^1 + 1)") == v(1) - Scalar(1));
}

TEST_CASE("exact rref, inverse, null space over the scalar field") {
  ScalarMatrix m(2, 2);
  m(0, 0) = v(1);
  m(0, 1) = Scalar(1);
  m(1, 0) = Scalar(1);
  m(1, 1) = v(-1);
  // Rank 1: second row is v^-1 times the first.
  CHECK(rank_of<Scalar>(m) == 1);
  auto null_basis = null_space_basis<Scalar>(m);
  REQUIRE(null_basis.size() == 1);
  CHECK(is_zero_vector<Scalar>((m * null_basis[0]).eval()));

  ScalarMatrix g(2, 2);
  g(0, 0) = v(1) + v(-1);
  g(0, 1) = Scalar(1);
  g(1, 0) = Scalar(1);
  g(1, 1) = z(1);
  ScalarMatrix gi = invert<Scalar>(g);
  ScalarMatrix prod = g * gi;
  CHECK(prod(0, 0) == Scalar(1));
  CHECK(prod(0, 1) == Scalar(0));
  CHECK(prod(1, 0) == Scalar(0));
  CHECK(prod(1, 1) == Scalar(1));
  CHECK(determinant<Scalar>(g) == (v(1) + v(-1)) * z(1) - Scalar(1));
}
