#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qfa/errors.hpp"
#include "qfa/linalg.hpp"
#include "qfa/modules.hpp"

using namespace qfa;

namespace {

RationalVector coords1(const Rational& c) { return RationalVector::Constant(1, c); }

RationalVector coords2(const Rational& a, const Rational& b) {
  RationalVector v(2);
  v(0) = a;
  v(1) = b;
  return v;
}

bool matrix_is_zero(const ScalarMatrix& m) {
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      if (!m(i, j).is_zero()) return false;
  return true;
}

}  // namespace

TEST_CASE("Verma module actions on sl2") {
  Session s(RootData::from_text("A1"), 4);
  ShapovalovContext shap(s);
  Weight lam = s.weight(coords1(Rational(3)));
  WeightModule verma = WeightModule::verma(shap, lam, 4);
  CHECK(verma.dim() == 5);  // layers 0..4, one word each

  // e (f 1) = [n] 1 with n = <lambda, alpha^vee> = 3.
  const WeightModule::Layer* l1 = verma.layer_of(RootVec{1});
  REQUIRE(l1 != nullptr);
  CHECK(verma.mat_e(0)(0, l1->offset) == s.qint_rational(Rational(3), 0));
  // e 1 = 0.
  for (int row = 0; row < verma.dim(); ++row) CHECK(verma.mat_e(0)(row, 0).is_zero());
  // t acts on the highest vector by q^lambda(t).
  CHECK(verma.t_eigenvalue(0, {1}) == s.q_power(Rational(3, 2)));  // <lambda,u> = 3/2

  // Defining relation as a matrix identity on the whole module.
  Scalar denom = s.q_power(Rational(1)) - s.q_power(Rational(-1));
  AlgebraElement rel = s.e(0) * s.f(0) - s.f(0) * s.e(0) - (s.k(0) - s.k(0, -1)).scaled(Scalar(1) / denom);
  CHECK(matrix_is_zero(verma.matrix_of(rel)));
}

TEST_CASE("irreducible quotients on sl2") {
  Session s(RootData::from_text("A1"), 4, 4);
  ShapovalovContext shap(s);
  // Generic lambda: same layer dimensions as the Verma module.
  Weight half = s.weight(coords1(Rational(1, 2)));
  WeightModule irr = WeightModule::irreducible(shap, half, 4);
  CHECK(irr.dim() == 5);
  for (int m = 0; m <= 4; ++m) CHECK(irr.dim_at(RootVec{m}) == 1);

  // lambda = 0: the trivial module.
  Weight zero = s.weight(coords1(Rational(0)));
  WeightModule triv = WeightModule::irreducible(shap, zero, 4);
  CHECK(triv.dim() == 1);

  // <lambda+rho, alpha^vee> = 2: dims (1, 1, 0, ...).
  Weight omega = s.weight(coords1(Rational(1)));
  WeightModule two = WeightModule::irreducible(shap, omega, 4);
  CHECK(two.dim() == 2);
  CHECK(two.dim_at(RootVec{1}) == 1);
  CHECK(two.dim_at(RootVec{2}) == 0);
}

TEST_CASE("finite dimensional modules and the Weyl oracle") {
  Session s(RootData::from_text("A1"), 8);
  ShapovalovContext shap(s);
  Weight omega = s.weight(coords1(Rational(1)));
  WeightModule v2 = WeightModule::finite_dim(shap, omega);
  CHECK(v2.dim() == 2);
  CHECK(v2.dim() == weyl_dimension(s.roots(), omega));

  Weight two_omega = s.weight(coords1(Rational(2)));
  WeightModule v3 = WeightModule::finite_dim(shap, two_omega);
  CHECK(v3.dim() == 3);
  for (int m = 0; m <= 2; ++m) CHECK(v3.dim_at(RootVec{m}) == 1);

  CHECK_THROWS_AS(WeightModule::finite_dim(shap, s.weight(coords1(Rational(-1)))), DomainError);

  Session a2(RootData::from_text("A2"), 8);
  ShapovalovContext shap2(a2);
  Weight adj = a2.weight(coords2(Rational(1), Rational(1)));
  WeightModule eight = WeightModule::finite_dim(shap2, adj);
  CHECK(eight.dim() == 8);
  CHECK(eight.dim() == weyl_dimension(a2.roots(), adj));
  // Weight-zero multiplicity 2 (the Cartan of the adjoint module).
  RootVec theta{1, 1};
  CHECK(eight.dim_at(theta) == 2);
  CHECK(weight_multiplicity_oracle(a2.roots(), adj, RationalVector::Constant(2, Rational(0))) == 2);

  Weight omega1 = a2.weight(coords2(Rational(1), Rational(0)));
  CHECK(WeightModule::finite_dim(shap2, omega1).dim() == 3);

  // Every layer multiplicity matches the Kostant-formula oracle, and the
  // multiplicities are Weyl invariant.
  auto weyl = enumerate_weyl_group(a2.roots());
  CHECK(weyl.size() == 6);
  for (const auto& layer : eight.layers()) {
    RationalVector w = adj.coords - root_to_fundamental(a2.roots(), layer.beta);
    long mult = static_cast<long>(layer.tags.size());
    CHECK(mult == weight_multiplicity_oracle(a2.roots(), adj, w));
    for (const auto& [mat, sign] : weyl)
      CHECK(mult == weight_multiplicity_oracle(a2.roots(), adj, (mat * w).eval()));
  }
}

TEST_CASE("defining relations hold on every constructed module") {
  Session a2(RootData::from_text("A2"), 6);
  ShapovalovContext shap(a2);
  Weight adj = a2.weight(coords2(Rational(1), Rational(1)));
  std::vector<WeightModule> modules;
  modules.push_back(WeightModule::finite_dim(shap, adj));
  modules.push_back(WeightModule::verma(shap, a2.weight(coords2(Rational(2), Rational(0))), 3));
  modules.push_back(WeightModule::irreducible(shap, a2.weight(coords2(Rational(1), Rational(0))), 3));

  Scalar d1 = a2.q_power(Rational(1)) - a2.q_power(Rational(-1));
  std::vector<AlgebraElement> relations;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      AlgebraElement commutator = a2.e(i) * a2.f(j) - a2.f(j) * a2.e(i);
      if (i == j) commutator -= (a2.k(i) - a2.k(i, -1)).scaled(Scalar(1) / d1);
      relations.push_back(commutator);
    }
  Scalar q2 = a2.q_power(Rational(1)) + a2.q_power(Rational(-1));
  relations.push_back(a2.f(0) * a2.f(0) * a2.f(1) - (a2.f(0) * a2.f(1) * a2.f(0)).scaled(q2) +
                      a2.f(1) * a2.f(0) * a2.f(0));
  relations.push_back(a2.e(1) * a2.e(1) * a2.e(0) - (a2.e(1) * a2.e(0) * a2.e(1)).scaled(q2) +
                      a2.e(0) * a2.e(1) * a2.e(1));
  for (const WeightModule& m : modules)
    for (const AlgebraElement& rel : relations) CHECK(matrix_is_zero(m.matrix_of(rel)));

  // t-conjugation: t_i f_j t_i^{-1} = q^{-d_i delta_ij} f_j as matrices.
  const WeightModule& m = modules[0];
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      ScalarMatrix lhs = m.matrix_of(a2.t(i) * a2.f(j) * a2.t(i, -1));
      Scalar c = a2.q_power(Rational(i == j ? -a2.roots().d(i) : 0));
      ScalarMatrix rhs = m.matrix_of(a2.f(j)) * c;
      CHECK(lhs == rhs);
    }
}

TEST_CASE("irreducible layers of a dominant weight agree with finite_dim") {
  Session a2(RootData::from_text("A2"), 5);
  ShapovalovContext shap(a2);
  Weight omega1 = a2.weight(coords2(Rational(1), Rational(0)));
  WeightModule fd = WeightModule::finite_dim(shap, omega1);
  WeightModule irr = WeightModule::irreducible(shap, omega1, 5);
  for (const RootVec& beta : a2.roots().enumerate_qplus(5)) CHECK(fd.dim_at(beta) == irr.dim_at(beta));
}

TEST_CASE("singular vectors") {
  Session s(RootData::from_text("A1"), 6);
  ShapovalovContext shap(s);
  Weight two = s.weight(coords1(Rational(2)));
  WeightModule v3 = WeightModule::finite_dim(shap, two);
  // The highest weight line.
  auto top = v3.singular_vectors(two.coords);
  REQUIRE(top.size() == 1);
  CHECK(!top[0](0).is_zero());
  // Nothing above the highest weight.
  CHECK(v3.singular_vectors(coords1(Rational(4))).empty());
  // Interior weights of an irreducible module carry no singular vectors.
  CHECK(v3.singular_vectors(coords1(Rational(0))).empty());
}
