#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qfa/errors.hpp"
#include "qfa/fusion.hpp"

using namespace qfa;

namespace {

RationalVector coords1(const Rational& c) { return RationalVector::Constant(1, c); }

RationalVector coords2(const Rational& a, const Rational& b) {
  RationalVector v(2);
  v(0) = a;
  v(1) = b;
  return v;
}

}  // namespace

TEST_CASE("reduced fusion element blocks") {
  Session s(RootData::from_text("A1"), 6, 4);
  ShapovalovContext shap(s);
  CarrierRegistry reg(shap);
  FusionContext fusion(shap, reg);

  // N = 0: only the identity block.
  Weight half = s.weight(coords1(Rational(1, 2)));
  FusionElement j0 = fusion.fusion_reduced(half, 0);
  CHECK(j0.blocks.size() == 1);
  CHECK(j0.blocks.begin()->second.inv(0, 0) == Scalar(1));

  // Generic lambda: the alpha block is 1 / S(f, f).
  FusionElement j2 = fusion.fusion_reduced(half, 2);
  const FusionBlock& alpha_block = j2.blocks.at(RootVec{1});
  CHECK(alpha_block.tags == std::vector<int>{0});
  CHECK(alpha_block.inv(0, 0) == Scalar(1) / shap.form(half, s.f(0), s.f(0)));

  // <lambda+rho, alpha^vee> = 2: the alpha block is present, the 2 alpha
  // quotient is empty (the kernel swallows the layer).
  Weight omega = s.weight(coords1(Rational(1)));
  FusionElement jo = fusion.fusion_reduced(omega, 2);
  CHECK(jo.blocks.at(RootVec{1}).tags.size() == 1);
  CHECK(jo.blocks.at(RootVec{2}).tags.empty());
}

TEST_CASE("star product: units, beta = 0 term, membership") {
  Session s(RootData::from_text("A1"), 6, 4);
  ShapovalovContext shap(s);
  CarrierRegistry reg(shap);
  FusionContext fusion(shap, reg);
  Weight half = s.weight(coords1(Rational(1, 2)));
  const Carrier& v3 = reg.finite_dim(s.weight(coords1(Rational(2))));

  auto basis = reg.invariant_subspace(half, v3);
  REQUIRE(basis.size() == 3);

  // Unit laws.
  for (const FunctionElement& f : basis) {
    CHECK(fusion.star(half, reg.unit(), f) == f);
    CHECK(fusion.star(half, f, reg.unit()) == f);
  }

  // The beta = 0 contribution is the plain product.
  FusionElement truncated = fusion.fusion_reduced(half, 0);
  CHECK(fusion.star_with(truncated, basis[0], basis[1]) == reg.product(basis[0], basis[1]));

  // Star output differs from the plain product by the higher blocks and
  // stays invariant.
  FunctionElement st = fusion.star(half, basis[0], basis[0]);
  CHECK(reg.in_invariant_subspace(half, st));

  // Membership is checked, not assumed.
  FunctionElement outside = reg.matrix_coefficient(v3, 0, 0);
  CHECK_THROWS_AS(fusion.star(half, outside, basis[0]), DomainError);
}

TEST_CASE("star product is associative on invariant triples") {
  Session s(RootData::from_text("A1"), 8, 4);
  ShapovalovContext shap(s);
  CarrierRegistry reg(shap);
  FusionContext fusion(shap, reg);
  Weight half = s.weight(coords1(Rational(1, 2)));
  const Carrier& v3 = reg.finite_dim(s.weight(coords1(Rational(2))));
  auto basis = reg.invariant_subspace(half, v3);
  REQUIRE(basis.size() == 3);
  // One representative triple here; the acceptance suite runs all 27.
  const FunctionElement& f1 = basis[0];
  const FunctionElement& f2 = basis[1];
  const FunctionElement& f3 = basis[2];
  FunctionElement left = fusion.star(half, fusion.star(half, f1, f2), f3);
  FunctionElement right = fusion.star(half, f1, fusion.star(half, f2, f3));
  CHECK(left == right);
  CHECK(!left.is_zero());
}

TEST_CASE("theta coefficients and the singular vector") {
  Session s(RootData::from_text("A1"), 6);
  ShapovalovContext shap(s);
  CarrierRegistry reg(shap);
  FusionContext fusion(shap, reg);

  // Trivial carrier: xi = 1_lambda (x) 1.
  Weight omega = s.weight(coords1(Rational(1)));
  ThetaExpansion trivial = fusion.theta_coefficients(omega, reg.unit(), 5);
  CHECK(trivial.beta0_is_input);
  CHECK(trivial.singular_ok);
  REQUIRE(trivial.xi.size() == 1);
  CHECK(trivial.xi[0] == reg.unit());

  // lambda = omega, 3-dimensional carrier.
  const Carrier& v3 = reg.finite_dim(s.weight(coords1(Rational(2))));
  auto basis = reg.invariant_subspace(omega, v3);
  REQUIRE(basis.size() == 3);
  FusionElement j1 = fusion.fusion_reduced(omega, 1);
  for (const FunctionElement& f : basis) {
    ThetaExpansion expansion = fusion.theta_coefficients(omega, f, 5);
    CHECK(expansion.beta0_is_input);
    CHECK(expansion.singular_ok);
    // f^{alpha,1} = S-inverse times ->theta(f) f = -inv * (->e f).
    const FusionBlock& block = j1.blocks.at(RootVec{1});
    FunctionElement expected = f.arrow(s.e(0)).scaled(-block.inv(0, 0));
    CHECK(expansion.coefficients.at(std::make_pair(RootVec{1}, 0)) == expected);
    // The 2 alpha quotient is void, so no coefficients live there.
    CHECK(expansion.coefficients.find(std::make_pair(RootVec{2}, 0)) == expansion.coefficients.end());
  }
}

TEST_CASE("theta coefficients at a generic weight match the fusion element") {
  Session s(RootData::from_text("A1"), 6, 4);
  ShapovalovContext shap(s);
  CarrierRegistry reg(shap);
  FusionContext fusion(shap, reg);
  Weight half = s.weight(coords1(Rational(1, 2)));
  const Carrier& v3 = reg.finite_dim(s.weight(coords1(Rational(2))));
  auto basis = reg.invariant_subspace(half, v3);
  FusionElement j = fusion.fusion_reduced(half, v3.depth());
  for (const FunctionElement& f : basis) {
    ThetaExpansion expansion = fusion.theta_coefficients(half, f, 4);
    CHECK(expansion.singular_ok);
    for (const auto& [beta, block] : j.blocks) {
      const GradedBasis& gb = s.basis(beta);
      Scalar sign((height(beta) % 2 == 0) ? 1 : -1);
      for (int i = 0; i < static_cast<int>(block.tags.size()); ++i) {
        FunctionElement expected(f.carrier());
        for (int jj = 0; jj < static_cast<int>(block.tags.size()); ++jj)
          expected += f.arrow_word(true, gb.words[block.tags[jj]]).scaled(sign * block.inv(i, jj));
        CHECK(expansion.coefficients.at(std::make_pair(beta, i)) == expected);
      }
    }
  }
}

TEST_CASE("fusion families and their z = 1 limits") {
  Session s(RootData::from_text("A1"), 6, 4);
  ShapovalovContext shap(s);
  CarrierRegistry reg(shap);
  FusionContext fusion(shap, reg);

  // Generic base point: every family block evaluates to the reduced block.
  Weight fam = s.family_weight(coords1(Rational(1, 2)), coords1(Rational(1)));
  CHECK(s.Dprime() == 2);
  FusionElement jfam = fusion.fusion_family(fam, 3);
  FusionElement jred = fusion.fusion_reduced(fam.base(), 3);
  for (const auto& [beta, block] : jfam.blocks) {
    const FusionBlock& red = jred.blocks.at(beta);
    REQUIRE(block.tags == red.tags);
    for (int i = 0; i < block.inv.rows(); ++i)
      for (int j = 0; j < block.inv.cols(); ++j) {
        CHECK(block.inv(i, j).pole_order_at_one() <= 0);
        CHECK(block.inv(i, j).eval_z_one() == red.inv(i, j));
      }
  }

  // N = 0 block is z-free.
  FusionElement j0 = fusion.fusion_family(fam, 0);
  CHECK(j0.blocks.begin()->second.inv(0, 0) == Scalar(1));

  // Degenerate line rejection: in A2, lambda0 = 0 with nu = omega_2 keeps
  // <lambda + rho, alpha_1^vee> = 1 frozen on the line.
  Session a2(RootData::from_text("A2"), 4);
  ShapovalovContext shap2(a2);
  CarrierRegistry reg2(shap2);
  FusionContext fusion2(shap2, reg2);
  Weight bad = a2.family_weight(coords2(Rational(0), Rational(0)), coords2(Rational(0), Rational(1)));
  CHECK_THROWS_AS(fusion2.fusion_family(bad, 2), DomainError);
}

TEST_CASE("regularity probe on the one-distinguished-root instance") {
  Session s(RootData::from_text("A1"), 6);
  ShapovalovContext shap(s);
  CarrierRegistry reg(shap);
  FusionContext fusion(shap, reg);
  Weight fam = s.family_weight(coords1(Rational(1)), coords1(Rational(1)));
  const Carrier& v3 = reg.finite_dim(s.weight(coords1(Rational(2))));

  RegularityReport report = fusion.regularity_probe(fam, v3);
  CHECK(report.all_pass());
  CHECK(report.simple_pole_bound_ok);
  CHECK(report.rows.size() == 3);  // one invariant vector, three covectors
  for (const auto& row : report.rows) {
    CHECK(row.max_pole <= 0);
    CHECK(row.limit_matches);
  }
  REQUIRE(report.has_control);
  CHECK(report.control_pole == 1);
}

TEST_CASE("regularity probe at a generic base point") {
  Session s(RootData::from_text("A1"), 6, 4);
  ShapovalovContext shap(s);
  CarrierRegistry reg(shap);
  FusionContext fusion(shap, reg);
  Weight fam = s.family_weight(coords1(Rational(1, 2)), coords1(Rational(1)));
  const Carrier& v3 = reg.finite_dim(s.weight(coords1(Rational(2))));
  RegularityReport report = fusion.regularity_probe(fam, v3);
  CHECK(report.all_pass());
  CHECK(!report.has_control);  // no kernel constraints at a generic weight
}

TEST_CASE("kostant probe lifts the invariant basis") {
  Session s(RootData::from_text("A1"), 6);
  ShapovalovContext shap(s);
  CarrierRegistry reg(shap);
  FusionContext fusion(shap, reg);
  Weight fam = s.family_weight(coords1(Rational(1)), coords1(Rational(1)));
  const Carrier& v3 = reg.finite_dim(s.weight(coords1(Rational(2))));

  KostantReport report = fusion.kostant_probe(fam, v3);
  CHECK(!report.vacuous());
  CHECK(report.rows.size() == 3);
  CHECK(report.all_pass());

  // lambda0 = 0: the invariant space on the 3-dimensional carrier is zero.
  Weight fam0 = s.family_weight(coords1(Rational(0)), coords1(Rational(1)));
  KostantReport vacuous = fusion.kostant_probe(fam0, v3);
  CHECK(vacuous.vacuous());
  CHECK(vacuous.all_pass());
}

TEST_CASE("generic kostant probe: exact Verma intertwiners") {
  Session s(RootData::from_text("A1"), 6, 4);
  ShapovalovContext shap(s);
  CarrierRegistry reg(shap);
  FusionContext fusion(shap, reg);
  Weight fam = s.family_weight(coords1(Rational(1, 2)), coords1(Rational(1)));
  const Carrier& v3 = reg.finite_dim(s.weight(coords1(Rational(2))));
  KostantReport report = fusion.kostant_probe(fam, v3);
  CHECK(report.rows.size() == 3);
  CHECK(report.all_pass());
}

TEST_CASE("representative independence of the star product") {
  // A2 at lambda0 = (0, 1/3): the Gram quotient at beta = alpha1 + 2 alpha2
  // admits a genuinely different complement word.
  Session s(RootData::from_text("A2"), 8, 9);
  ShapovalovContext shap(s);
  CarrierRegistry reg(shap);
  FusionContext fusion(shap, reg);
  Weight lam0 = s.weight(coords2(Rational(0), Rational(1, 3)));
  const Carrier& adj = reg.finite_dim(s.weight(coords2(Rational(1), Rational(1))));

  auto basis = reg.invariant_subspace(lam0, adj);
  REQUIRE(basis.size() == 8);

  FusionElement j = fusion.fusion_reduced(lam0, std::min(adj.depth(), adj.depth()));
  RootVec beta{1, 2};
  const FusionBlock& block = j.blocks.at(beta);
  REQUIRE(block.tags.size() == 1);
  int other = block.tags[0] == 0 ? 1 : 0;
  FusionElement swapped = fusion.with_block_tags(j, beta, {other});

  FunctionElement a = fusion.star_with(j, basis[0], basis[3]);
  FunctionElement b = fusion.star_with(swapped, basis[0], basis[3]);
  CHECK(a == b);
  CHECK(fusion.star(lam0, basis[0], basis[3]) == a);
}

TEST_CASE("limit coherence of the star product") {
  Session s(RootData::from_text("A1"), 6);
  ShapovalovContext shap(s);
  CarrierRegistry reg(shap);
  FusionContext fusion(shap, reg);
  Weight fam = s.family_weight(coords1(Rational(1)), coords1(Rational(1)));
  Weight lam0 = fam.base();
  const Carrier& v3 = reg.finite_dim(s.weight(coords1(Rational(2))));
  auto basis = reg.invariant_subspace(lam0, v3);
  REQUIRE(basis.size() == 3);
  FusionElement jfam = fusion.fusion_family(fam, v3.depth());
  for (size_t i = 0; i < basis.size(); ++i)
    for (size_t j = 0; j < basis.size(); ++j) {
      FunctionElement family_star = fusion.star_with(jfam, basis[i], basis[j]);
      CHECK(family_star.max_pole_order() <= 0);
      CHECK(family_star.eval_z_one() == fusion.star(lam0, basis[i], basis[j]));
    }
}
