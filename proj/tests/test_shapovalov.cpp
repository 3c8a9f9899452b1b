#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qfa/errors.hpp"
#include "qfa/linalg.hpp"
#include "qfa/shapovalov.hpp"

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

TEST_CASE("pairing pi on sl2") {
  Session s(RootData::from_text("A1"), 4, 4);
  ShapovalovContext shap(s);
  Weight lam = s.weight(coords1(Rational(3)));

  CHECK(shap.pairing_pi(lam, s.one(), s.one()) == Scalar(1));
  // pi(e (x) f) = q^lambda((sigma(e) f)_0) = -q^{-n}[n], n = <lambda, alpha^vee>.
  Scalar expected = -(s.q_power(Rational(-3)) * s.qint_rational(Rational(3), 0));
  CHECK(shap.pairing_pi(lam, s.e(0), s.f(0)) == expected);

  Session a2(RootData::from_text("A2"), 3);
  ShapovalovContext shap2(a2);
  Weight mu = a2.weight(coords2(Rational(1), Rational(0)));
  CHECK(shap2.pairing_pi(mu, a2.e(0), a2.f(1)) == Scalar(0));  // weight mismatch
}

TEST_CASE("Shapovalov form basics") {
  Session s(RootData::from_text("A1"), 4, 4);
  ShapovalovContext shap(s);
  Weight lam = s.weight(coords1(Rational(1, 2)));
  // S(f, f) = q^{-n}[n] with n = 1/2.
  CHECK(shap.form(lam, s.f(0), s.f(0)) == s.q_power(Rational(-1, 2)) * s.qint_rational(Rational(1, 2), 0));
  // S_lambda(x, y) = pi_lambda(theta(x) (x) y) on random-ish pairs.
  std::vector<AlgebraElement> xs = {s.f(0), s.f(0) * s.f(0), s.f(0) * s.f(0) * s.f(0)};
  for (const auto& x : xs)
    for (const auto& y : xs) CHECK(shap.form(lam, x, y) == shap.pairing_pi(lam, x.theta(), y));
}

TEST_CASE("gram blocks on sl2") {
  Session s(RootData::from_text("A1"), 5);
  ShapovalovContext shap(s);

  // beta = 0: the 1x1 identity block.
  Weight generic = s.weight(coords1(Rational(4)));  // integer but <l+r,a> = 5 not in the small kernel range? n=5 vanishing at beta=5a only
  const GramBlock& b0 = shap.gram_block(generic, RootVec{0});
  CHECK(b0.dim() == 1);
  CHECK(b0.matrix(0, 0) == Scalar(1));
  CHECK(b0.kernel_basis.empty());

  // <lambda, alpha^vee> = 0: beta = alpha block vanishes, kernel = {f}.
  Weight zero = s.weight(coords1(Rational(0)));
  const GramBlock& bz = shap.gram_block(zero, RootVec{1});
  CHECK(bz.matrix(0, 0) == Scalar(0));
  REQUIRE(bz.kernel_basis.size() == 1);
  CHECK(bz.kernel_basis[0](0) == Scalar(1));
  CHECK(bz.complement_tags.empty());

  // Generic lambda: kernel empty, inv_quotient = 1/S(f,f).
  Session s4(RootData::from_text("A1"), 5, 4);
  ShapovalovContext shap4(s4);
  Weight half = s4.weight(coords1(Rational(1, 2)));
  const GramBlock& bg = shap4.gram_block(half, RootVec{1});
  CHECK(bg.kernel_basis.empty());
  REQUIRE(bg.complement_tags == std::vector<int>{0});
  CHECK(bg.inv_quotient(0, 0) == Scalar(1) / shap4.form(half, s4.f(0), s4.f(0)));

  // Symmetry of the Gram matrix.
  Session a2(RootData::from_text("A2"), 4);
  ShapovalovContext shap2(a2);
  Weight mu = a2.weight(coords2(Rational(1), Rational(2)));
  for (const RootVec& beta : a2.roots().enumerate_qplus(4)) {
    const GramBlock& b = shap2.gram_block(mu, beta);
    for (int i = 0; i < b.dim(); ++i)
      for (int j = 0; j < i; ++j) CHECK(b.matrix(i, j) == b.matrix(j, i));
  }
}

TEST_CASE("Shapovalov determinant vanishing locus on sl2") {
  // det of the n*alpha block vanishes exactly when <lambda+rho, alpha^vee>
  // is in {1, ..., n}; checked on and off the hyperplanes for n <= 4.
  Session s(RootData::from_text("A1"), 4, 4);
  ShapovalovContext shap(s);
  for (int n = 1; n <= 4; ++n) {
    for (int k = 1; k <= n; ++k) {
      Weight on = s.weight(coords1(Rational(k - 1)));  // <lambda+rho,alpha^vee> = k
      Scalar det = determinant<Scalar>(shap.gram_block(on, RootVec{n}).matrix);
      CHECK(det.is_zero());
    }
    Weight off1 = s.weight(coords1(Rational(n)));          // pairing n+1 > n
    Weight off2 = s.weight(coords1(Rational(-1, 2)));      // pairing 1/2
    Weight off3 = s.weight(coords1(Rational(2 * n + 1)));  // pairing 2n+2
    for (const Weight& w : {off1, off2, off3}) {
      Scalar det = determinant<Scalar>(shap.gram_block(w, RootVec{n}).matrix);
      CHECK(!det.is_zero());
    }
  }
}

TEST_CASE("kernel blocks: Verma submodule structure") {
  Session s(RootData::from_text("A1"), 5);
  ShapovalovContext shap(s);
  // <lambda+rho, alpha^vee> = n: f^n spans the kernel at n*alpha; the
  // kernel is empty below.
  for (int n = 1; n <= 3; ++n) {
    Weight lam = s.weight(coords1(Rational(n - 1)));
    for (int m = 1; m < n; ++m) CHECK(shap.kernel_block(lam, RootVec{m}).empty());
    auto kb = shap.kernel_block(lam, RootVec{n});
    REQUIRE(kb.size() == 1);
    AlgebraElement fn = s.one();
    for (int j = 0; j < n; ++j) fn = fn * s.f(0);
    CHECK(kb[0] == fn);
    // Left-multiplying a kernel element stays in the kernel (submodule).
    if (n + 1 <= 5) {
      AlgebraElement pushed = s.f(0) * kb[0];
      auto next = shap.kernel_block(lam, RootVec{n + 1});
      REQUIRE(next.size() == 1);
      std::vector<ScalarVector> span;
      const GradedBasis& gb = s.basis(RootVec{n + 1});
      ScalarVector c1 = ScalarVector::Constant(gb.dim(), Scalar(0));
      for (const auto& [key, c] : next[0].terms()) c1(gb.index_of(key.f)) += c;
      span.push_back(c1);
      ScalarVector c2 = ScalarVector::Constant(gb.dim(), Scalar(0));
      for (const auto& [key, c] : pushed.terms()) c2(gb.index_of(key.f)) += c;
      CHECK(in_span<Scalar>(span, c2));
    }
  }
  // Generic weights: kernel empty at every height.
  Session s60(RootData::from_text("A1"), 4, 60);
  ShapovalovContext shap60(s60);
  for (const Rational& c : {Rational(1, 2), Rational(2, 5), Rational(-7, 3)}) {
    Weight lam = s60.weight(coords1(c));
    for (int m = 1; m <= 4; ++m) CHECK(shap60.kernel_block(lam, RootVec{m}).empty());
  }
  // K~ = theta(K).
  Weight lam1 = s.weight(coords1(Rational(1)));
  auto pos = shap.kernel_block_pos(lam1, RootVec{2});
  REQUIRE(pos.size() == 1);
  CHECK(pos[0] == (s.f(0) * s.f(0)).theta());
  CHECK(pos[0].in_u_plus());
}

TEST_CASE("kernel generation: dominant integral cases") {
  // sl2, gens {f^n}: equality at every height.
  Session s(RootData::from_text("A1"), 5);
  ShapovalovContext shap(s);
  for (int n = 1; n <= 3; ++n) {
    Weight lam = s.weight(coords1(Rational(n - 1)));
    AlgebraElement fn = s.one();
    for (int j = 0; j < n; ++j) fn = fn * s.f(0);
    auto report = shap.kernel_generation_check(lam, {fn}, 5);
    CHECK(report.all_equal());
    CHECK(report.generator_warnings.empty());
  }

  // A2, lambda = omega_1 (n1 = 2, n2 = 1), gens {f1^2, f2}: equal at all beta.
  Session a2(RootData::from_text("A2"), 4);
  ShapovalovContext shap2(a2);
  Weight omega1 = a2.weight(coords2(Rational(1), Rational(0)));
  auto report = shap2.kernel_generation_check(omega1, {a2.f(0) * a2.f(0), a2.f(1)}, 4);
  CHECK(report.all_equal());
  CHECK(report.generator_warnings.empty());

  // Empty generator list at a generic weight: both sides zero.
  Session s4(RootData::from_text("A1"), 4, 4);
  ShapovalovContext shap4(s4);
  auto empty_report = shap4.kernel_generation_check(s4.weight(coords1(Rational(1, 2))), {}, 4);
  CHECK(empty_report.all_equal());
}

TEST_CASE("generation check flags a generator outside the kernel") {
  // The one-distinguished-root statement names a generator of weight -alpha
  // where -n alpha is meant; feed both readings at n = 2 and observe the
  // report expose the wrong one rather than assume either.
  Session s(RootData::from_text("A1"), 4);
  ShapovalovContext shap(s);
  Weight lam = s.weight(coords1(Rational(1)));  // n = 2
  auto wrong = shap.kernel_generation_check(lam, {s.f(0)}, 4);
  CHECK(!wrong.generator_warnings.empty());
  CHECK(!wrong.all_equal());
  auto right = shap.kernel_generation_check(lam, {s.f(0) * s.f(0)}, 4);
  CHECK(right.generator_warnings.empty());
  CHECK(right.all_equal());
}

TEST_CASE("kernel inclusion between weights") {
  // lambda' on the alpha_1 hyperplane through lambda0 = (0, 1/3); both
  // kernels are slices of the same left ideal there.
  Session s(RootData::from_text("A2"), 4, 63);
  ShapovalovContext shap(s);
  Weight lam0 = s.weight(coords2(Rational(0), Rational(1, 3)));
  Weight lamp = s.weight(coords2(Rational(0), Rational(5, 7)));
  CHECK(shap.kernel_included(lamp, lam0, 4));
  CHECK(shap.kernel_included(lam0, lamp, 4));  // both kernels are U^- f_1 slices here
  // A dominant integral weight has a strictly larger kernel than lam0 sees.
  Weight zero = s.weight(coords2(Rational(0), Rational(0)));
  CHECK(!shap.kernel_included(zero, lam0, 4));
}

TEST_CASE("family weights get the generic-fiber inverse only") {
  Session s(RootData::from_text("A1"), 3);
  ShapovalovContext shap(s);
  Weight fam = s.family_weight(coords1(Rational(1)), coords1(Rational(1)));
  CHECK(s.Dprime() == 2);
  const GramBlock& b = shap.gram_block(fam, RootVec{1});
  CHECK(b.kernel_basis.empty());
  CHECK(b.complement_tags == std::vector<int>{0});
  // S_{1+t}(f, f) = q^{-(1+t)}[1+t]; finite and nonzero at z = 1.
  CHECK(b.matrix(0, 0).pole_order_at_one() == 0);
  CHECK(b.matrix(0, 0).eval_z_one() == s.q_power(Rational(-1)) * s.qint_rational(Rational(1), 0));
  CHECK_THROWS_AS(shap.kernel_block(fam, RootVec{1}), DomainError);

  // beta = 2alpha at lambda0 = omega: the quotient entry has a simple pole.
  const GramBlock& b2 = shap.gram_block(fam, RootVec{2});
  CHECK(b2.inv_quotient(0, 0).pole_order_at_one() == 1);
}
