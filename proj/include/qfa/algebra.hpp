#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qfa/roots.hpp"
#include "qfa/scalar.hpp"

namespace qfa {

// Word in the generator indices (0-based); a word in f's or in e's depending
// on which slot of a monomial it occupies.
using Word = std::basic_string<unsigned char>;

RootVec word_degree(const Word& w, int rank);
Word make_word(std::initializer_list<int> letters);

// Basis of the degree-beta slice of U^- (equivalently U^+, via theta): the
// span of all degree-beta words in the free algebra modulo the quantum Serre
// ideal. `words` are the lex-least independent words; `rewrite` expresses
// every other degree-beta word through them.
struct GradedBasis {
  RootVec beta;
  std::vector<Word> all_words;      // ascending lex
  std::vector<Word> words;          // chosen basis, ascending lex
  std::map<Word, ScalarVector> rewrite;  // dependent word -> coords over `words`

  int dim() const { return static_cast<int>(words.size()); }
  // Coordinates of an arbitrary degree-beta word over `words`.
  ScalarVector coords(const Word& w) const;
  int index_of(const Word& basis_word) const;
};

// Key of a normal-form monomial F_w T^m E_u.
struct MonKey {
  Word f;
  std::vector<int> t;
  Word e;

  bool operator<(const MonKey& o) const {
    if (f.size() != o.f.size()) return f.size() < o.f.size();
    if (f != o.f) return f < o.f;
    if (t != o.t) return t < o.t;
    if (e.size() != o.e.size()) return e.size() < o.e.size();
    return e < o.e;
  }
  bool operator==(const MonKey& o) const { return f == o.f && t == o.t && e == o.e; }
};

class Session;

// Element of U = U^- U^0 U^+ in normal form: a finite sum of monomials
// F_w T^m E_u with Scalar coefficients, where w and u are basis words of
// their graded slices. Immutable value semantics; all arithmetic routes
// through the owning Session (which holds the bases and rewrite caches).
class AlgebraElement {
public:
  AlgebraElement() : session_(nullptr) {}
  explicit AlgebraElement(const Session* s) : session_(s) {}

  const Session* session() const { return session_; }
  const std::map<MonKey, Scalar>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  AlgebraElement operator-() const;
  AlgebraElement& operator+=(const AlgebraElement& o);
  AlgebraElement& operator-=(const AlgebraElement& o);
  friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
  friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
  AlgebraElement operator*(const AlgebraElement& o) const;
  AlgebraElement scaled(const Scalar& c) const;
  friend AlgebraElement operator*(const Scalar& c, const AlgebraElement& x) { return x.scaled(c); }

  friend bool operator==(const AlgebraElement& a, const AlgebraElement& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const AlgebraElement& a, const AlgebraElement& b) { return !(a == b); }

  // Hopf structure and (anti)automorphisms.
  class TensorElement coproduct() const;
  Scalar counit() const;
  AlgebraElement antipode() const;
  AlgebraElement theta() const;
  AlgebraElement omega() const;

  // Projection (x)_0 onto U^0 along U^-_+ U + U U^+_+.
  AlgebraElement zero_part() const;

  // q^lambda evaluation; requires the element to lie in U^0.
  Scalar qchar(const Weight& lambda) const;

  // Weight gamma - beta of a term as an integer vector in root coordinates.
  static std::vector<int> term_weight(const MonKey& key, int rank);
  // Weight when all terms agree, nullopt otherwise (zero element: weight 0).
  std::optional<std::vector<int>> weight() const;

  bool in_u_minus() const;
  bool in_u_plus() const;
  bool in_u_zero() const;

  std::string str() const;

  // Internal: accumulate a normal-form term (word slots must be basis words).
  void add_term(const MonKey& key, const Scalar& c);

private:
  friend class Session;
  const Session* session_;
  std::map<MonKey, Scalar> terms_;
};

// Element of U (x) U, keyed by pairs of normal monomials.
class TensorElement {
public:
  TensorElement() : session_(nullptr) {}
  explicit TensorElement(const Session* s) : session_(s) {}

  const Session* session() const { return session_; }
  const std::map<std::pair<MonKey, MonKey>, Scalar>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  TensorElement& operator+=(const TensorElement& o);
  friend TensorElement operator+(TensorElement a, const TensorElement& b) { return a += b; }
  TensorElement operator*(const TensorElement& o) const;
  TensorElement scaled(const Scalar& c) const;
  friend bool operator==(const TensorElement& a, const TensorElement& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const TensorElement& a, const TensorElement& b) { return !(a == b); }

  void add_term(const MonKey& a, const MonKey& b, const Scalar& c);

  // Sum over terms of map1(leg1) (x) map2(leg2) recombined as a tensor.
  TensorElement map_legs(const std::function<AlgebraElement(const AlgebraElement&)>& map1,
                         const std::function<AlgebraElement(const AlgebraElement&)>& map2) const;

  // (epsilon (x) id) and (id (x) epsilon).
  AlgebraElement counit_left() const;
  AlgebraElement counit_right() const;

  // Multiplication map m: U (x) U -> U applied after optional leg maps.
  AlgebraElement multiply_legs() const;

private:
  const Session* session_;
  std::map<std::pair<MonKey, MonKey>, Scalar> terms_;
};

// A configured computation session: Cartan datum, root order D (v = q^{1/D}),
// optional family direction nu with its clearing constant D', the height
// bound, and the graded-basis / straightening caches. Sessions are the
// factory for all algebra elements; elements from different sessions must
// not be mixed.
class Session {
public:
  Session(RootData roots, int height_bound, int root_order_override = 0);

  const RootData& roots() const { return roots_; }
  int rank() const { return roots_.rank(); }
  int height_bound() const { return height_bound_; }
  int D() const { return D_; }

  // Family direction handling: first call fixes nu and computes D';
  // later calls must pass the same nu.
  void require_family(const RationalVector& nu);
  int Dprime() const { return Dprime_; }
  bool has_family() const { return Dprime_ > 0; }
  const std::optional<RationalVector>& family_direction() const { return family_; }

  // Weight whose q-exponents lie in (1/D)Z; throws DomainError otherwise.
  Weight weight(RationalVector coords) const;
  Weight family_weight(RationalVector coords, RationalVector direction);
  void validate_weight(const Weight& lambda) const;

  const GradedBasis& basis(const RootVec& beta) const;

  // Generators and simple constructors.
  AlgebraElement zero() const { return AlgebraElement(this); }
  AlgebraElement one() const;
  AlgebraElement e(int i) const;
  AlgebraElement f(int i) const;
  AlgebraElement t(int i, int power = 1) const;
  AlgebraElement t_lattice(const std::vector<int>& m) const;
  AlgebraElement k(int i, int power = 1) const;            // k_i = prod_l t_l^{a_li}
  AlgebraElement from_neg_word(const Word& w) const;       // F_w, reduced
  AlgebraElement from_pos_word(const Word& u) const;       // E_u, reduced
  AlgebraElement from_neg_coords(const RootVec& beta, const ScalarVector& coords) const;
  AlgebraElement monomial(const Word& f, const std::vector<int>& t, const Word& e) const;

  std::vector<int> k_lattice(int i) const;                 // exponent vector of k_i
  std::vector<int> k_beta_lattice(const RootVec& beta) const;

  // Scalars.
  Scalar q_power(const Rational& exp) const;   // q^exp as v^{D exp}
  Scalar qint(int kk, int i) const;            // [k]_i
  Scalar qint_rational(const Rational& n, int i) const;  // [n]_i, n in (1/D)Z
  Scalar qfact(int kk, int i) const;
  Scalar qbinom(int n, int m, int i) const;

  // q^lambda(t^m) for a lattice point m; families contribute z-powers.
  Scalar qchar_t(const Weight& lambda, const std::vector<int>& m) const;

  // T^m F_w = (this scalar) F_w T^m; and E_u T^m = (this scalar) T^m E_u.
  Scalar t_past_f(const std::vector<int>& m, const Word& w) const;
  Scalar e_past_t(const Word& u, const std::vector<int>& m) const;

  AlgebraElement parse_element(const std::string& text) const;

  struct MixedTerm {
    Word f;
    std::vector<int> t;
    Word e;
    Scalar c;
  };
  // Normal ordering of E_u F_w as a sum of F T E monomials on raw words.
  const std::vector<MixedTerm>& straighten(const Word& u, const Word& w) const;

private:
  GradedBasis compute_basis(const RootVec& beta) const;
  const std::vector<MixedTerm>& push_single(unsigned char i, const Word& w) const;

  RootData roots_;
  int height_bound_;
  int D_;
  int Dprime_ = 0;
  std::optional<RationalVector> family_;

  mutable std::mutex mutex_;
  mutable std::map<RootVec, std::unique_ptr<GradedBasis>> bases_;
  mutable std::map<std::pair<Word, Word>, std::unique_ptr<std::vector<MixedTerm>>> straighten_cache_;
  mutable std::map<std::pair<unsigned char, Word>, std::unique_ptr<std::vector<MixedTerm>>> push_cache_;
};

}  // namespace qfa
