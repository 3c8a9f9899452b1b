#include "qfa/algebra.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

#include "qfa/errors.hpp"
#include "qfa/linalg.hpp"

namespace qfa {

RootVec word_degree(const Word& w, int rank) {
  RootVec beta(rank, 0);
  for (unsigned char l : w) beta[l] += 1;
  return beta;
}

Word make_word(std::initializer_list<int> letters) {
  Word w;
  for (int l : letters) w.push_back(static_cast<unsigned char>(l));
  return w;
}

ScalarVector GradedBasis::coords(const Word& w) const {
  auto it = rewrite.find(w);
  if (it != rewrite.end()) return it->second;
  ScalarVector v = ScalarVector::Constant(dim(), Scalar(0));
  v(index_of(w)) = Scalar(1);
  return v;
}

int GradedBasis::index_of(const Word& basis_word) const {
  auto it = std::lower_bound(words.begin(), words.end(), basis_word);
  if (it == words.end() || *it != basis_word) throw DomainError("GradedBasis: word is not a basis word");
  return static_cast<int>(it - words.begin());
}

// ---------------------------------------------------------------------------
// Session

Session::Session(RootData roots, int height_bound, int root_order_override)
    : roots_(std::move(roots)), height_bound_(height_bound) {
  if (height_bound_ < 1) throw DomainError("Session: height bound must be >= 1");
  int minimal = roots_.minimal_root_order();
  if (root_order_override == 0) {
    D_ = minimal;
  } else {
    if (root_order_override <= 0 || root_order_override % minimal != 0)
      throw DomainError("Session: root order override must be a positive multiple of " + std::to_string(minimal));
    D_ = root_order_override;
  }
}

void Session::require_family(const RationalVector& nu) {
  if (family_) {
    if (nu.size() != family_->size()) throw DomainError("Session: conflicting family direction");
    for (int i = 0; i < nu.size(); ++i)
      if (nu(i) != (*family_)(i)) throw DomainError("Session: only one family direction per session");
    return;
  }
  RationalVector m = roots_.simple_coordinates(nu);
  bool nonzero = false;
  Rational lcm(1);
  for (int i = 0; i < m.size(); ++i) {
    Rational x = m(i) * Rational(roots_.d(i));
    if (!x.is_zero()) nonzero = true;
    lcm = integer_lcm(lcm, x.denominator());
  }
  if (!nonzero) throw DomainError("Session: family direction must be nonzero");
  family_ = nu;
  Dprime_ = static_cast<int>(lcm.to_long());
}

Weight Session::weight(RationalVector coords) const {
  Weight lam(std::move(coords));
  validate_weight(lam);
  return lam;
}

Weight Session::family_weight(RationalVector coords, RationalVector direction) {
  require_family(direction);
  Weight lam(std::move(coords), std::move(direction));
  validate_weight(lam);
  return lam;
}

void Session::validate_weight(const Weight& lambda) const {
  if (lambda.rank() != rank()) throw DomainError("Weight: wrong rank");
  RationalVector m = roots_.simple_coordinates(lambda.coords);
  for (int i = 0; i < rank(); ++i) {
    Rational x = m(i) * Rational(roots_.d(i) * D_);
    if (!x.is_integer())
      throw DomainError("Weight " + lambda.str() + ": exponent d_" + std::to_string(i + 1) + "<lambda,u_" +
                        std::to_string(i + 1) + "> not in (1/D)Z for D=" + std::to_string(D_) +
                        " (needs another factor " + x.denominator().str() + ")");
  }
  if (lambda.direction) {
    if (!family_ || Dprime_ == 0) throw DomainError("Weight: family direction used before require_family");
    for (int i = 0; i < rank(); ++i)
      if ((*lambda.direction)(i) != (*family_)(i))
        throw DomainError("Weight: direction differs from the session family direction");
  }
}

std::vector<int> Session::k_lattice(int i) const {
  std::vector<int> m(rank());
  for (int l = 0; l < rank(); ++l) m[l] = roots_.cartan(l, i);
  return m;
}

std::vector<int> Session::k_beta_lattice(const RootVec& beta) const {
  std::vector<int> m(rank(), 0);
  for (int i = 0; i < rank(); ++i) {
    if (beta[i] == 0) continue;
    std::vector<int> ki = k_lattice(i);
    for (int l = 0; l < rank(); ++l) m[l] += beta[i] * ki[l];
  }
  return m;
}

Scalar Session::q_power(const Rational& exp) const {
  Rational scaled = exp * Rational(D_);
  if (!scaled.is_integer())
    throw DomainError("q_power: exponent " + exp.str() + " not in (1/D)Z for D=" + std::to_string(D_));
  return Scalar::v_power(static_cast<int>(scaled.to_long()));
}

Scalar Session::qint(int kk, int i) const {
  LaurentPoly p;
  for (int j = 0; j < kk; ++j) p.add_term(D_ * roots_.d(i) * (kk - 1 - 2 * j), 0, Rational(1));
  return Scalar(p);
}

Scalar Session::qint_rational(const Rational& n, int i) const {
  Rational di(roots_.d(i));
  Scalar numer = q_power(n * di) - q_power(-n * di);
  Scalar denom = q_power(di) - q_power(-di);
  return numer / denom;
}

Scalar Session::qfact(int kk, int i) const {
  Scalar r(1);
  for (int j = 1; j <= kk; ++j) r *= qint(j, i);
  return r;
}

Scalar Session::qbinom(int n, int m, int i) const {
  return qfact(n, i) / (qfact(m, i) * qfact(n - m, i));
}

Scalar Session::qchar_t(const Weight& lambda, const std::vector<int>& m) const {
  RationalVector simple = roots_.simple_coordinates(lambda.coords);
  Rational x0(0);
  for (int i = 0; i < rank(); ++i) x0 += Rational(roots_.d(i)) * Rational(m[i]) * simple(i);
  Scalar out = q_power(x0);
  if (lambda.direction) {
    RationalVector nu_simple = roots_.simple_coordinates(*lambda.direction);
    Rational x1(0);
    for (int i = 0; i < rank(); ++i) x1 += Rational(roots_.d(i)) * Rational(m[i]) * nu_simple(i);
    Rational zexp = x1 * Rational(Dprime_);
    if (!zexp.is_integer()) throw DomainError("qchar: family exponent not cleared by D'");
    out *= Scalar::z_power(static_cast<int>(zexp.to_long()));
  }
  return out;
}

Scalar Session::t_past_f(const std::vector<int>& m, const Word& w) const {
  long exp = 0;
  for (unsigned char l : w) exp -= static_cast<long>(roots_.d(l)) * m[l];
  return Scalar::v_power(static_cast<int>(D_ * exp));
}

Scalar Session::e_past_t(const Word& u, const std::vector<int>& m) const {
  long exp = 0;
  for (unsigned char l : u) exp -= static_cast<long>(roots_.d(l)) * m[l];
  return Scalar::v_power(static_cast<int>(D_ * exp));
}

// ---------------------------------------------------------------------------
// Graded bases

const GradedBasis& Session::basis(const RootVec& beta) const {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = bases_.find(beta);
    if (it != bases_.end()) return *it->second;
  }
  if (height(beta) > height_bound_)
    throw HeightOverflow(
        "height bound " + std::to_string(height_bound_) + " exceeded at degree (" + root_str(beta) + ")",
        height(beta));
  auto computed = std::make_unique<GradedBasis>(compute_basis(beta));
  std::lock_guard<std::mutex> lock(mutex_);
  auto [it, inserted] = bases_.emplace(beta, std::move(computed));
  return *it->second;
}

GradedBasis Session::compute_basis(const RootVec& beta) const {
  GradedBasis gb;
  gb.beta = beta;
  Word sorted;
  for (int i = 0; i < rank(); ++i) sorted.append(beta[i], static_cast<unsigned char>(i));
  Word w = sorted;
  do {
    gb.all_words.push_back(w);
  } while (std::next_permutation(w.begin(), w.end()));

  std::map<Word, int> index;
  for (int a = 0; a < static_cast<int>(gb.all_words.size()); ++a) index.emplace(gb.all_words[a], a);
  const int M = static_cast<int>(gb.all_words.size());

  // Degree-beta slice of the two-sided Serre ideal, echelonized with pivots
  // on each row's largest word and fully back-substituted. The non-pivot
  // words are then exactly the lex-least independent words, and every pivot
  // row is the rewrite rule for its pivot word.
  std::map<int, ScalarVector, std::greater<int>> reduced;
  auto insert_row = [&](ScalarVector row) {
    for (auto& [pc, prow] : reduced) {
      if (!(row(pc) == Scalar(0))) {
        Scalar c = row(pc);
        for (int j = 0; j < M; ++j)
          if (!(prow(j) == Scalar(0))) row(j) -= c * prow(j);
      }
    }
    int lead = -1;
    for (int j = M - 1; j >= 0; --j) {
      if (!(row(j) == Scalar(0))) {
        lead = j;
        break;
      }
    }
    if (lead < 0) return;
    Scalar inv = Scalar(1) / row(lead);
    for (int j = 0; j < M; ++j)
      if (!(row(j) == Scalar(0))) row(j) *= inv;
    for (auto& [pc, prow] : reduced) {
      if (!(prow(lead) == Scalar(0))) {
        Scalar c = prow(lead);
        for (int j = 0; j < M; ++j)
          if (!(row(j) == Scalar(0))) prow(j) -= c * row(j);
      }
    }
    reduced.emplace(lead, std::move(row));
  };

  if (height(beta) >= 2 && rank() >= 2) {
    auto words_of = [&](const RootVec& d) {
      std::vector<Word> ws;
      Word s;
      for (int l = 0; l < rank(); ++l) s.append(d[l], static_cast<unsigned char>(l));
      Word ww = s;
      do {
        ws.push_back(ww);
      } while (std::next_permutation(ww.begin(), ww.end()));
      return ws;
    };
    for (int i = 0; i < rank(); ++i) {
      for (int j = 0; j < rank(); ++j) {
        if (i == j) continue;
        int n = 1 - roots_.cartan(i, j);
        RootVec rest(rank());
        bool fits = true;
        for (int l = 0; l < rank(); ++l) {
          int delta = (l == i ? n : 0) + (l == j ? 1 : 0);
          rest[l] = beta[l] - delta;
          if (rest[l] < 0) fits = false;
        }
        if (!fits) continue;
        std::vector<std::pair<Word, Scalar>> serre;
        for (int m = 0; m <= n; ++m) {
          Word sw;
          sw.append(m, static_cast<unsigned char>(i));
          sw.push_back(static_cast<unsigned char>(j));
          sw.append(n - m, static_cast<unsigned char>(i));
          Scalar c = qbinom(n, m, i);
          if (m % 2 == 1) c = -c;
          serre.emplace_back(std::move(sw), std::move(c));
        }
        std::vector<RootVec> left_degrees;
        RootVec g(rank(), 0);
        std::function<void(int)> enumerate = [&](int idx) {
          if (idx == rank()) {
            left_degrees.push_back(g);
            return;
          }
          for (int c = 0; c <= rest[idx]; ++c) {
            g[idx] = c;
            enumerate(idx + 1);
          }
          g[idx] = 0;
        };
        enumerate(0);
        for (const RootVec& g1 : left_degrees) {
          RootVec g2(rank());
          for (int l = 0; l < rank(); ++l) g2[l] = rest[l] - g1[l];
          for (const Word& w1 : words_of(g1)) {
            for (const Word& w2 : words_of(g2)) {
              ScalarVector row = ScalarVector::Constant(M, Scalar(0));
              for (const auto& [sw, c] : serre) row(index.at(w1 + sw + w2)) += c;
              insert_row(std::move(row));
            }
          }
        }
      }
    }
  }

  std::vector<bool> dependent(M, false);
  for (const auto& [pc, row] : reduced) dependent[pc] = true;
  for (int a = 0; a < M; ++a)
    if (!dependent[a]) gb.words.push_back(gb.all_words[a]);
  for (const auto& [pc, row] : reduced) {
    ScalarVector coords = ScalarVector::Constant(static_cast<int>(gb.words.size()), Scalar(0));
    int bi = 0;
    for (int a = 0; a < M; ++a) {
      if (dependent[a]) continue;
      coords(bi) = -row(a);
      ++bi;
    }
    gb.rewrite.emplace(gb.all_words[pc], std::move(coords));
  }
  return gb;
}

// ---------------------------------------------------------------------------
// Straightening

const std::vector<Session::MixedTerm>& Session::push_single(unsigned char i, const Word& w) const {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = push_cache_.find({i, w});
    if (it != push_cache_.end()) return *it->second;
  }
  auto out = std::make_unique<std::vector<MixedTerm>>();
  if (w.empty()) {
    out->push_back({Word(), std::vector<int>(rank(), 0), Word(1, i), Scalar(1)});
  } else {
    unsigned char j = w[0];
    Word rest = w.substr(1);
    for (const MixedTerm& term : push_single(i, rest)) {
      MixedTerm copy = term;
      copy.f = Word(1, j) + copy.f;
      out->push_back(std::move(copy));
    }
    if (i == j) {
      // e_i f_i = f_i e_i + (k_i - k_i^{-1})/(q^{d_i} - q^{-d_i});
      // the torus factors are then pushed past the remaining f's.
      Scalar cinv = Scalar(1) / (q_power(Rational(roots_.d(i))) - q_power(Rational(-roots_.d(i))));
      std::vector<int> kc = k_lattice(i);
      for (int sign : {1, -1}) {
        std::vector<int> m(rank());
        for (int l = 0; l < rank(); ++l) m[l] = sign * kc[l];
        Scalar c = cinv * t_past_f(m, rest);
        if (sign < 0) c = -c;
        out->push_back({rest, std::move(m), Word(), std::move(c)});
      }
    }
  }
  std::lock_guard<std::mutex> lock(mutex_);
  auto [it, inserted] = push_cache_.emplace(std::make_pair(i, w), std::move(out));
  return *it->second;
}

const std::vector<Session::MixedTerm>& Session::straighten(const Word& u, const Word& w) const {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = straighten_cache_.find({u, w});
    if (it != straighten_cache_.end()) return *it->second;
  }
  auto out = std::make_unique<std::vector<MixedTerm>>();
  if (u.empty()) {
    out->push_back({w, std::vector<int>(rank(), 0), Word(), Scalar(1)});
  } else if (w.empty()) {
    out->push_back({Word(), std::vector<int>(rank(), 0), u, Scalar(1)});
  } else {
    unsigned char i = u.back();
    Word upre = u.substr(0, u.size() - 1);
    std::map<MonKey, Scalar> acc;
    // E_u F_w = E_upre (e_i F_w): push e_i through w, then recurse.
    for (const MixedTerm& part : push_single(i, w)) {
      for (const MixedTerm& sub : straighten(upre, part.f)) {
        Scalar c = part.c * sub.c * e_past_t(sub.e, part.t);
        std::vector<int> m(rank());
        for (int l = 0; l < rank(); ++l) m[l] = sub.t[l] + part.t[l];
        MonKey key{sub.f, std::move(m), sub.e + part.e};
        auto [it2, inserted] = acc.emplace(std::move(key), c);
        if (!inserted) it2->second += c;
      }
    }
    for (auto& [key, c] : acc) {
      if (c.is_zero()) continue;
      out->push_back({key.f, key.t, key.e, c});
    }
  }
  std::lock_guard<std::mutex> lock(mutex_);
  auto [it, inserted] = straighten_cache_.emplace(std::make_pair(u, w), std::move(out));
  return *it->second;
}

// ---------------------------------------------------------------------------
// Element constructors

AlgebraElement Session::one() const {
  AlgebraElement x(this);
  x.add_term({Word(), std::vector<int>(rank(), 0), Word()}, Scalar(1));
  return x;
}

AlgebraElement Session::e(int i) const {
  AlgebraElement x(this);
  x.add_term({Word(), std::vector<int>(rank(), 0), Word(1, static_cast<unsigned char>(i))}, Scalar(1));
  return x;
}

AlgebraElement Session::f(int i) const {
  AlgebraElement x(this);
  x.add_term({Word(1, static_cast<unsigned char>(i)), std::vector<int>(rank(), 0), Word()}, Scalar(1));
  return x;
}

AlgebraElement Session::t(int i, int power) const {
  std::vector<int> m(rank(), 0);
  m[i] = power;
  return t_lattice(m);
}

AlgebraElement Session::t_lattice(const std::vector<int>& m) const {
  AlgebraElement x(this);
  x.add_term({Word(), m, Word()}, Scalar(1));
  return x;
}

AlgebraElement Session::k(int i, int power) const {
  std::vector<int> m = k_lattice(i);
  for (int& c : m) c *= power;
  return t_lattice(m);
}

AlgebraElement Session::from_neg_word(const Word& w) const {
  RootVec beta = word_degree(w, rank());
  const GradedBasis& gb = basis(beta);
  ScalarVector coords = gb.coords(w);
  AlgebraElement x(this);
  for (int a = 0; a < coords.size(); ++a) {
    if (coords(a).is_zero()) continue;
    x.add_term({gb.words[a], std::vector<int>(rank(), 0), Word()}, coords(a));
  }
  return x;
}

AlgebraElement Session::from_pos_word(const Word& u) const {
  RootVec gamma = word_degree(u, rank());
  const GradedBasis& gb = basis(gamma);
  ScalarVector coords = gb.coords(u);
  AlgebraElement x(this);
  for (int a = 0; a < coords.size(); ++a) {
    if (coords(a).is_zero()) continue;
    x.add_term({Word(), std::vector<int>(rank(), 0), gb.words[a]}, coords(a));
  }
  return x;
}

AlgebraElement Session::from_neg_coords(const RootVec& beta, const ScalarVector& coords) const {
  const GradedBasis& gb = basis(beta);
  if (coords.size() != gb.dim()) throw DomainError("from_neg_coords: wrong dimension");
  AlgebraElement x(this);
  for (int a = 0; a < coords.size(); ++a) {
    if (coords(a).is_zero()) continue;
    x.add_term({gb.words[a], std::vector<int>(rank(), 0), Word()}, coords(a));
  }
  return x;
}

AlgebraElement Session::monomial(const Word& fw, const std::vector<int>& tv, const Word& ew) const {
  AlgebraElement te(this);
  te.add_term({Word(), tv, Word()}, Scalar(1));
  return from_neg_word(fw) * te * from_pos_word(ew);
}

// ---------------------------------------------------------------------------
// AlgebraElement arithmetic

void AlgebraElement::add_term(const MonKey& key, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.emplace(key, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

AlgebraElement AlgebraElement::operator-() const {
  AlgebraElement r(session_);
  for (const auto& [key, c] : terms_) r.terms_.emplace(key, -c);
  return r;
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& o) {
  if (session_ == nullptr) session_ = o.session_;
  for (const auto& [key, c] : o.terms_) add_term(key, c);
  return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& o) {
  if (session_ == nullptr) session_ = o.session_;
  for (const auto& [key, c] : o.terms_) add_term(key, -c);
  return *this;
}

AlgebraElement AlgebraElement::scaled(const Scalar& c) const {
  AlgebraElement r(session_);
  if (c.is_zero()) return r;
  for (const auto& [key, coeff] : terms_) r.terms_.emplace(key, coeff * c);
  return r;
}

AlgebraElement AlgebraElement::operator*(const AlgebraElement& o) const {
  const Session* s = session_ ? session_ : o.session_;
  AlgebraElement result(s);
  if (is_zero() || o.is_zero()) return result;
  const int r = s->rank();
  for (const auto& [ks, cs] : terms_) {
    for (const auto& [kt, ct] : o.terms_) {
      Scalar base = cs * ct;
      for (const Session::MixedTerm& mid : s->straighten(ks.e, kt.f)) {
        Scalar c = base * mid.c * s->t_past_f(ks.t, mid.f) * s->e_past_t(mid.e, kt.t);
        Word fw = ks.f + mid.f;
        Word ew = mid.e + kt.e;
        std::vector<int> tv(r);
        for (int l = 0; l < r; ++l) tv[l] = ks.t[l] + mid.t[l] + kt.t[l];
        const GradedBasis& fb = s->basis(word_degree(fw, r));
        const GradedBasis& eb = s->basis(word_degree(ew, r));
        ScalarVector fc = fb.coords(fw);
        ScalarVector ec = eb.coords(ew);
        for (int a = 0; a < fc.size(); ++a) {
          if (fc(a).is_zero()) continue;
          for (int b = 0; b < ec.size(); ++b) {
            if (ec(b).is_zero()) continue;
            result.add_term({fb.words[a], tv, eb.words[b]}, c * fc(a) * ec(b));
          }
        }
      }
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Hopf structure

TensorElement AlgebraElement::coproduct() const {
  const Session* s = session_;
  TensorElement out(s);
  if (is_zero()) return out;
  const int r = s->rank();
  for (const auto& [key, coeff] : terms_) {
    TensorElement acc(s);
    acc.add_term({Word(), std::vector<int>(r, 0), Word()}, {Word(), std::vector<int>(r, 0), Word()}, coeff);
    auto step = [&](const std::vector<std::pair<AlgebraElement, AlgebraElement>>& legs) {
      TensorElement delta(s);
      for (const auto& [l1, l2] : legs)
        for (const auto& [k1, c1] : l1.terms())
          for (const auto& [k2, c2] : l2.terms()) delta.add_term(k1, k2, c1 * c2);
      acc = acc * delta;
    };
    for (unsigned char l : key.f) step({{s->f(l), s->k(l, -1)}, {s->one(), s->f(l)}});
    {
      AlgebraElement tm = s->t_lattice(key.t);
      step({{tm, tm}});
    }
    for (unsigned char l : key.e) step({{s->e(l), s->one()}, {s->k(l), s->e(l)}});
    out += acc;
  }
  return out;
}

Scalar AlgebraElement::counit() const {
  Scalar r(0);
  for (const auto& [key, c] : terms_)
    if (key.f.empty() && key.e.empty()) r += c;
  return r;
}

namespace {

// Product of letter images in reversed order, shared by the
// antiautomorphisms sigma and omega.
AlgebraElement antihom_image(const Session* s, const MonKey& key, const Scalar& coeff,
                             const std::function<AlgebraElement(int)>& image_f,
                             const std::function<AlgebraElement(int)>& image_e,
                             const std::function<AlgebraElement(const std::vector<int>&)>& image_t) {
  AlgebraElement acc = s->one();
  for (auto it = key.e.rbegin(); it != key.e.rend(); ++it) acc = acc * image_e(*it);
  acc = acc * image_t(key.t);
  for (auto it = key.f.rbegin(); it != key.f.rend(); ++it) acc = acc * image_f(*it);
  return acc.scaled(coeff);
}

}  // namespace

AlgebraElement AlgebraElement::antipode() const {
  const Session* s = session_;
  AlgebraElement out(s);
  for (const auto& [key, coeff] : terms_) {
    out += antihom_image(
        s, key, coeff, [&](int l) { return (s->f(l) * s->k(l)).scaled(Scalar(-1)); },
        [&](int l) { return (s->k(l, -1) * s->e(l)).scaled(Scalar(-1)); },
        [&](const std::vector<int>& m) {
          std::vector<int> neg(m.size());
          for (size_t i = 0; i < m.size(); ++i) neg[i] = -m[i];
          return s->t_lattice(neg);
        });
  }
  return out;
}

AlgebraElement AlgebraElement::omega() const {
  const Session* s = session_;
  AlgebraElement out(s);
  for (const auto& [key, coeff] : terms_) {
    out += antihom_image(
        s, key, coeff, [&](int l) { return s->k(l, -1) * s->e(l); },
        [&](int l) { return s->f(l) * s->k(l); },
        [&](const std::vector<int>& m) { return s->t_lattice(m); });
  }
  return out;
}

AlgebraElement AlgebraElement::theta() const {
  const Session* s = session_;
  AlgebraElement out(s);
  const int r = s->rank();
  for (const auto& [key, coeff] : terms_) {
    // theta(F_w T^m E_u) = (-1)^{|w|+|u|} E_w T^{-m} F_u.
    std::vector<int> neg(r);
    for (int l = 0; l < r; ++l) neg[l] = -key.t[l];
    AlgebraElement ew = s->from_pos_word(key.f);
    AlgebraElement fu = s->from_neg_word(key.e);
    Scalar sign = ((key.f.size() + key.e.size()) % 2 == 0) ? Scalar(1) : Scalar(-1);
    out += (ew * s->t_lattice(neg) * fu).scaled(coeff * sign);
  }
  return out;
}

AlgebraElement AlgebraElement::zero_part() const {
  AlgebraElement out(session_);
  for (const auto& [key, c] : terms_)
    if (key.f.empty() && key.e.empty()) out.terms_.emplace(key, c);
  return out;
}

Scalar AlgebraElement::qchar(const Weight& lambda) const {
  Scalar r(0);
  for (const auto& [key, c] : terms_) {
    if (!key.f.empty() || !key.e.empty()) throw DomainError("qchar: element is not in U^0");
    r += c * session_->qchar_t(lambda, key.t);
  }
  return r;
}

std::vector<int> AlgebraElement::term_weight(const MonKey& key, int rank) {
  std::vector<int> w(rank, 0);
  for (unsigned char l : key.e) w[l] += 1;
  for (unsigned char l : key.f) w[l] -= 1;
  return w;
}

std::optional<std::vector<int>> AlgebraElement::weight() const {
  if (!session_) return std::nullopt;
  const int r = session_->rank();
  if (terms_.empty()) return std::vector<int>(r, 0);
  std::optional<std::vector<int>> w;
  for (const auto& [key, c] : terms_) {
    std::vector<int> tw = term_weight(key, r);
    if (!w)
      w = tw;
    else if (*w != tw)
      return std::nullopt;
  }
  return w;
}

bool AlgebraElement::in_u_minus() const {
  for (const auto& [key, c] : terms_)
    if (!key.e.empty() || std::any_of(key.t.begin(), key.t.end(), [](int x) { return x != 0; })) return false;
  return true;
}

bool AlgebraElement::in_u_plus() const {
  for (const auto& [key, c] : terms_)
    if (!key.f.empty() || std::any_of(key.t.begin(), key.t.end(), [](int x) { return x != 0; })) return false;
  return true;
}

bool AlgebraElement::in_u_zero() const {
  for (const auto& [key, c] : terms_)
    if (!key.f.empty() || !key.e.empty()) return false;
  return true;
}

// ---------------------------------------------------------------------------
// TensorElement

void TensorElement::add_term(const MonKey& a, const MonKey& b, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.emplace(std::make_pair(a, b), c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

TensorElement& TensorElement::operator+=(const TensorElement& o) {
  if (session_ == nullptr) session_ = o.session_;
  for (const auto& [key, c] : o.terms_) add_term(key.first, key.second, c);
  return *this;
}

TensorElement TensorElement::scaled(const Scalar& c) const {
  TensorElement r(session_);
  if (c.is_zero()) return r;
  for (const auto& [key, coeff] : terms_) r.terms_.emplace(key, coeff * c);
  return r;
}

TensorElement TensorElement::operator*(const TensorElement& o) const {
  const Session* s = session_ ? session_ : o.session_;
  TensorElement out(s);
  for (const auto& [ka, ca] : terms_) {
    AlgebraElement a1(s), a2(s);
    a1.add_term(ka.first, Scalar(1));
    a2.add_term(ka.second, Scalar(1));
    for (const auto& [kb, cb] : o.terms_) {
      AlgebraElement b1(s), b2(s);
      b1.add_term(kb.first, Scalar(1));
      b2.add_term(kb.second, Scalar(1));
      AlgebraElement p1 = a1 * b1;
      AlgebraElement p2 = a2 * b2;
      Scalar c = ca * cb;
      for (const auto& [k1, c1] : p1.terms())
        for (const auto& [k2, c2] : p2.terms()) out.add_term(k1, k2, c * c1 * c2);
    }
  }
  return out;
}

TensorElement TensorElement::map_legs(const std::function<AlgebraElement(const AlgebraElement&)>& map1,
                                      const std::function<AlgebraElement(const AlgebraElement&)>& map2) const {
  TensorElement out(session_);
  for (const auto& [key, c] : terms_) {
    AlgebraElement a(session_), b(session_);
    a.add_term(key.first, Scalar(1));
    b.add_term(key.second, Scalar(1));
    AlgebraElement ma = map1 ? map1(a) : a;
    AlgebraElement mb = map2 ? map2(b) : b;
    for (const auto& [k1, c1] : ma.terms())
      for (const auto& [k2, c2] : mb.terms()) out.add_term(k1, k2, c * c1 * c2);
  }
  return out;
}

AlgebraElement TensorElement::counit_left() const {
  AlgebraElement out(session_);
  for (const auto& [key, c] : terms_) {
    if (!key.first.f.empty() || !key.first.e.empty()) continue;
    out.add_term(key.second, c);
  }
  return out;
}

AlgebraElement TensorElement::counit_right() const {
  AlgebraElement out(session_);
  for (const auto& [key, c] : terms_) {
    if (!key.second.f.empty() || !key.second.e.empty()) continue;
    out.add_term(key.first, c);
  }
  return out;
}

AlgebraElement TensorElement::multiply_legs() const {
  AlgebraElement out(session_);
  for (const auto& [key, c] : terms_) {
    AlgebraElement a(session_), b(session_);
    a.add_term(key.first, Scalar(1));
    b.add_term(key.second, Scalar(1));
    out += (a * b).scaled(c);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Printing and parsing

namespace {

void print_word(std::ostringstream& os, const Word& w, char letter, bool& printed_any) {
  size_t i = 0;
  while (i < w.size()) {
    size_t j = i;
    while (j < w.size() && w[j] == w[i]) ++j;
    if (printed_any) os << "*";
    os << letter << static_cast<int>(w[i]) + 1;
    if (j - i > 1) os << "^" << (j - i);
    printed_any = true;
    i = j;
  }
}

}  // namespace

std::string AlgebraElement::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first_term = true;
  for (const auto& [key, c] : terms_) {
    if (!first_term) os << " + ";
    first_term = false;
    std::ostringstream mono;
    bool printed = false;
    print_word(mono, key.f, 'f', printed);
    for (size_t i = 0; i < key.t.size(); ++i) {
      if (key.t[i] == 0) continue;
      if (printed) mono << "*";
      mono << "t" << i + 1;
      if (key.t[i] != 1) mono << "^" << key.t[i];
      printed = true;
    }
    print_word(mono, key.e, 'e', printed);
    if (!printed) {
      os << c.str();
    } else if (c.is_one()) {
      os << mono.str();
    } else {
      os << c.str() << "*" << mono.str();
    }
  }
  return os.str();
}

AlgebraElement Session::parse_element(const std::string& text) const {
  AlgebraElement result(this);
  size_t pos = 0;
  auto skip_ws = [&]() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  skip_ws();
  if (pos == text.size()) throw DomainError("parse_element: empty input");
  {
    std::string rest = text.substr(pos);
    while (!rest.empty() && std::isspace(static_cast<unsigned char>(rest.back()))) rest.pop_back();
    if (rest == "0") return result;
  }
  bool negate = false;
  if (text[pos] == '-') {
    negate = true;
    ++pos;
  } else if (text[pos] == '+') {
    ++pos;
  }
  while (true) {
    AlgebraElement term = one();
    if (negate) term = term.scaled(Scalar(-1));
    bool expect_factor = true;
    while (expect_factor) {
      skip_ws();
      if (pos >= text.size()) throw DomainError("parse_element: unexpected end of input");
      char c = text[pos];
      if (c == '(') {
        size_t start = pos;
        int depth = 0;
        size_t end = pos;
        while (end < text.size()) {
          if (text[end] == '(') ++depth;
          if (text[end] == ')') {
            --depth;
            if (depth == 0) break;
          }
          ++end;
        }
        if (depth != 0) throw DomainError("parse_element: unbalanced parentheses");
        ++end;
        size_t probe = end;
        while (probe < text.size() && std::isspace(static_cast<unsigned char>(text[probe]))) ++probe;
        if (probe < text.size() && text[probe] == '/') {
          ++probe;
          while (probe < text.size() && std::isspace(static_cast<unsigned char>(text[probe]))) ++probe;
          if (probe >= text.size() || text[probe] != '(') throw DomainError("parse_element: bad scalar literal");
          int d2 = 0;
          while (probe < text.size()) {
            if (text[probe] == '(') ++d2;
            if (text[probe] == ')') {
              --d2;
              if (d2 == 0) break;
            }
            ++probe;
          }
          if (d2 != 0) throw DomainError("parse_element: unbalanced parentheses");
          end = probe + 1;
        }
        term = term.scaled(Scalar::parse(text.substr(start, end - start)));
        pos = end;
      } else if (c == 'f' || c == 'e' || c == 't') {
        ++pos;
        size_t istart = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (istart == pos) throw DomainError("parse_element: generator index expected");
        int idx = std::stoi(text.substr(istart, pos - istart)) - 1;
        if (idx < 0 || idx >= rank()) throw DomainError("parse_element: generator index out of range");
        int power = 1;
        if (pos < text.size() && text[pos] == '^') {
          ++pos;
          size_t pstart = pos;
          if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
          while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
          power = std::stoi(text.substr(pstart, pos - pstart));
        }
        if (c == 't') {
          term = term * t(idx, power);
        } else {
          if (power < 0) throw DomainError("parse_element: negative powers only for t");
          AlgebraElement g = (c == 'f') ? f(idx) : e(idx);
          for (int p = 0; p < power; ++p) term = term * g;
        }
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos < text.size() && text[pos] == '/') {
          ++pos;
          while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        }
        term = term.scaled(Scalar(Rational::parse(text.substr(start, pos - start))));
      } else {
        throw DomainError(std::string("parse_element: unexpected character '") + c + "'");
      }
      skip_ws();
      if (pos < text.size() && text[pos] == '*') {
        ++pos;
        expect_factor = true;
      } else {
        expect_factor = false;
      }
    }
    result += term;
    skip_ws();
    if (pos >= text.size()) break;
    if (text[pos] == '+') {
      negate = false;
      ++pos;
    } else if (text[pos] == '-') {
      negate = true;
      ++pos;
    } else {
      throw DomainError("parse_element: expected '+' or '-' between terms");
    }
  }
  return result;
}

}  // namespace qfa
