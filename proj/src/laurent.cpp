#include "qfa/laurent.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace qfa {

namespace {

// Dense univariate polynomial over Q, index = exponent. Used internally for
// the gcd machinery: either as a polynomial in v (coefficients of a fixed
// z-power) or, degenerately, the whole z-free polynomial.
using UPoly = std::vector<Rational>;

void utrim(UPoly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

bool uzero(const UPoly& p) { return p.empty(); }
int udeg(const UPoly& p) { return static_cast<int>(p.size()) - 1; }

UPoly umul(const UPoly& a, const UPoly& b) {
  if (uzero(a) || uzero(b)) return {};
  UPoly r(a.size() + b.size() - 1, Rational(0));
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  utrim(r);
  return r;
}

UPoly usub(UPoly a, const UPoly& b) {
  if (a.size() < b.size()) a.resize(b.size(), Rational(0));
  for (size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
  utrim(a);
  return a;
}

UPoly uscale(UPoly a, const Rational& c) {
  for (auto& x : a) x *= c;
  utrim(a);
  return a;
}

// Division over the field Q; returns quotient, leaves remainder in a.
UPoly udivrem(UPoly& a, const UPoly& b) {
  if (uzero(b)) throw std::domain_error("UPoly: division by zero");
  UPoly q;
  while (!uzero(a) && udeg(a) >= udeg(b)) {
    int shift = udeg(a) - udeg(b);
    Rational c = a.back() / b.back();
    if (static_cast<int>(q.size()) < shift + 1) q.resize(shift + 1, Rational(0));
    q[shift] += c;
    for (size_t i = 0; i < b.size(); ++i) a[shift + i] -= c * b[i];
    utrim(a);
  }
  utrim(q);
  return q;
}

UPoly udiv_exact(const UPoly& a, const UPoly& b) {
  UPoly r = a;
  UPoly q = udivrem(r, b);
  if (!uzero(r)) throw std::domain_error("UPoly: inexact division");
  return q;
}

// Integer-primitive form with positive leading coefficient.
UPoly uprimitive(UPoly a) {
  if (uzero(a)) return a;
  Rational lcm(1), gcd(0);
  for (const auto& c : a) lcm = integer_lcm(lcm, c.denominator());
  for (const auto& c : a) gcd = integer_gcd(gcd, (c * lcm).abs());
  Rational sigma = lcm / gcd;
  if (a.back().sign() < 0) sigma = -sigma;
  return uscale(std::move(a), sigma);
}

// Primitive pseudo-remainder sequence; plain monic Euclid over Q suffers
// exponential coefficient growth already at degree ~15.
UPoly ugcd(UPoly a, UPoly b) {
  a = uprimitive(std::move(a));
  b = uprimitive(std::move(b));
  if (udeg(a) < udeg(b)) std::swap(a, b);
  while (!uzero(b)) {
    // Pseudo-remainder of a by b.
    UPoly r = a;
    const Rational lb = b.back();
    while (!uzero(r) && udeg(r) >= udeg(b)) {
      int shift = udeg(r) - udeg(b);
      Rational lr = r.back();
      r = uscale(std::move(r), lb);
      for (size_t i = 0; i < b.size(); ++i) r[shift + i] -= lr * b[i];
      utrim(r);
    }
    a = std::move(b);
    b = uprimitive(std::move(r));
  }
  return a;
}

// Bivariate ordinary polynomial: coefficient of z^k is a UPoly in v.
using BPoly = std::vector<UPoly>;

void btrim(BPoly& p) {
  while (!p.empty() && uzero(p.back())) p.pop_back();
}

bool bzero(const BPoly& p) { return p.empty(); }
int bdeg_z(const BPoly& p) { return static_cast<int>(p.size()) - 1; }

BPoly bmul_upoly(const BPoly& p, const UPoly& c) {
  BPoly r(p.size());
  for (size_t k = 0; k < p.size(); ++k) r[k] = umul(p[k], c);
  btrim(r);
  return r;
}

BPoly bsub(BPoly a, const BPoly& b) {
  if (a.size() < b.size()) a.resize(b.size());
  for (size_t k = 0; k < b.size(); ++k) a[k] = usub(a[k], b[k]);
  btrim(a);
  return a;
}

BPoly bshift_z(const BPoly& p, int s) {
  if (bzero(p)) return p;
  BPoly r(p.size() + s);
  for (size_t k = 0; k < p.size(); ++k) r[k + s] = p[k];
  return r;
}

// Content with respect to v: monic gcd of all z-coefficients.
UPoly bcontent(const BPoly& p) {
  UPoly g;
  for (const auto& c : p) g = ugcd(g, c);
  return g;
}

BPoly bdiv_content(const BPoly& p, const UPoly& cont) {
  BPoly r(p.size());
  for (size_t k = 0; k < p.size(); ++k) r[k] = uzero(p[k]) ? UPoly{} : udiv_exact(p[k], cont);
  btrim(r);
  return r;
}

Rational ueval(const UPoly& p, const Rational& a) {
  Rational acc(0);
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * a + *it;
  return acc;
}

BPoly bmul(const BPoly& a, const BPoly& b) {
  if (bzero(a) || bzero(b)) return {};
  BPoly r(a.size() + b.size() - 1);
  for (size_t i = 0; i < a.size(); ++i) {
    if (uzero(a[i])) continue;
    for (size_t j = 0; j < b.size(); ++j) {
      if (uzero(b[j])) continue;
      UPoly prod = umul(a[i], b[j]);
      if (static_cast<int>(r[i + j].size()) < static_cast<int>(prod.size())) r[i + j].resize(prod.size(), Rational(0));
      for (size_t k = 0; k < prod.size(); ++k) r[i + j][k] += prod[k];
      utrim(r[i + j]);
    }
  }
  btrim(r);
  return r;
}

int bdeg_v(const BPoly& p) {
  int d = -1;
  for (const auto& c : p) d = std::max(d, udeg(c));
  return d;
}

// Transposed view: coefficient of v^i is a polynomial in z.
BPoly btranspose(const BPoly& p) {
  BPoly t(bdeg_v(p) + 1);
  for (int k = 0; k < static_cast<int>(p.size()); ++k)
    for (int i = 0; i < static_cast<int>(p[k].size()); ++i) {
      if (p[k][i].is_zero()) continue;
      if (static_cast<int>(t[i].size()) < k + 1) t[i].resize(k + 1, Rational(0));
      t[i][k] = p[k][i];
    }
  for (auto& c : t) utrim(c);
  btrim(t);
  return t;
}

// Substitutes v = a; result is a univariate polynomial in z.
UPoly beval_v(const BPoly& p, const Rational& a) {
  UPoly r(p.size(), Rational(0));
  for (size_t k = 0; k < p.size(); ++k) r[k] = ueval(p[k], a);
  utrim(r);
  return r;
}

bool bdivides(const BPoly& d, const BPoly& a) {
  try {
    BPoly r = a;
    // exact z-major division, throws on failure below
    if (bzero(d)) return bzero(a);
    while (!bzero(r)) {
      if (bdeg_z(r) < bdeg_z(d)) return false;
      int shift = bdeg_z(r) - bdeg_z(d);
      UPoly qc = udiv_exact(r.back(), d.back());
      r = bsub(r, bmul_upoly(bshift_z(d, shift), qc));
    }
    return true;
  } catch (const std::domain_error&) {
    return false;
  }
}

// GCD of doubly primitive inputs (content 1 with respect to both variables)
// by Brown's method: univariate z-gcds of evaluations at v = 1, 2, 3, ...,
// Newton interpolation back to Q[v][z], certified by trial division. A
// degree-0 image certifies coprimality immediately, which is the common
// case for reduced-fraction arithmetic.
BPoly brown_gcd_core(const BPoly& a, const BPoly& b) {
  BPoly one{UPoly{Rational(1)}};
  if (bdeg_z(a) == 0 || bdeg_z(b) == 0) return one;    // doubly primitive
  if (bdeg_v(a) == 0 || bdeg_v(b) == 0) return one;

  UPoly gamma = ugcd(a.back(), b.back());
  const int point_budget = bdeg_v(a) + bdeg_v(b) + udeg(gamma) + 4;

  std::vector<Rational> points;
  std::vector<UPoly> images;  // images in z, lc normalized to gamma(point)
  int image_deg = -1;

  for (long step = 1; step <= 8 * point_budget + 16; ++step) {
    Rational at(step);
    if (ueval(a.back(), at).is_zero() || ueval(b.back(), at).is_zero()) continue;
    UPoly ga = ugcd(beval_v(a, at), beval_v(b, at));
    if (udeg(ga) == 0) return one;
    if (image_deg < 0 || udeg(ga) < image_deg) {
      image_deg = udeg(ga);
      points.clear();
      images.clear();
    } else if (udeg(ga) > image_deg) {
      continue;  // unlucky evaluation point
    }
    ga = uscale(std::move(ga), ueval(gamma, at) / ga.back());
    points.push_back(at);
    images.push_back(std::move(ga));

    if (static_cast<int>(points.size()) >= 2 &&
        (static_cast<int>(points.size()) % 4 == 0 || static_cast<int>(points.size()) > point_budget)) {
      // Lagrange interpolation per z-coefficient.
      BPoly cand(image_deg + 1);
      for (int j = 0; j <= image_deg; ++j) {
        UPoly acc;
        for (size_t i = 0; i < points.size(); ++i) {
          Rational y = j < static_cast<int>(images[i].size()) ? images[i][j] : Rational(0);
          if (y.is_zero()) continue;
          UPoly basis{Rational(1)};
          Rational denom(1);
          for (size_t m = 0; m < points.size(); ++m) {
            if (m == i) continue;
            basis = umul(basis, UPoly{-points[m], Rational(1)});
            denom *= points[i] - points[m];
          }
          acc = usub(std::move(acc), uscale(std::move(basis), -(y / denom)));
        }
        cand[j] = std::move(acc);
      }
      btrim(cand);
      if (!bzero(cand)) {
        cand = bdiv_content(cand, bcontent(cand));
        if (bdivides(cand, a) && bdivides(cand, b)) return cand;
      }
    }
  }
  throw std::domain_error("LaurentPoly: bivariate gcd did not stabilize");
}

BPoly bgcd(BPoly a, BPoly b) {
  if (bzero(a)) return b;
  if (bzero(b)) return a;
  // Split off the univariate contents in both variables; the remaining
  // doubly primitive cores go through the modular gcd.
  UPoly cva = bcontent(a), cvb = bcontent(b);
  a = bdiv_content(a, cva);
  b = bdiv_content(b, cvb);
  BPoly ta = btranspose(a), tb = btranspose(b);
  UPoly cza = bcontent(ta), czb = bcontent(tb);
  a = btranspose(bdiv_content(ta, cza));
  b = btranspose(bdiv_content(tb, czb));

  UPoly gv = ugcd(cva, cvb);          // in v
  UPoly gz = ugcd(cza, czb);          // in z
  BPoly core = brown_gcd_core(a, b);  // doubly primitive

  BPoly gzb(gz.size());
  for (size_t k = 0; k < gz.size(); ++k)
    if (!gz[k].is_zero()) gzb[k] = UPoly{gz[k]};
  btrim(gzb);
  return bmul(bmul_upoly(core, gv), gzb);
}

// Exact division in Q[v,z], z-major; every intermediate leading quotient is
// a true quotient coefficient, so udiv_exact never fails when b | a.
BPoly bdiv_exact(BPoly a, const BPoly& b) {
  if (bzero(b)) throw std::domain_error("BPoly: division by zero");
  BPoly q(bzero(a) ? 0 : std::max(0, bdeg_z(a) - bdeg_z(b)) + 1);
  while (!bzero(a)) {
    if (bdeg_z(a) < bdeg_z(b)) throw std::domain_error("BPoly: inexact division");
    int shift = bdeg_z(a) - bdeg_z(b);
    UPoly qc = udiv_exact(a.back(), b.back());
    q[shift] = qc;
    a = bsub(a, bmul_upoly(bshift_z(b, shift), qc));
  }
  btrim(q);
  return q;
}

struct OrdinaryForm {
  BPoly poly;
  int shift_v = 0;
  int shift_z = 0;
};

OrdinaryForm to_ordinary(const LaurentPoly& p) {
  OrdinaryForm f;
  if (p.is_zero()) return f;
  f.shift_v = p.min_ev();
  f.shift_z = p.min_ez();
  f.poly.resize(p.max_ez() - f.shift_z + 1);
  int width = p.max_ev() - f.shift_v + 1;
  for (auto& c : f.poly) c.assign(width, Rational(0));
  for (const auto& [key, c] : p.terms()) f.poly[key.second - f.shift_z][key.first - f.shift_v] = c;
  for (auto& c : f.poly) utrim(c);
  btrim(f.poly);
  return f;
}

LaurentPoly from_ordinary(const BPoly& p, int shift_v = 0, int shift_z = 0) {
  LaurentPoly r;
  for (int k = 0; k < static_cast<int>(p.size()); ++k)
    for (int i = 0; i < static_cast<int>(p[k].size()); ++i)
      if (!p[k][i].is_zero()) r.add_term(i + shift_v, k + shift_z, p[k][i]);
  return r;
}

}  // namespace

LaurentPoly LaurentPoly::monomial(const Rational& c, int ev, int ez) {
  LaurentPoly p;
  p.add_term(ev, ez, c);
  return p;
}

bool LaurentPoly::is_one() const {
  return terms_.size() == 1 && terms_.begin()->first == Key{0, 0} && terms_.begin()->second == Rational(1);
}

bool LaurentPoly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Key{0, 0});
}

void LaurentPoly::add_term(int ev, int ez, const Rational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.emplace(Key{ev, ez}, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly r;
  for (const auto& [key, c] : terms_) r.terms_.emplace(key, -c);
  return r;
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
  for (const auto& [key, c] : o.terms_) add_term(key.first, key.second, c);
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) {
  for (const auto& [key, c] : o.terms_) add_term(key.first, key.second, -c);
  return *this;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  LaurentPoly r;
  for (const auto& [ka, ca] : a.terms())
    for (const auto& [kb, cb] : b.terms()) r.add_term(ka.first + kb.first, ka.second + kb.second, ca * cb);
  return r;
}

LaurentPoly LaurentPoly::scaled(const Rational& c) const {
  LaurentPoly r;
  if (c.is_zero()) return r;
  for (const auto& [key, coeff] : terms_) r.terms_.emplace(key, coeff * c);
  return r;
}

LaurentPoly LaurentPoly::shifted(int dv, int dz) const {
  LaurentPoly r;
  for (const auto& [key, coeff] : terms_) r.terms_.emplace(Key{key.first + dv, key.second + dz}, coeff);
  return r;
}

int LaurentPoly::min_ev() const {
  if (is_zero()) throw std::domain_error("LaurentPoly: exponent range of zero");
  int m = terms_.begin()->first.first;
  for (const auto& [key, c] : terms_) m = std::min(m, key.first);
  return m;
}

int LaurentPoly::max_ev() const {
  if (is_zero()) throw std::domain_error("LaurentPoly: exponent range of zero");
  int m = terms_.begin()->first.first;
  for (const auto& [key, c] : terms_) m = std::max(m, key.first);
  return m;
}

int LaurentPoly::min_ez() const {
  if (is_zero()) throw std::domain_error("LaurentPoly: exponent range of zero");
  int m = terms_.begin()->first.second;
  for (const auto& [key, c] : terms_) m = std::min(m, key.second);
  return m;
}

int LaurentPoly::max_ez() const {
  if (is_zero()) throw std::domain_error("LaurentPoly: exponent range of zero");
  int m = terms_.begin()->first.second;
  for (const auto& [key, c] : terms_) m = std::max(m, key.second);
  return m;
}

const Rational& LaurentPoly::leading_coeff() const {
  if (is_zero()) throw std::domain_error("LaurentPoly: leading coefficient of zero");
  return terms_.rbegin()->second;  // map key order is (ev, ez) ascending
}

LaurentPoly LaurentPoly::subst_z_one() const {
  LaurentPoly r;
  for (const auto& [key, c] : terms_) r.add_term(key.first, 0, c);
  return r;
}

int LaurentPoly::z1_multiplicity() const {
  if (is_zero()) throw std::domain_error("LaurentPoly: (z-1) multiplicity of zero");
  LaurentPoly p = *this;
  int m = 0;
  while (p.subst_z_one().is_zero()) {
    p = p.divide_z_minus_one();
    ++m;
  }
  return m;
}

LaurentPoly LaurentPoly::divide_z_minus_one() const {
  // Synthetic division in z after stripping the z-monomial unit.
  if (is_zero()) throw std::domain_error("LaurentPoly: dividing zero by (z-1)");
  int sz = min_ez();
  // Group coefficients by z-exponent (shifted to start at 0).
  std::map<int, LaurentPoly> by_z;
  for (const auto& [key, c] : terms_) by_z[key.second - sz].add_term(key.first, 0, c);
  int top = by_z.rbegin()->first;
  // p = sum c_k z^k = (z-1) q + r with q_k = sum_{j>k} c_j.
  std::map<int, LaurentPoly> q;
  LaurentPoly acc;
  for (int k = top; k >= 1; --k) {
    auto it = by_z.find(k);
    if (it != by_z.end()) acc += it->second;
    q[k - 1] = acc;
  }
  LaurentPoly rem = acc;
  auto it0 = by_z.find(0);
  if (it0 != by_z.end()) rem += it0->second;
  if (!rem.is_zero()) throw std::domain_error("LaurentPoly: not divisible by (z-1)");
  LaurentPoly result;
  for (const auto& [k, coeff] : q)
    for (const auto& [key, c] : coeff.terms()) result.add_term(key.first, k + sz, c);
  return result;
}

LaurentPoly laurent_gcd(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.is_zero() && b.is_zero()) return LaurentPoly::zero();
  if (a.is_zero()) return from_ordinary(to_ordinary(b).poly);
  if (b.is_zero()) return from_ordinary(to_ordinary(a).poly);
  return from_ordinary(bgcd(to_ordinary(a).poly, to_ordinary(b).poly));
}

LaurentPoly laurent_div_exact(const LaurentPoly& a, const LaurentPoly& b) {
  if (b.is_zero()) throw std::domain_error("LaurentPoly: division by zero");
  if (a.is_zero()) return LaurentPoly::zero();
  OrdinaryForm fa = to_ordinary(a), fb = to_ordinary(b);
  BPoly q = bdiv_exact(fa.poly, fb.poly);
  return from_ordinary(q, fa.shift_v - fb.shift_v, fa.shift_z - fb.shift_z);
}

}  // namespace qfa
