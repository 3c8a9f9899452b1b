#include "qfa/funcalg.hpp"

#include <algorithm>
#include <sstream>

#include "qfa/errors.hpp"
#include "qfa/linalg.hpp"

namespace qfa {

// ---------------------------------------------------------------------------
// Carrier

Scalar Carrier::t_eigenvalue(int index, const std::vector<int>& m) const {
  return session_->qchar_t(Weight(weights_[index]), m);
}

const ScalarMatrix& Carrier::word_matrix(bool positive, const Word& w) const {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = word_cache_.find({positive, w});
    if (it != word_cache_.end()) return *it->second;
  }
  std::unique_ptr<ScalarMatrix> result;
  if (w.empty()) {
    result = std::make_unique<ScalarMatrix>(ScalarMatrix::Identity(dim_, dim_));
  } else {
    const ScalarMatrix& head = positive ? mat_e_[w[0]] : mat_f_[w[0]];
    const ScalarMatrix& tail = word_matrix(positive, w.substr(1));
    result = std::make_unique<ScalarMatrix>((head * tail).eval());
  }
  std::lock_guard<std::mutex> lock(mutex_);
  auto [it, inserted] = word_cache_.emplace(std::make_pair(positive, w), std::move(result));
  return *it->second;
}

ScalarMatrix Carrier::matrix_of(const AlgebraElement& x) const {
  ScalarMatrix out = ScalarMatrix::Constant(dim_, dim_, Scalar(0));
  for (const auto& [key, c] : x.terms()) {
    ScalarMatrix acc = word_matrix(true, key.e);
    if (std::any_of(key.t.begin(), key.t.end(), [](int v) { return v != 0; })) {
      // Left-multiply by the torus diagonal.
      for (int col = 0; col < dim_; ++col)
        for (int row = 0; row < dim_; ++row)
          if (!acc(row, col).is_zero()) acc(row, col) *= t_eigenvalue(row, key.t);
    }
    if (!key.f.empty()) acc = (word_matrix(false, key.f) * acc).eval();
    out += acc * c;
  }
  return out;
}

std::vector<ScalarVector> Carrier::singular_vectors(const RationalVector& target_weight) const {
  std::vector<int> columns;
  for (int b = 0; b < dim_; ++b) {
    bool match = true;
    for (int j = 0; j < target_weight.size(); ++j)
      if (weights_[b](j) != target_weight(j)) match = false;
    if (match) columns.push_back(b);
  }
  std::vector<ScalarVector> out;
  if (columns.empty()) return out;
  const int r = session_->rank();
  ScalarMatrix stacked(dim_ * r, static_cast<int>(columns.size()));
  for (int i = 0; i < r; ++i)
    for (size_t c = 0; c < columns.size(); ++c)
      stacked.block(i * dim_, static_cast<int>(c), dim_, 1) = mat_e_[i].col(columns[c]);
  for (const ScalarVector& v : null_space_basis<Scalar>(stacked)) {
    ScalarVector full = ScalarVector::Constant(dim_, Scalar(0));
    for (size_t c = 0; c < columns.size(); ++c) full(columns[c]) = v(static_cast<int>(c));
    out.push_back(std::move(full));
  }
  return out;
}

// ---------------------------------------------------------------------------
// FunctionElement

void FunctionElement::add_atom(int phi, int vec, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = atoms_.emplace(std::make_pair(phi, vec), c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) atoms_.erase(it);
  }
}

FunctionElement FunctionElement::operator-() const {
  FunctionElement r(carrier_);
  for (const auto& [key, c] : atoms_) r.atoms_.emplace(key, -c);
  return r;
}

FunctionElement& FunctionElement::operator+=(const FunctionElement& o) {
  if (carrier_ == nullptr) carrier_ = o.carrier_;
  if (!o.atoms_.empty() && o.carrier_ != carrier_)
    throw DomainError("FunctionElement: mixing carriers in a linear combination");
  for (const auto& [key, c] : o.atoms_) add_atom(key.first, key.second, c);
  return *this;
}

FunctionElement& FunctionElement::operator-=(const FunctionElement& o) { return *this += -o; }

FunctionElement FunctionElement::scaled(const Scalar& c) const {
  FunctionElement r(carrier_);
  if (c.is_zero()) return r;
  for (const auto& [key, coeff] : atoms_) r.atoms_.emplace(key, coeff * c);
  return r;
}

bool operator==(const FunctionElement& a, const FunctionElement& b) {
  if (a.atoms_.empty() && b.atoms_.empty()) return true;
  return a.carrier_ == b.carrier_ && a.atoms_ == b.atoms_;
}

FunctionElement FunctionElement::arrow(const AlgebraElement& a) const {
  if (is_zero()) return *this;
  ScalarMatrix m = carrier_->matrix_of(a);
  FunctionElement out(carrier_);
  for (const auto& [key, c] : atoms_) {
    for (int row = 0; row < m.rows(); ++row) {
      const Scalar& entry = m(row, key.second);
      if (!entry.is_zero()) out.add_atom(key.first, row, c * entry);
    }
  }
  return out;
}

FunctionElement FunctionElement::arrow_word(bool positive, const Word& w) const {
  if (is_zero()) return *this;
  const ScalarMatrix& m = carrier_->word_matrix(positive, w);
  FunctionElement out(carrier_);
  for (const auto& [key, c] : atoms_) {
    for (int row = 0; row < m.rows(); ++row) {
      const Scalar& entry = m(row, key.second);
      if (!entry.is_zero()) out.add_atom(key.first, row, c * entry);
    }
  }
  return out;
}

FunctionElement FunctionElement::coarrow(const AlgebraElement& a) const {
  if (is_zero()) return *this;
  ScalarMatrix m = carrier_->matrix_of(a);
  FunctionElement out(carrier_);
  // (f <- a) with f = c_{phi_j, v}: the new covector is phi_j after a, i.e.
  // sum_u M(j, u) phi_u.
  for (const auto& [key, c] : atoms_) {
    for (int u = 0; u < m.cols(); ++u) {
      const Scalar& entry = m(key.first, u);
      if (!entry.is_zero()) out.add_atom(u, key.second, c * entry);
    }
  }
  return out;
}

Scalar FunctionElement::evaluate(const AlgebraElement& x) const {
  if (is_zero()) return Scalar(0);
  ScalarMatrix m = carrier_->matrix_of(x);
  Scalar out(0);
  for (const auto& [key, c] : atoms_) out += c * m(key.first, key.second);
  return out;
}

std::optional<RationalVector> FunctionElement::arrow_weight() const {
  if (!carrier_) return std::nullopt;
  if (atoms_.empty()) return RationalVector::Constant(carrier_->session().rank(), Rational(0));
  std::optional<RationalVector> w;
  for (const auto& [key, c] : atoms_) {
    const RationalVector& wv = carrier_->weight_of(key.second);
    if (!w) {
      w = wv;
    } else {
      for (int i = 0; i < wv.size(); ++i)
        if ((*w)(i) != wv(i)) return std::nullopt;
    }
  }
  return w;
}

FunctionElement FunctionElement::eval_z_one() const {
  FunctionElement out(carrier_);
  for (const auto& [key, c] : atoms_) out.add_atom(key.first, key.second, c.eval_z_one());
  return out;
}

int FunctionElement::max_pole_order() const {
  int order = 0;
  for (const auto& [key, c] : atoms_) order = std::max(order, c.pole_order_at_one());
  return order;
}

std::string FunctionElement::str() const {
  if (atoms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [key, c] : atoms_) {
    if (!first) os << " + ";
    first = false;
    os << c.str() << "*c[" << key.first << "," << key.second << "]";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// CarrierRegistry

const Carrier& CarrierRegistry::intern(std::vector<const WeightModule*> factors) {
  std::string id;
  if (factors.empty()) {
    id = "1";
  } else {
    for (size_t i = 0; i < factors.size(); ++i) {
      if (i) id += "*";
      id += "L(";
      const Weight& mu = factors[i]->highest_weight();
      for (int j = 0; j < mu.coords.size(); ++j) {
        if (j) id += ",";
        id += mu.coords(j).str();
      }
      id += ")";
    }
  }
  auto it = carriers_.find(id);
  if (it != carriers_.end()) return *it->second;

  auto c = std::make_unique<Carrier>();
  c->id_ = id;
  c->factors_ = std::move(factors);
  c->session_ = &shap_->session();
  const int r = c->session_->rank();
  c->dim_ = 1;
  c->depth_ = 0;
  for (const WeightModule* m : c->factors_) {
    c->dim_ *= m->dim();
    c->depth_ += m->depth();
  }

  // Flat basis weights: row-major over the factor list.
  c->weights_.assign(c->dim_, RationalVector::Constant(r, Rational(0)));
  for (int b = 0; b < c->dim_; ++b) {
    int rem = b;
    RationalVector w = RationalVector::Constant(r, Rational(0));
    for (int fi = static_cast<int>(c->factors_.size()) - 1; fi >= 0; --fi) {
      const WeightModule* m = c->factors_[fi];
      int pos = rem % m->dim();
      rem /= m->dim();
      w += m->weight_of(pos);
    }
    c->weights_[b] = std::move(w);
  }

  // Generator matrices through the iterated coproduct:
  //   e_i: sum_p K (x) ... (x) K (x) E_p (x) Id (x) ... (x) Id
  //   f_i: sum_p Id (x) ... (x) Id (x) F_p (x) K^{-1} (x) ... (x) K^{-1}.
  c->mat_e_.assign(r, ScalarMatrix::Constant(c->dim_, c->dim_, Scalar(0)));
  c->mat_f_.assign(r, ScalarMatrix::Constant(c->dim_, c->dim_, Scalar(0)));
  const size_t n = c->factors_.size();
  for (int i = 0; i < r; ++i) {
    std::vector<int> klat = c->session_->k_lattice(i);
    std::vector<ScalarMatrix> kdiag, kinv_diag;
    for (const WeightModule* m : c->factors_) {
      ScalarMatrix kd = ScalarMatrix::Constant(m->dim(), m->dim(), Scalar(0));
      ScalarMatrix ki = ScalarMatrix::Constant(m->dim(), m->dim(), Scalar(0));
      std::vector<int> neg(klat.size());
      for (size_t l = 0; l < klat.size(); ++l) neg[l] = -klat[l];
      for (int b = 0; b < m->dim(); ++b) {
        kd(b, b) = m->t_eigenvalue(b, klat);
        ki(b, b) = m->t_eigenvalue(b, neg);
      }
      kdiag.push_back(std::move(kd));
      kinv_diag.push_back(std::move(ki));
    }
    for (size_t p = 0; p < n; ++p) {
      ScalarMatrix term_e = ScalarMatrix::Identity(1, 1);
      ScalarMatrix term_f = ScalarMatrix::Identity(1, 1);
      for (size_t j = 0; j < n; ++j) {
        const WeightModule* m = c->factors_[j];
        const ScalarMatrix* fe;
        const ScalarMatrix* ff;
        ScalarMatrix ident = ScalarMatrix::Identity(m->dim(), m->dim());
        if (j < p) {
          fe = &kdiag[j];
          ff = &ident;
        } else if (j == p) {
          fe = &m->mat_e(i);
          ff = &m->mat_f(i);
        } else {
          fe = &ident;
          ff = &kinv_diag[j];
        }
        term_e = kronecker<Scalar>(term_e, *fe);
        term_f = kronecker<Scalar>(term_f, *ff);
      }
      c->mat_e_[i] += term_e;
      c->mat_f_[i] += term_f;
    }
  }

  auto [pos, inserted] = carriers_.emplace(id, std::move(c));
  return *pos->second;
}

const Carrier& CarrierRegistry::trivial() { return intern({}); }

const Carrier& CarrierRegistry::finite_dim(const Weight& mu) {
  std::string mkey = "L(";
  for (int j = 0; j < mu.coords.size(); ++j) {
    if (j) mkey += ",";
    mkey += mu.coords(j).str();
  }
  mkey += ")";
  auto it = modules_.find(mkey);
  if (it == modules_.end()) {
    auto built = std::make_unique<WeightModule>(WeightModule::finite_dim(*shap_, mu));
    it = modules_.emplace(mkey, std::move(built)).first;
  }
  return intern({it->second.get()});
}

const Carrier& CarrierRegistry::tensor(const Carrier& a, const Carrier& b) {
  std::vector<const WeightModule*> factors = a.factors_;
  factors.insert(factors.end(), b.factors_.begin(), b.factors_.end());
  return intern(std::move(factors));
}

const Carrier* CarrierRegistry::find(const std::string& id) const {
  auto it = carriers_.find(id);
  return it == carriers_.end() ? nullptr : it->second.get();
}

FunctionElement CarrierRegistry::matrix_coefficient(const Carrier& c, int phi, int vec) const {
  if (phi < 0 || phi >= c.dim() || vec < 0 || vec >= c.dim())
    throw DomainError("matrix_coefficient: index out of range");
  FunctionElement f(&c);
  f.add_atom(phi, vec, Scalar(1));
  return f;
}

FunctionElement CarrierRegistry::matrix_coefficient(const Carrier& c, int phi, const ScalarVector& vec) const {
  if (vec.size() != c.dim()) throw DomainError("matrix_coefficient: wrong vector dimension");
  FunctionElement f(&c);
  for (int k = 0; k < vec.size(); ++k)
    if (!vec(k).is_zero()) f.add_atom(phi, k, vec(k));
  return f;
}

FunctionElement CarrierRegistry::unit() {
  FunctionElement f(&trivial());
  f.add_atom(0, 0, Scalar(1));
  return f;
}

FunctionElement CarrierRegistry::product(const FunctionElement& f1, const FunctionElement& f2) {
  if (f1.is_zero() || f2.is_zero()) {
    // The zero element of the tensor carrier (or of anything).
    return FunctionElement();
  }
  const Carrier& c = tensor(*f1.carrier(), *f2.carrier());
  const int d2 = f2.carrier()->dim();
  FunctionElement out(&c);
  for (const auto& [k1, c1] : f1.atoms())
    for (const auto& [k2, c2] : f2.atoms())
      out.add_atom(k1.first * d2 + k2.first, k1.second * d2 + k2.second, c1 * c2);
  return out;
}

std::vector<ScalarVector> CarrierRegistry::invariant_vectors(const Weight& lambda, const Carrier& c,
                                                             KernelSide side) const {
  const Session& s = shap_->session();
  const int r = s.rank();
  std::vector<int> zero_cols;
  for (int b = 0; b < c.dim(); ++b) {
    bool zero = true;
    for (int j = 0; j < r; ++j)
      if (!c.weight_of(b)(j).is_zero()) zero = false;
    if (zero) zero_cols.push_back(b);
  }
  if (zero_cols.empty()) return {};

  std::vector<ScalarMatrix> conditions;
  for (const RootVec& beta : s.roots().enumerate_qplus(c.depth())) {
    for (const AlgebraElement& y : shap_->kernel_block(lambda, beta)) {
      if (side == KernelSide::lower || side == KernelSide::both) conditions.push_back(c.matrix_of(y));
      if (side == KernelSide::upper || side == KernelSide::both) conditions.push_back(c.matrix_of(y.theta()));
    }
  }
  if (conditions.empty()) {
    // No kernel constraints: the whole zero-weight layer.
    std::vector<ScalarVector> out;
    for (int col : zero_cols) {
      ScalarVector v = ScalarVector::Constant(c.dim(), Scalar(0));
      v(col) = Scalar(1);
      out.push_back(std::move(v));
    }
    return out;
  }
  ScalarMatrix stacked(static_cast<int>(conditions.size()) * c.dim(), static_cast<int>(zero_cols.size()));
  for (size_t ci = 0; ci < conditions.size(); ++ci)
    for (size_t k = 0; k < zero_cols.size(); ++k)
      stacked.block(static_cast<int>(ci) * c.dim(), static_cast<int>(k), c.dim(), 1) =
          conditions[ci].col(zero_cols[k]);
  std::vector<ScalarVector> out;
  for (const ScalarVector& v : null_space_basis<Scalar>(stacked)) {
    ScalarVector full = ScalarVector::Constant(c.dim(), Scalar(0));
    for (size_t k = 0; k < zero_cols.size(); ++k) full(zero_cols[k]) = v(static_cast<int>(k));
    out.push_back(std::move(full));
  }
  return out;
}

std::vector<FunctionElement> CarrierRegistry::invariant_subspace(const Weight& lambda, const Carrier& c) const {
  std::vector<FunctionElement> out;
  std::vector<ScalarVector> vectors = invariant_vectors(lambda, c, KernelSide::both);
  for (int phi = 0; phi < c.dim(); ++phi)
    for (const ScalarVector& v : vectors) out.push_back(matrix_coefficient(c, phi, v));
  return out;
}

bool CarrierRegistry::in_invariant_subspace(const Weight& lambda, const FunctionElement& f) const {
  if (f.is_zero()) return true;
  const Carrier& c = *f.carrier();
  auto w = f.arrow_weight();
  if (!w) return false;
  for (int j = 0; j < w->size(); ++j)
    if (!(*w)(j).is_zero()) return false;
  const Session& s = shap_->session();
  for (const RootVec& beta : s.roots().enumerate_qplus(c.depth())) {
    for (const AlgebraElement& y : shap_->kernel_block(lambda, beta)) {
      if (!f.arrow(y).is_zero()) return false;
      if (!f.arrow(y.theta()).is_zero()) return false;
    }
  }
  return true;
}

}  // namespace qfa
