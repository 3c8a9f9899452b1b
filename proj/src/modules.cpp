#include "qfa/modules.hpp"

#include <algorithm>

#include "qfa/errors.hpp"
#include "qfa/linalg.hpp"

namespace qfa {

RationalVector root_to_fundamental(const RootData& rd, const RootVec& beta) {
  const int r = rd.rank();
  RationalVector out = RationalVector::Constant(r, Rational(0));
  // alpha_i has fundamental coordinates (a_ji)_j.
  for (int j = 0; j < r; ++j)
    for (int i = 0; i < r; ++i) out(j) += Rational(beta[i] * rd.cartan(j, i));
  return out;
}

const WeightModule::Layer* WeightModule::layer_of(const RootVec& beta) const {
  auto it = layer_index_.find(beta);
  if (it == layer_index_.end()) return nullptr;
  return &layers_[it->second];
}

int WeightModule::dim_at(const RootVec& beta) const {
  const Layer* l = layer_of(beta);
  return l ? static_cast<int>(l->tags.size()) : 0;
}

Scalar WeightModule::t_eigenvalue(int index, const std::vector<int>& m) const {
  Weight w(weights_[index]);
  if (highest_.direction) w.direction = highest_.direction;
  return session_->qchar_t(w, m);
}

ScalarMatrix WeightModule::matrix_of(const AlgebraElement& x) const {
  ScalarMatrix out = ScalarMatrix::Constant(dim_, dim_, Scalar(0));
  for (const auto& [key, c] : x.terms()) {
    // F_w T^m E_u acts right-to-left.
    ScalarMatrix acc = ScalarMatrix::Identity(dim_, dim_);
    for (auto it = key.e.rbegin(); it != key.e.rend(); ++it) acc = (mat_e_[*it] * acc).eval();
    if (std::any_of(key.t.begin(), key.t.end(), [](int v) { return v != 0; })) {
      ScalarMatrix diag = ScalarMatrix::Constant(dim_, dim_, Scalar(0));
      for (int b = 0; b < dim_; ++b) diag(b, b) = t_eigenvalue(b, key.t);
      acc = (diag * acc).eval();
    }
    for (auto it = key.f.rbegin(); it != key.f.rend(); ++it) acc = (mat_f_[*it] * acc).eval();
    out += acc * c;
  }
  return out;
}

std::vector<ScalarVector> WeightModule::singular_vectors(const RationalVector& target_weight) const {
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

ScalarVector WeightModule::project_layer(const RootVec& beta, const ScalarVector& full_coords) const {
  const Layer* l = layer_of(beta);
  if (!l) return ScalarVector(0);
  auto it = projections_.find(beta);
  if (it == projections_.end()) {
    // Verma layer: tags enumerate the full word basis.
    return full_coords;
  }
  return it->second * full_coords;
}

WeightModule WeightModule::verma(const ShapovalovContext& shap, const Weight& lambda, int max_height) {
  return build(shap, lambda, max_height, Kind::verma);
}

WeightModule WeightModule::irreducible(const ShapovalovContext& shap, const Weight& lambda, int max_height) {
  if (lambda.has_direction()) throw DomainError("irreducible: family weights not supported");
  return build(shap, lambda, max_height, Kind::irreducible_truncated);
}

WeightModule WeightModule::finite_dim(const ShapovalovContext& shap, const Weight& mu) {
  const Session& s = shap.session();
  if (!s.roots().is_dominant_integral(mu))
    throw DomainError("finite_dim: weight " + mu.str() + " is not dominant integral");
  // All weights of L(mu) lie between w0(mu) and mu; the exact depth is the
  // height of mu - w0(mu).
  RationalVector anti = s.roots().antidominant(mu.coords);
  RationalVector diff_fund = mu.coords - anti;
  RationalVector diff_root = s.roots().simple_coordinates(diff_fund);
  long depth = 0;
  for (int i = 0; i < diff_root.size(); ++i) {
    if (!diff_root(i).is_integer()) throw DomainError("finite_dim: non-integral depth");
    depth += diff_root(i).to_long();
  }
  WeightModule m = build(shap, mu, static_cast<int>(depth), Kind::finite_dim);
  return m;
}

WeightModule WeightModule::build(const ShapovalovContext& shap, const Weight& lambda, int max_height, Kind kind) {
  const Session& s = shap.session();
  s.validate_weight(lambda);
  WeightModule m;
  m.kind_ = kind;
  m.highest_ = lambda;
  m.session_ = &s;
  m.depth_ = max_height;
  const int r = s.rank();

  // Layers in Q+ order, layer 0 first.
  std::vector<RootVec> betas;
  betas.push_back(RootVec(r, 0));
  for (const RootVec& beta : s.roots().enumerate_qplus(max_height)) betas.push_back(beta);

  int offset = 0;
  for (const RootVec& beta : betas) {
    Layer layer;
    layer.beta = beta;
    if (kind == Kind::verma || height(beta) == 0) {
      int n = s.basis(beta).dim();
      layer.tags.resize(n);
      for (int i = 0; i < n; ++i) layer.tags[i] = i;
    } else {
      const GramBlock& block = shap.gram_block(lambda, beta);
      layer.tags = block.complement_tags;
      // Projection modulo the kernel: full coords -> tagged coords.
      const int full = block.dim();
      const int quot = static_cast<int>(layer.tags.size());
      ScalarMatrix proj = ScalarMatrix::Constant(quot, full, Scalar(0));
      for (int p = 0; p < quot; ++p) proj(p, layer.tags[p]) = Scalar(1);
      int free_idx = 0;
      std::vector<bool> is_tag(full, false);
      for (int tvalue : layer.tags) is_tag[tvalue] = true;
      for (int col = 0; col < full; ++col) {
        if (is_tag[col]) continue;
        const ScalarVector& null_vec = block.kernel_basis[free_idx++];
        // null_vec = e_col - sum_p R(p, col) e_tags[p]; modulo the kernel
        // e_col = sum_p R(p, col) e_tags[p] with R(p, col) = -null_vec(tags[p]).
        for (int p = 0; p < quot; ++p) proj(p, col) = -null_vec(layer.tags[p]);
      }
      if (quot < full) m.projections_.emplace(beta, std::move(proj));
      if (layer.tags.empty()) continue;  // trivial layer, nothing to store
    }
    layer.offset = offset;
    offset += static_cast<int>(layer.tags.size());
    m.layer_index_.emplace(beta, static_cast<int>(m.layers_.size()));
    m.layers_.push_back(std::move(layer));
  }
  m.dim_ = offset;

  // Weights of the flat basis.
  m.weights_.resize(m.dim_, RationalVector());
  for (const Layer& layer : m.layers_) {
    RationalVector w = lambda.coords - root_to_fundamental(s.roots(), layer.beta);
    for (size_t p = 0; p < layer.tags.size(); ++p) m.weights_[layer.offset + p] = w;
  }

  // Generator matrices.
  m.mat_f_.assign(r, ScalarMatrix::Constant(m.dim_, m.dim_, Scalar(0)));
  m.mat_e_.assign(r, ScalarMatrix::Constant(m.dim_, m.dim_, Scalar(0)));
  for (const Layer& layer : m.layers_) {
    const GradedBasis& gb = s.basis(layer.beta);
    for (size_t p = 0; p < layer.tags.size(); ++p) {
      const Word& y = gb.words[layer.tags[p]];
      int col = layer.offset + static_cast<int>(p);
      for (int i = 0; i < r; ++i) {
        // f_i (y 1) = (f_i y) 1; reduce and project onto the target layer.
        RootVec up = layer.beta;
        up[i] += 1;
        if (height(up) <= max_height) {
          const Layer* target = m.layer_of(up);
          if (target) {
            Word fy = Word(1, static_cast<unsigned char>(i)) + y;
            ScalarVector full = s.basis(up).coords(fy);
            ScalarVector proj = m.project_layer(up, full);
            for (int row = 0; row < proj.size(); ++row)
              if (!proj(row).is_zero()) m.mat_f_[i](target->offset + row, col) = proj(row);
          }
        }
        // e_i (y 1): straighten e_i y, kill terms with a surviving e-part,
        // evaluate the torus part on the highest weight.
        RootVec down = layer.beta;
        down[i] -= 1;
        if (down[i] >= 0) {
          const Layer* target = m.layer_of(down);
          if (target) {
            const GradedBasis& gbd = s.basis(down);
            ScalarVector acc = ScalarVector::Constant(gbd.dim(), Scalar(0));
            for (const Session::MixedTerm& term : s.straighten(Word(1, static_cast<unsigned char>(i)), y)) {
              if (!term.e.empty()) continue;
              Scalar c = term.c * s.qchar_t(lambda, term.t);
              ScalarVector coords = gbd.coords(term.f);
              for (int a = 0; a < coords.size(); ++a)
                if (!coords(a).is_zero()) acc(a) += c * coords(a);
            }
            ScalarVector proj = m.project_layer(down, acc);
            for (int row = 0; row < proj.size(); ++row)
              if (!proj(row).is_zero()) m.mat_e_[i](target->offset + row, col) = proj(row);
          }
        }
      }
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// Character oracles

std::vector<std::pair<RationalMatrix, int>> enumerate_weyl_group(const RootData& rd) {
  const int r = rd.rank();
  std::vector<RationalMatrix> simple;
  for (int i = 0; i < r; ++i) {
    RationalMatrix si = RationalMatrix::Identity(r, r);
    for (int j = 0; j < r; ++j) si(j, i) -= Rational(rd.cartan(j, i));
    simple.push_back(std::move(si));
  }
  auto key_of = [&](const RationalMatrix& m) {
    std::string key;
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) key += m(i, j).str() + ",";
    return key;
  };
  std::vector<std::pair<RationalMatrix, int>> out;
  std::map<std::string, int> seen;
  out.emplace_back(RationalMatrix::Identity(r, r), 1);
  seen.emplace(key_of(out[0].first), 0);
  for (size_t head = 0; head < out.size(); ++head) {
    for (int i = 0; i < r; ++i) {
      RationalMatrix next = simple[i] * out[head].first;
      std::string key = key_of(next);
      if (seen.count(key)) continue;
      seen.emplace(key, static_cast<int>(out.size()));
      out.emplace_back(std::move(next), -out[head].second);
      if (out.size() > 1u << 20) throw DomainError("enumerate_weyl_group: runaway closure");
    }
  }
  return out;
}

long weyl_dimension(const RootData& rd, const Weight& mu) {
  Rational num(1), den(1);
  RationalVector mu_rho = mu.coords;
  for (int i = 0; i < mu_rho.size(); ++i) mu_rho(i) += Rational(1);
  RationalVector rho = RationalVector::Constant(rd.rank(), Rational(1));
  for (const RootVec& alpha : rd.positive_roots()) {
    num *= rd.bilinear(mu_rho, alpha);
    den *= rd.bilinear(rho, alpha);
  }
  Rational dim = num / den;
  if (!dim.is_integer()) throw DomainError("weyl_dimension: non-integral result");
  return dim.to_long();
}

long weight_multiplicity_oracle(const RootData& rd, const Weight& mu, const RationalVector& weight) {
  // Kostant multiplicity formula: sum over W of sgn(w) P(w(mu+rho) - (weight+rho)).
  const int r = rd.rank();
  RationalVector mu_rho = mu.coords;
  for (int i = 0; i < r; ++i) mu_rho(i) += Rational(1);
  RationalVector nu_rho = weight;
  for (int i = 0; i < r; ++i) nu_rho(i) += Rational(1);
  long total = 0;
  for (const auto& [w, sign] : enumerate_weyl_group(rd)) {
    RationalVector arg_fund = w * mu_rho - nu_rho;
    RationalVector arg_root = rd.simple_coordinates(arg_fund);
    RootVec beta(r);
    bool ok = true;
    for (int i = 0; i < r; ++i) {
      if (!arg_root(i).is_integer() || arg_root(i).sign() < 0) {
        ok = false;
        break;
      }
      beta[i] = static_cast<int>(arg_root(i).to_long());
    }
    if (!ok) continue;
    total += sign * rd.kostant_partition(beta);
  }
  return total;
}

}  // namespace qfa
