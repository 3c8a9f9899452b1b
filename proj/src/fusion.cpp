#include "qfa/fusion.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

#include "qfa/errors.hpp"
#include "qfa/linalg.hpp"

namespace qfa {

bool RegularityReport::all_pass() const {
  if (!simple_pole_bound_ok) return false;
  for (const auto& row : rows)
    if (!row.pass()) return false;
  return true;
}

void RegularityReport::print(std::ostream& os) const {
  for (const auto& row : rows) {
    os << "row phi=" << row.phi << " vec=" << row.vec << " max_pole=" << row.max_pole
       << " limit=" << (row.limit_matches ? "match" : "MISMATCH") << " "
       << (row.pass() ? "PASS" : "FAIL") << "\n";
  }
  if (has_control)
    os << "control phi=" << control_phi << " vec=" << control_vec << " pole_order=" << control_pole << "\n";
  else
    os << "control n/a (no kernel constraints at this weight)\n";
  os << "simple-pole bound: " << (simple_pole_bound_ok ? "ok" : "VIOLATED") << "\n";
  os << (all_pass() ? "PASS" : "FAIL") << "\n";
}

bool KostantReport::all_pass() const {
  for (const auto& row : rows)
    if (!row.pass()) return false;
  return true;
}

void KostantReport::print(std::ostream& os) const {
  for (const auto& row : rows) {
    os << "lift phi=" << row.phi << " vec=" << row.vec << " pole_free=" << (row.pole_free ? "yes" : "NO")
       << " singular=" << (row.singular ? "yes" : "NO") << " round_trip=" << (row.round_trip ? "yes" : "NO")
       << " " << (row.pass() ? "PASS" : "FAIL") << "\n";
  }
  if (vacuous()) os << "invariant space is zero: vacuous PASS\n";
  os << (all_pass() ? "PASS" : "FAIL") << "\n";
}

FusionElement FusionContext::fusion_reduced(const Weight& lambda, int max_height) const {
  if (lambda.has_direction()) throw DomainError("fusion_reduced: family weights go through fusion_family");
  session().validate_weight(lambda);
  FusionElement out;
  out.lambda = lambda;
  out.max_height = max_height;
  out.family = false;
  const int r = session().rank();
  std::vector<RootVec> betas;
  betas.push_back(RootVec(r, 0));
  for (const RootVec& beta : session().roots().enumerate_qplus(max_height)) betas.push_back(beta);
  for (const RootVec& beta : betas) {
    const GramBlock& block = shap_->gram_block(lambda, beta);
    out.blocks.emplace(beta, FusionBlock{block.complement_tags, block.inv_quotient});
  }
  return out;
}

FusionElement FusionContext::fusion_family(const Weight& lambda_family, int max_height) const {
  if (!lambda_family.has_direction()) throw DomainError("fusion_family: weight carries no direction");
  session().validate_weight(lambda_family);
  // The line lambda0 + t nu must be generic for generic t: every positive
  // root either moves along the line or is off its integrality hyperplanes.
  const RootData& rd = session().roots();
  Weight base = lambda_family.base();
  for (const RootVec& beta : rd.positive_roots()) {
    Rational dn = rd.pair_coroot(*lambda_family.direction, beta);
    if (dn.is_zero()) {
      Rational pairing = rd.pair_coroot_shifted(base, beta);
      if (pairing.is_integer() && pairing.sign() > 0)
        throw DomainError("fusion_family: line lies inside the degeneracy locus of root (" + root_str(beta) +
                          ")");
    }
  }
  FusionElement out;
  out.lambda = lambda_family;
  out.max_height = max_height;
  out.family = true;
  const int r = session().rank();
  std::vector<RootVec> betas;
  betas.push_back(RootVec(r, 0));
  for (const RootVec& beta : rd.enumerate_qplus(max_height)) betas.push_back(beta);
  for (const RootVec& beta : betas) {
    const GramBlock& block = shap_->gram_block(lambda_family, beta);
    out.blocks.emplace(beta, FusionBlock{block.complement_tags, block.inv_quotient});
  }
  return out;
}

void FusionContext::check_member(const Weight& lambda, const FunctionElement& f, const char* which) const {
  if (!registry_->in_invariant_subspace(lambda, f))
    throw DomainError(std::string("star: ") + which + " is not in the invariant subspace at lambda = " +
                      lambda.str());
}

FunctionElement FusionContext::star(const Weight& lambda, const FunctionElement& f1,
                                    const FunctionElement& f2) const {
  check_member(lambda, f1, "left factor");
  check_member(lambda, f2, "right factor");
  if (f1.is_zero() || f2.is_zero()) return registry_->product(f1, f2);
  int n_blocks = std::min(f1.carrier()->depth(), f2.carrier()->depth());
  return star_with(fusion_reduced(lambda, n_blocks), f1, f2);
}

FunctionElement FusionContext::star_with(const FusionElement& fusion, const FunctionElement& f1,
                                         const FunctionElement& f2) const {
  if (f1.is_zero() || f2.is_zero()) return registry_->product(f1, f2);
  const Session& s = session();
  int reach = std::min(f1.carrier()->depth(), f2.carrier()->depth());
  FunctionElement out = registry_->product(f1, f2).scaled(Scalar(0));
  for (const auto& [beta, block] : fusion.blocks) {
    if (height(beta) > reach) continue;
    const GradedBasis& gb = s.basis(beta);
    const int m = static_cast<int>(block.tags.size());
    if (m == 0) continue;
    Scalar sign((height(beta) % 2 == 0) ? 1 : -1);
    std::vector<FunctionElement> lhs(m), rhs(m);
    for (int i = 0; i < m; ++i) {
      lhs[i] = f1.arrow_word(false, gb.words[block.tags[i]]);
      rhs[i] = f2.arrow_word(true, gb.words[block.tags[i]]).scaled(sign);
    }
    for (int i = 0; i < m; ++i) {
      if (lhs[i].is_zero()) continue;
      for (int j = 0; j < m; ++j) {
        if (block.inv(i, j).is_zero() || rhs[j].is_zero()) continue;
        out += registry_->product(lhs[i], rhs[j]).scaled(block.inv(i, j));
      }
    }
  }
  return out;
}

FusionElement FusionContext::with_block_tags(const FusionElement& fusion, const RootVec& beta,
                                             std::vector<int> tags) const {
  auto it = fusion.blocks.find(beta);
  if (it == fusion.blocks.end()) throw DomainError("with_block_tags: no block at this degree");
  const GramBlock& gram = shap_->gram_block(fusion.lambda, beta);
  const int m = static_cast<int>(tags.size());
  if (m != static_cast<int>(it->second.tags.size()))
    throw DomainError("with_block_tags: complement size mismatch");
  ScalarMatrix minor(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) minor(i, j) = gram.matrix(tags[i], tags[j]);
  FusionElement out = fusion;
  out.blocks[beta] = FusionBlock{std::move(tags), invert<Scalar>(minor)};
  return out;
}

ThetaExpansion FusionContext::theta_coefficients(const Weight& lambda, const FunctionElement& f,
                                                 int max_height) const {
  check_member(lambda, f, "input");
  ThetaExpansion out;
  if (f.is_zero()) {
    out.beta0_is_input = true;
    out.singular_ok = true;
    return out;
  }
  const Carrier& carrier = *f.carrier();
  const Session& s = session();
  const int r = s.rank();
  const int needed = carrier.depth();
  out.checked_height = std::max(max_height, needed);

  FusionElement fusion = fusion_reduced(lambda, needed);
  out.module = std::make_shared<WeightModule>(WeightModule::irreducible(*shap_, lambda, needed));
  out.xi.assign(out.module->dim(), FunctionElement(&carrier));

  for (const auto& [beta, block] : fusion.blocks) {
    const GradedBasis& gb = s.basis(beta);
    const int m = static_cast<int>(block.tags.size());
    Scalar sign((height(beta) % 2 == 0) ? 1 : -1);
    std::vector<FunctionElement> arrows(m);
    for (int j = 0; j < m; ++j) arrows[j] = f.arrow_word(true, gb.words[block.tags[j]]).scaled(sign);
    const WeightModule::Layer* layer = out.module->layer_of(beta);
    for (int i = 0; i < m; ++i) {
      FunctionElement coeff(&carrier);
      for (int j = 0; j < m; ++j) {
        if (block.inv(i, j).is_zero() || arrows[j].is_zero()) continue;
        coeff += arrows[j].scaled(block.inv(i, j));
      }
      out.coefficients.emplace(std::make_pair(beta, i), coeff);
      // The irreducible module's layer tags coincide with the block tags
      // (both are the deterministic Gram complement).
      if (layer) out.xi[layer->offset + i] = coeff;
    }
  }

  // Remark-1 check: the beta = 0 coefficient is the input itself.
  auto it0 = out.coefficients.find(std::make_pair(RootVec(r, 0), 0));
  out.beta0_is_input = (it0 != out.coefficients.end() && it0->second == f);

  // Singularity: (e_i (x) 1 + k_i (x) e_i) xi = 0 on every flat component.
  out.singular_ok = true;
  const WeightModule& mod = *out.module;
  for (int i = 0; i < r && out.singular_ok; ++i) {
    std::vector<int> klat = s.k_lattice(i);
    for (int b = 0; b < mod.dim() && out.singular_ok; ++b) {
      FunctionElement total(&carrier);
      for (int bp = 0; bp < mod.dim(); ++bp) {
        const Scalar& entry = mod.mat_e(i)(b, bp);
        if (!entry.is_zero()) total += out.xi[bp].scaled(entry);
      }
      total += out.xi[b].arrow(s.e(i)).scaled(mod.t_eigenvalue(b, klat));
      if (!total.is_zero()) out.singular_ok = false;
    }
  }
  return out;
}

RegularityReport FusionContext::regularity_probe(const Weight& lambda_family, const Carrier& carrier) const {
  if (!lambda_family.has_direction()) throw DomainError("regularity_probe: weight carries no direction");
  const Session& s = session();
  Weight lambda0 = lambda_family.base();
  const int reach = carrier.depth();
  FusionElement fam = fusion_family(lambda_family, reach);
  FusionElement red = fusion_reduced(lambda0, reach);

  RegularityReport report;
  for (const auto& [beta, block] : fam.blocks)
    for (int i = 0; i < block.inv.rows(); ++i)
      for (int j = 0; j < block.inv.cols(); ++j)
        if (!block.inv(i, j).is_zero() && block.inv(i, j).pole_order_at_one() > 1)
          report.simple_pole_bound_ok = false;

  std::vector<ScalarVector> invariant = registry_->invariant_vectors(lambda0, carrier,
                                                                     CarrierRegistry::KernelSide::lower);

  using PairKey = std::pair<std::pair<int, int>, std::pair<int, int>>;
  auto apply = [&](const FusionElement& fusion, const FunctionElement& fe, const FunctionElement& g,
                   std::map<PairKey, Scalar>& into) {
    for (const auto& [beta, block] : fusion.blocks) {
      if (height(beta) > reach) continue;
      const GradedBasis& gb = s.basis(beta);
      const int m = static_cast<int>(block.tags.size());
      if (m == 0) continue;
      Scalar sign((height(beta) % 2 == 0) ? 1 : -1);
      std::vector<FunctionElement> lhs(m), rhs(m);
      for (int i = 0; i < m; ++i) {
        lhs[i] = fe.arrow_word(false, gb.words[block.tags[i]]);
        rhs[i] = g.arrow_word(true, gb.words[block.tags[i]]).scaled(sign);
      }
      for (int i = 0; i < m; ++i) {
        if (lhs[i].is_zero()) continue;
        for (int j = 0; j < m; ++j) {
          if (block.inv(i, j).is_zero() || rhs[j].is_zero()) continue;
          for (const auto& [a1, c1] : lhs[i].atoms())
            for (const auto& [a2, c2] : rhs[j].atoms()) {
              Scalar c = block.inv(i, j) * c1 * c2;
              if (c.is_zero()) continue;
              auto [it, inserted] = into.emplace(PairKey{a1, a2}, c);
              if (!inserted) {
                it->second += c;
                if (it->second.is_zero()) into.erase(it);
              }
            }
        }
      }
    }
  };

  // Pole scan: the second leg ranges over the whole carrier basis (the
  // regularity condition quantifies over arbitrary modules on that side).
  auto scan_poles = [&](const FunctionElement& fe, int& max_pole) {
    max_pole = 0;
    for (int psi = 0; psi < carrier.dim(); ++psi) {
      for (int u = 0; u < carrier.dim(); ++u) {
        FunctionElement g = registry_->matrix_coefficient(carrier, psi, u);
        std::map<PairKey, Scalar> family_pairs;
        apply(fam, fe, g, family_pairs);
        for (const auto& [key, c] : family_pairs) max_pole = std::max(max_pole, c.pole_order_at_one());
      }
    }
  };
  // Limit comparison: the limit identity holds with both legs in the
  // invariant space, so g ranges over the invariant basis here.
  auto check_limits = [&](const FunctionElement& fe, bool& limit_ok) {
    limit_ok = true;
    for (int psi = 0; psi < carrier.dim() && limit_ok; ++psi) {
      for (const ScalarVector& w : invariant) {
        FunctionElement g = registry_->matrix_coefficient(carrier, psi, w);
        std::map<PairKey, Scalar> family_pairs, reduced_pairs;
        apply(fam, fe, g, family_pairs);
        bool pole = false;
        for (const auto& [key, c] : family_pairs)
          if (c.pole_order_at_one() > 0) pole = true;
        if (pole) {
          limit_ok = false;
          break;
        }
        apply(red, fe, g, reduced_pairs);
        std::map<PairKey, Scalar> limit;
        for (const auto& [key, c] : family_pairs) {
          Scalar value = c.eval_z_one();
          if (!value.is_zero()) limit.emplace(key, std::move(value));
        }
        if (limit != reduced_pairs) {
          limit_ok = false;
          break;
        }
      }
    }
  };

  for (const ScalarVector& w : invariant) {
    for (int phi = 0; phi < carrier.dim(); ++phi) {
      FunctionElement fe = registry_->matrix_coefficient(carrier, phi, w);
      RegularityRow row;
      row.phi = phi;
      // Tag the row by the first supported vector index.
      row.vec = fe.atoms().empty() ? -1 : fe.atoms().begin()->first.second;
      scan_poles(fe, row.max_pole);
      if (row.max_pole <= 0) check_limits(fe, row.limit_matches);
      report.rows.push_back(row);
    }
  }

  // Control row: the first module basis vector moved by some kernel element
  // (hence outside the invariant space).
  int control_vec = -1;
  {
    std::vector<ScalarMatrix> kernel_actions;
    for (const RootVec& beta : s.roots().enumerate_qplus(reach))
      for (const AlgebraElement& y : shap_->kernel_block(lambda0, beta))
        kernel_actions.push_back(carrier.matrix_of(y));
    for (int b = 0; b < carrier.dim() && control_vec < 0; ++b) {
      for (const ScalarMatrix& m : kernel_actions) {
        bool moved = false;
        for (int row = 0; row < m.rows(); ++row)
          if (!m(row, b).is_zero()) moved = true;
        if (moved) {
          control_vec = b;
          break;
        }
      }
    }
  }
  if (control_vec >= 0) {
    report.has_control = true;
    report.control_phi = 0;
    report.control_vec = control_vec;
    FunctionElement fe = registry_->matrix_coefficient(carrier, 0, control_vec);
    scan_poles(fe, report.control_pole);
  }
  return report;
}

KostantReport FusionContext::kostant_probe(const Weight& lambda_family, const Carrier& carrier) const {
  if (!lambda_family.has_direction()) throw DomainError("kostant_probe: weight carries no direction");
  RegularityReport regularity = regularity_probe(lambda_family, carrier);
  if (!regularity.all_pass()) {
    std::ostringstream os;
    os << "kostant_probe: regularity probe failed at lambda = " << lambda_family.str() << "\n";
    regularity.print(os);
    throw DomainError(os.str());
  }

  const Session& s = session();
  const int r = s.rank();
  Weight lambda0 = lambda_family.base();
  const int reach = carrier.depth();
  FusionElement fam = fusion_family(lambda_family, reach);
  WeightModule verma = WeightModule::verma(*shap_, lambda0, reach);

  KostantReport report;
  std::vector<ScalarVector> invariant = registry_->invariant_vectors(lambda0, carrier,
                                                                     CarrierRegistry::KernelSide::both);
  for (const ScalarVector& w : invariant) {
    for (int phi = 0; phi < carrier.dim(); ++phi) {
      FunctionElement g = registry_->matrix_coefficient(carrier, phi, w);
      KostantRow row;
      row.phi = phi;
      row.vec = g.atoms().empty() ? -1 : g.atoms().begin()->first.second;

      // Z = lim_{z->1} J(lambda)^{M(lambda)} (1_lambda (x) g), laid out on
      // the flat basis of the truncated Verma module.
      std::vector<FunctionElement> Z(verma.dim(), FunctionElement(&carrier));
      row.pole_free = true;
      for (const auto& [beta, block] : fam.blocks) {
        const WeightModule::Layer* layer = verma.layer_of(beta);
        if (!layer) continue;
        const GradedBasis& gb = s.basis(beta);
        const int m = static_cast<int>(block.tags.size());
        Scalar sign((height(beta) % 2 == 0) ? 1 : -1);
        std::vector<FunctionElement> arrows(m);
        for (int j = 0; j < m; ++j) arrows[j] = g.arrow_word(true, gb.words[block.tags[j]]).scaled(sign);
        for (int i = 0; i < m && row.pole_free; ++i) {
          FunctionElement coeff(&carrier);
          for (int j = 0; j < m; ++j) {
            if (block.inv(i, j).is_zero() || arrows[j].is_zero()) continue;
            coeff += arrows[j].scaled(block.inv(i, j));
          }
          if (coeff.max_pole_order() > 0) {
            row.pole_free = false;
            break;
          }
          Z[layer->offset + i] = coeff.eval_z_one();
        }
        if (!row.pole_free) break;
      }
      if (row.pole_free) {
        // Z must be singular of weight lambda0 in M(lambda0) (x) F_V.
        row.singular = true;
        for (int i = 0; i < r && row.singular; ++i) {
          std::vector<int> klat = s.k_lattice(i);
          for (int b = 0; b < verma.dim() && row.singular; ++b) {
            FunctionElement total(&carrier);
            for (int bp = 0; bp < verma.dim(); ++bp) {
              const Scalar& entry = verma.mat_e(i)(b, bp);
              if (!entry.is_zero()) total += Z[bp].scaled(entry);
            }
            total += Z[b].arrow(s.e(i)).scaled(verma.t_eigenvalue(b, klat));
            if (!total.is_zero()) row.singular = false;
          }
        }
        // Project onto L(lambda0) and read off the Theta-value: the layer-0
        // component survives projection unchanged and must equal g.
        row.round_trip = (Z[0] == g);
      }
      report.rows.push_back(row);
    }
  }
  return report;
}

}  // namespace qfa
