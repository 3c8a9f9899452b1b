#include "qfa/shapovalov.hpp"

#include <sstream>

#include "qfa/errors.hpp"
#include "qfa/linalg.hpp"

namespace qfa {

Scalar ShapovalovContext::pairing_pi(const Weight& lambda, const AlgebraElement& x,
                                     const AlgebraElement& y) const {
  session_->validate_weight(lambda);
  return (x.antipode() * y).zero_part().qchar(lambda);
}

Scalar ShapovalovContext::form(const Weight& lambda, const AlgebraElement& x, const AlgebraElement& y) const {
  session_->validate_weight(lambda);
  return (x.omega() * y).zero_part().qchar(lambda);
}

const AlgebraElement& ShapovalovContext::pairing_u0(const Word& wi, const Word& wj) const {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = u0_cache_.find({wi, wj});
    if (it != u0_cache_.end()) return *it->second;
  }
  AlgebraElement yi = session_->from_neg_word(wi);
  AlgebraElement yj = session_->from_neg_word(wj);
  auto value = std::make_unique<AlgebraElement>((yi.omega() * yj).zero_part());
  std::lock_guard<std::mutex> lock(mutex_);
  auto [it, inserted] = u0_cache_.emplace(std::make_pair(wi, wj), std::move(value));
  return *it->second;
}

const GramBlock& ShapovalovContext::gram_block(const Weight& lambda, const RootVec& beta) const {
  std::string key = lambda.str();
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = gram_cache_.find({key, beta});
    if (it != gram_cache_.end()) return *it->second;
  }
  const GradedBasis& gb = session_->basis(beta);
  const int n = gb.dim();
  auto block = std::make_unique<GramBlock>();
  block->lambda = lambda;
  block->beta = beta;
  block->matrix = ScalarMatrix(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) block->matrix(i, j) = pairing_u0(gb.words[i], gb.words[j]).qchar(lambda);

  if (lambda.has_direction()) {
    // Generic fiber over k(z): full inverse, no kernel extraction.
    block->complement_tags.resize(n);
    for (int i = 0; i < n; ++i) block->complement_tags[i] = i;
    block->inv_quotient = invert<Scalar>(block->matrix);
  } else {
    ScalarMatrix work = block->matrix;
    std::vector<int> pivots = rref_in_place(work);
    block->complement_tags = pivots;
    // Null vectors from the reduced echelon form, one per free column.
    std::vector<bool> is_pivot(n, false);
    for (int c : pivots) is_pivot[c] = true;
    for (int fcol = 0; fcol < n; ++fcol) {
      if (is_pivot[fcol]) continue;
      ScalarVector v = ScalarVector::Constant(n, Scalar(0));
      v(fcol) = Scalar(1);
      for (size_t p = 0; p < pivots.size(); ++p) v(pivots[p]) = -work(static_cast<int>(p), fcol);
      block->kernel_basis.push_back(std::move(v));
    }
    const int m = static_cast<int>(pivots.size());
    ScalarMatrix quotient(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) quotient(i, j) = block->matrix(pivots[i], pivots[j]);
    block->inv_quotient = invert<Scalar>(quotient);
  }

  std::lock_guard<std::mutex> lock(mutex_);
  auto [it, inserted] = gram_cache_.emplace(std::make_pair(key, beta), std::move(block));
  return *it->second;
}

std::vector<AlgebraElement> ShapovalovContext::kernel_block(const Weight& lambda, const RootVec& beta) const {
  if (lambda.has_direction()) throw DomainError("kernel_block: refused for family weights (rank can jump)");
  const GramBlock& block = gram_block(lambda, beta);
  std::vector<AlgebraElement> out;
  for (const ScalarVector& v : block.kernel_basis) out.push_back(session_->from_neg_coords(beta, v));
  return out;
}

std::vector<AlgebraElement> ShapovalovContext::kernel_block_pos(const Weight& lambda, const RootVec& beta) const {
  std::vector<AlgebraElement> out;
  for (const AlgebraElement& y : kernel_block(lambda, beta)) out.push_back(y.theta());
  return out;
}

std::string ShapovalovContext::GenerationRow::verdict() const {
  if (ideal_in_kernel && kernel_in_ideal) return "equal";
  if (ideal_in_kernel) return "ideal-strictly-inside-kernel";
  if (kernel_in_ideal) return "kernel-strictly-inside-ideal";
  return "incomparable";
}

bool ShapovalovContext::GenerationReport::all_equal() const {
  for (const auto& row : rows)
    if (!(row.ideal_in_kernel && row.kernel_in_ideal)) return false;
  return true;
}

ShapovalovContext::GenerationReport ShapovalovContext::kernel_generation_check(
    const Weight& lambda, const std::vector<AlgebraElement>& gens, int max_height) const {
  GenerationReport report;
  const int r = session_->rank();
  // Degree bookkeeping for the generators; they must be homogeneous in U^-.
  std::vector<std::pair<RootVec, AlgebraElement>> graded_gens;
  for (size_t gi = 0; gi < gens.size(); ++gi) {
    const AlgebraElement& g = gens[gi];
    if (g.is_zero()) continue;
    if (!g.in_u_minus()) throw DomainError("kernel_generation_check: generator not in U^-");
    auto wt = g.weight();
    if (!wt) throw DomainError("kernel_generation_check: generator not homogeneous");
    RootVec deg(r);
    for (int l = 0; l < r; ++l) deg[l] = -(*wt)[l];
    graded_gens.emplace_back(deg, g);
    // Membership of the generator itself in K_lambda at its own degree.
    const GramBlock& block = gram_block(lambda, deg);
    ScalarVector coords = ScalarVector::Constant(block.dim(), Scalar(0));
    const GradedBasis& gb = session_->basis(deg);
    for (const auto& [key, c] : g.terms()) coords(gb.index_of(key.f)) += c;
    if (!is_zero_vector<Scalar>((block.matrix * coords).eval())) {
      std::ostringstream os;
      os << "generator #" << gi + 1 << " of degree (" << root_str(deg) << ") is not in K_lambda";
      report.generator_warnings.push_back(os.str());
    }
  }

  for (const RootVec& beta : session_->roots().enumerate_qplus(max_height)) {
    GenerationRow row;
    row.beta = beta;
    const GradedBasis& gb = session_->basis(beta);
    const GramBlock& block = gram_block(lambda, beta);
    std::vector<ScalarVector> kernel = block.kernel_basis;
    row.kernel_dim = static_cast<int>(kernel.size());

    // Left ideal slice: words of complementary degree times each generator.
    std::vector<ScalarVector> ideal;
    for (const auto& [deg, g] : graded_gens) {
      RootVec comp(r);
      bool fits = true;
      for (int l = 0; l < r; ++l) {
        comp[l] = beta[l] - deg[l];
        if (comp[l] < 0) fits = false;
      }
      if (!fits) continue;
      for (const Word& w : session_->basis(comp).words) {
        AlgebraElement prod = session_->from_neg_word(w) * g;
        ScalarVector coords = ScalarVector::Constant(gb.dim(), Scalar(0));
        for (const auto& [key, c] : prod.terms()) coords(gb.index_of(key.f)) += c;
        ideal.push_back(std::move(coords));
      }
    }
    {
      DenseMatrix<Scalar> im(ideal.size(), gb.dim());
      for (size_t i = 0; i < ideal.size(); ++i) im.row(i) = ideal[i].transpose();
      row.ideal_dim = ideal.empty() ? 0 : rank_of(std::move(im));
    }
    row.ideal_in_kernel = span_contains(kernel, ideal, gb.dim());
    row.kernel_in_ideal = span_contains(ideal, kernel, gb.dim());
    report.rows.push_back(std::move(row));
  }
  return report;
}

bool ShapovalovContext::kernel_included(const Weight& lambda1, const Weight& lambda2, int max_height) const {
  for (const RootVec& beta : session_->roots().enumerate_qplus(max_height)) {
    const GramBlock& b1 = gram_block(lambda1, beta);
    const GramBlock& b2 = gram_block(lambda2, beta);
    if (!span_contains(b2.kernel_basis, b1.kernel_basis, b1.dim())) return false;
  }
  return true;
}

}  // namespace qfa
