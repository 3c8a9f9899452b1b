#pragma once

#include <map>
#include <string>
#include <vector>

#include "qfa/algebra.hpp"

namespace qfa {

// Shapovalov data of one graded slice: the Gram matrix of S_lambda on
// U^-[-beta] in the canonical word basis, its kernel, the deterministic
// complement (lex-least column basis of the Gram matrix), and the exact
// inverse of the quotient form on that complement.
struct GramBlock {
  Weight lambda;
  RootVec beta;
  ScalarMatrix matrix;
  std::vector<ScalarVector> kernel_basis;  // empty for family weights
  std::vector<int> complement_tags;        // indices into basis(beta).words
  ScalarMatrix inv_quotient;               // inverse of matrix[tags, tags]

  int dim() const { return static_cast<int>(matrix.rows()); }
};

// Shapovalov forms, kernels and generation experiments on top of a Session.
class ShapovalovContext {
public:
  explicit ShapovalovContext(const Session& session) : session_(&session) {}

  const Session& session() const { return *session_; }

  // pi_lambda(x (x) y) = q^lambda((sigma(x) y)_0) for x in U^+, y in U^-.
  Scalar pairing_pi(const Weight& lambda, const AlgebraElement& x, const AlgebraElement& y) const;

  // S_lambda(x (x) y) = q^lambda((omega(x) y)_0) on U^-.
  Scalar form(const Weight& lambda, const AlgebraElement& x, const AlgebraElement& y) const;

  // Gram block of S_lambda on U^-[-beta]. For fixed weights the kernel and
  // the complement inverse are computed; for family weights the kernel is
  // refused (rank can jump along the line) and the full generic-fiber
  // inverse is stored in inv_quotient with all words as tags.
  const GramBlock& gram_block(const Weight& lambda, const RootVec& beta) const;

  // Basis of K_lambda[-beta] as elements of U^-.
  std::vector<AlgebraElement> kernel_block(const Weight& lambda, const RootVec& beta) const;

  // theta of the kernel basis: K~_lambda[beta] in U^+.
  std::vector<AlgebraElement> kernel_block_pos(const Weight& lambda, const RootVec& beta) const;

  struct GenerationRow {
    RootVec beta;
    int kernel_dim = 0;
    int ideal_dim = 0;
    bool ideal_in_kernel = false;
    bool kernel_in_ideal = false;
    std::string verdict() const;
  };
  struct GenerationReport {
    std::vector<GenerationRow> rows;
    // Generators that are not themselves in the kernel at their own degree
    // (catches a wrong generator-degree reading).
    std::vector<std::string> generator_warnings;
    bool all_equal() const;
  };

  // Compares K_lambda[-beta] with sum_g U^-[-beta+deg g] g for ht beta <= N.
  GenerationReport kernel_generation_check(const Weight& lambda, const std::vector<AlgebraElement>& gens,
                                           int max_height) const;

  // K_{lambda1}[-beta] subset of K_{lambda2}[-beta] for all ht beta <= N.
  bool kernel_included(const Weight& lambda1, const Weight& lambda2, int max_height) const;

private:
  // (omega(y_i) y_j)_0 as a U^0 element, cached per word pair; the Gram
  // entry for any weight is its q^lambda evaluation.
  const AlgebraElement& pairing_u0(const Word& wi, const Word& wj) const;

  const Session* session_;
  mutable std::mutex mutex_;
  mutable std::map<std::pair<Word, Word>, std::unique_ptr<AlgebraElement>> u0_cache_;
  mutable std::map<std::pair<std::string, RootVec>, std::unique_ptr<GramBlock>> gram_cache_;
};

}  // namespace qfa
