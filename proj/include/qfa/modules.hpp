#pragma once

#include <map>
#include <optional>
#include <vector>

#include "qfa/shapovalov.hpp"

namespace qfa {

// Fundamental coordinates of an element of the root lattice.
RationalVector root_to_fundamental(const RootData& rd, const RootVec& beta);

// Highest-weight module with explicit per-layer bases and exact generator
// matrices: a Verma module truncated at a height bound, its irreducible
// quotient (layer bases are the deterministic Gram complements), or the
// full finite-dimensional module of a dominant integral weight.
class WeightModule {
public:
  enum class Kind { verma, irreducible_truncated, finite_dim };

  struct Layer {
    RootVec beta;
    std::vector<int> tags;  // indices into basis(beta).words
    int offset = 0;         // position of the layer in the flat basis
  };

  static WeightModule verma(const ShapovalovContext& shap, const Weight& lambda, int max_height);
  static WeightModule irreducible(const ShapovalovContext& shap, const Weight& lambda, int max_height);
  static WeightModule finite_dim(const ShapovalovContext& shap, const Weight& mu);

  Kind kind() const { return kind_; }
  const Weight& highest_weight() const { return highest_; }
  const Session& session() const { return *session_; }
  int depth() const { return depth_; }
  int dim() const { return dim_; }

  const std::vector<Layer>& layers() const { return layers_; }
  const Layer* layer_of(const RootVec& beta) const;
  int dim_at(const RootVec& beta) const;

  // Flat-basis generator matrices (dim x dim).
  const ScalarMatrix& mat_f(int i) const { return mat_f_[i]; }
  const ScalarMatrix& mat_e(int i) const { return mat_e_[i]; }

  // Weight of a flat basis vector, in fundamental coordinates.
  const RationalVector& weight_of(int index) const { return weights_[index]; }

  // q^{weight}(t^m) for a flat basis vector.
  Scalar t_eigenvalue(int index, const std::vector<int>& m) const;

  // Matrix of an arbitrary normal-form element (words act by matrix
  // products, the torus part by exact weight eigenvalues).
  ScalarMatrix matrix_of(const AlgebraElement& x) const;

  // Basis of { v of the given weight : e_i v = 0 for all i }.
  std::vector<ScalarVector> singular_vectors(const RationalVector& target_weight) const;

  // Projection of a Verma layer coordinate vector (over the full word
  // basis of beta) onto this module's layer; identity for Verma modules.
  ScalarVector project_layer(const RootVec& beta, const ScalarVector& full_coords) const;

private:
  WeightModule() = default;
  static WeightModule build(const ShapovalovContext& shap, const Weight& lambda, int max_height, Kind kind);

  Kind kind_ = Kind::verma;
  Weight highest_;
  const Session* session_ = nullptr;
  int depth_ = 0;
  int dim_ = 0;
  std::vector<Layer> layers_;
  std::map<RootVec, int, QPlusLess> layer_index_;
  std::vector<ScalarMatrix> mat_f_;
  std::vector<ScalarMatrix> mat_e_;
  std::vector<RationalVector> weights_;
  // Per layer: rewrite of full word coordinates into tagged coordinates
  // modulo the kernel (trivial for Verma layers).
  std::map<RootVec, ScalarMatrix, QPlusLess> projections_;
};

// Independent character oracles (Weyl dimension formula and the Kostant
// multiplicity formula over an enumerated Weyl group); used by tests and
// the acceptance suite, never by module construction itself.
long weyl_dimension(const RootData& rd, const Weight& mu);
long weight_multiplicity_oracle(const RootData& rd, const Weight& mu, const RationalVector& weight);

// All elements of the Weyl group as (matrix on fundamental coordinates,
// sign) pairs, by closure from the simple reflections.
std::vector<std::pair<RationalMatrix, int>> enumerate_weyl_group(const RootData& rd);

}  // namespace qfa
