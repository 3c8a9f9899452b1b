#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "qfa/modules.hpp"

namespace qfa {

class CarrierRegistry;

// A registered carrier of matrix coefficients: a flattened tensor product
// of finite-dimensional modules (possibly empty, the trivial carrier), with
// cached coproduct-action matrices. Flattening makes tensor formation
// strictly associative, so products of fixed inputs always land on one
// carrier and equality of function elements is well defined.
class Carrier {
public:
  const std::string& id() const { return id_; }
  int dim() const { return dim_; }
  int depth() const { return depth_; }
  int factor_count() const { return static_cast<int>(factors_.size()); }
  const Session& session() const { return *session_; }

  const RationalVector& weight_of(int index) const { return weights_[index]; }
  const ScalarMatrix& mat_e(int i) const { return mat_e_[i]; }
  const ScalarMatrix& mat_f(int i) const { return mat_f_[i]; }
  Scalar t_eigenvalue(int index, const std::vector<int>& m) const;

  // Matrix of a normal-form algebra element under the flattened coproduct
  // action; single f/e words are cached.
  ScalarMatrix matrix_of(const AlgebraElement& x) const;
  const ScalarMatrix& word_matrix(bool positive, const Word& w) const;

  // Basis of { v : e_i v = 0 } of the given weight.
  std::vector<ScalarVector> singular_vectors(const RationalVector& target_weight) const;

private:
  friend class CarrierRegistry;
  std::string id_;
  std::vector<const WeightModule*> factors_;
  const Session* session_ = nullptr;
  int dim_ = 1;
  int depth_ = 0;
  std::vector<RationalVector> weights_;
  std::vector<ScalarMatrix> mat_e_;
  std::vector<ScalarMatrix> mat_f_;
  mutable std::mutex mutex_;
  mutable std::map<std::pair<bool, Word>, std::unique_ptr<ScalarMatrix>> word_cache_;
};

// Element of the quantized function algebra F presented on one carrier:
// a linear combination of matrix-coefficient atoms c_{phi_j, v_k}.
class FunctionElement {
public:
  FunctionElement() : carrier_(nullptr) {}
  explicit FunctionElement(const Carrier* c) : carrier_(c) {}

  const Carrier* carrier() const { return carrier_; }
  const std::map<std::pair<int, int>, Scalar>& atoms() const { return atoms_; }
  bool is_zero() const { return atoms_.empty(); }

  void add_atom(int phi, int vec, const Scalar& c);

  FunctionElement operator-() const;
  FunctionElement& operator+=(const FunctionElement& o);
  FunctionElement& operator-=(const FunctionElement& o);
  friend FunctionElement operator+(FunctionElement a, const FunctionElement& b) { return a += b; }
  friend FunctionElement operator-(FunctionElement a, const FunctionElement& b) { return a -= b; }
  FunctionElement scaled(const Scalar& c) const;
  friend bool operator==(const FunctionElement& a, const FunctionElement& b);
  friend bool operator!=(const FunctionElement& a, const FunctionElement& b) { return !(a == b); }

  // (-> a f)(x) = f(x a): the algebra acts on the vector leg.
  FunctionElement arrow(const AlgebraElement& a) const;
  FunctionElement arrow_word(bool positive, const Word& w) const;

  // (f <- a)(x) = f(a x): the algebra acts on the covector leg.
  FunctionElement coarrow(const AlgebraElement& a) const;

  // f(x) for a normal-form element x.
  Scalar evaluate(const AlgebraElement& x) const;

  // Weight under the -> action (weight of the vector leg); nullopt when
  // atoms mix weights.
  std::optional<RationalVector> arrow_weight() const;

  // Atomwise z = 1 limit; throws PoleAtOne on a genuine pole.
  FunctionElement eval_z_one() const;
  int max_pole_order() const;  // 0 for the zero element

  std::string str() const;

private:
  const Carrier* carrier_;
  std::map<std::pair<int, int>, Scalar> atoms_;
};

// Registry of carriers: base finite-dimensional modules and their flattened
// tensor products, compute-once.
class CarrierRegistry {
public:
  explicit CarrierRegistry(const ShapovalovContext& shap) : shap_(&shap) {}

  const ShapovalovContext& shapovalov() const { return *shap_; }
  const Session& session() const { return shap_->session(); }

  const Carrier& trivial();
  const Carrier& finite_dim(const Weight& mu);
  const Carrier& tensor(const Carrier& a, const Carrier& b);
  const Carrier* find(const std::string& id) const;

  // Matrix coefficient c_{phi, v} with a basis covector and a coefficient
  // vector on the module leg.
  FunctionElement matrix_coefficient(const Carrier& c, int phi, int vec) const;
  FunctionElement matrix_coefficient(const Carrier& c, int phi, const ScalarVector& vec) const;
  FunctionElement unit();

  // Product f1 f2 on the flattened tensor carrier; evaluation satisfies
  // (f1 f2)(x) = sum f1(x_(1)) f2(x_(2)).
  FunctionElement product(const FunctionElement& f1, const FunctionElement& f2);

  enum class KernelSide { lower, upper, both };

  // Basis of { v in V[0] : K_lambda v = 0 (lower), K~_lambda v = 0 (upper),
  // or both }, kernel blocks taken up to the carrier depth.
  std::vector<ScalarVector> invariant_vectors(const Weight& lambda, const Carrier& c, KernelSide side) const;

  // Ordered basis of the invariant subspace: all covectors tensor the
  // invariant zero-weight vectors.
  std::vector<FunctionElement> invariant_subspace(const Weight& lambda, const Carrier& c) const;

  // Membership check used as the star-product precondition.
  bool in_invariant_subspace(const Weight& lambda, const FunctionElement& f) const;

private:
  const Carrier& intern(std::vector<const WeightModule*> factors);

  const ShapovalovContext* shap_;
  std::map<std::string, std::unique_ptr<WeightModule>> modules_;
  std::map<std::string, std::unique_ptr<Carrier>> carriers_;
};

}  // namespace qfa
