#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "qfa/funcalg.hpp"

namespace qfa {

// Graded block data of a reduced fusion element truncated at a height: per
// beta, the chosen complement words (tags into basis(beta).words) and the
// exact inverse of the quotient Gram block. For a family weight the blocks
// are full Gram inverses over k(z) and tags enumerate every word.
struct FusionBlock {
  std::vector<int> tags;
  ScalarMatrix inv;
};

struct FusionElement {
  Weight lambda;
  int max_height = 0;
  bool family = false;
  std::map<RootVec, FusionBlock, QPlusLess> blocks;  // includes beta = 0
};

// Expansion of Theta^{-1}(f) on a carrier: the coefficients f^{beta,i}, the
// assembled singular vector xi in (truncated L(lambda)) (x) F_V, and the
// verification outcomes.
struct ThetaExpansion {
  std::map<std::pair<RootVec, int>, FunctionElement> coefficients;
  std::vector<FunctionElement> xi;  // indexed by the flat basis of `module`
  std::shared_ptr<WeightModule> module;
  bool beta0_is_input = false;
  bool singular_ok = false;
  int checked_height = 0;
};

struct RegularityRow {
  int phi = 0;
  int vec = 0;
  int max_pole = 0;
  bool limit_matches = false;
  bool pass() const { return max_pole <= 0 && limit_matches; }
};

struct RegularityReport {
  std::vector<RegularityRow> rows;
  bool simple_pole_bound_ok = true;  // no block entry exceeds a simple pole
  bool has_control = false;
  int control_phi = 0;
  int control_vec = 0;
  int control_pole = 0;
  bool all_pass() const;
  void print(std::ostream& os) const;
};

struct KostantRow {
  int phi = 0;
  int vec = 0;
  bool pole_free = false;
  bool singular = false;
  bool round_trip = false;
  bool pass() const { return pole_free && singular && round_trip; }
};

struct KostantReport {
  std::vector<KostantRow> rows;
  bool vacuous() const { return rows.empty(); }
  bool all_pass() const;
  void print(std::ostream& os) const;
};

// Reduced fusion elements, star products, and the limiting-behavior probes.
class FusionContext {
public:
  FusionContext(const ShapovalovContext& shap, CarrierRegistry& registry)
      : shap_(&shap), registry_(&registry) {}

  const Session& session() const { return shap_->session(); }
  const ShapovalovContext& shapovalov() const { return *shap_; }
  CarrierRegistry& registry() const { return *registry_; }

  // J^red(lambda) truncated at height N (fixed weight).
  FusionElement fusion_reduced(const Weight& lambda, int max_height) const;

  // Family J(lambda0 + t nu) over k(z); the weight must carry a direction
  // and the line must be generic for generic t.
  FusionElement fusion_family(const Weight& lambda_family, int max_height) const;

  // f1 *_lambda f2 via the reduced fusion element; the block range is
  // derived from the carriers (the sum is exact), membership of both
  // factors in the invariant subspace is checked, not assumed.
  FunctionElement star(const Weight& lambda, const FunctionElement& f1, const FunctionElement& f2) const;

  // Star against explicitly supplied blocks (used for family stars, the
  // representative-independence experiment, and the beta = 0 check).
  FunctionElement star_with(const FusionElement& fusion, const FunctionElement& f1,
                            const FunctionElement& f2) const;

  // Replaces one block's complement choice; throws unless the new tags
  // index an invertible Gram minor.
  FusionElement with_block_tags(const FusionElement& fusion, const RootVec& beta,
                                std::vector<int> tags) const;

  ThetaExpansion theta_coefficients(const Weight& lambda, const FunctionElement& f, int max_height) const;

  RegularityReport regularity_probe(const Weight& lambda_family, const Carrier& carrier) const;

  KostantReport kostant_probe(const Weight& lambda_family, const Carrier& carrier) const;

private:
  void check_member(const Weight& lambda, const FunctionElement& f, const char* which) const;

  const ShapovalovContext* shap_;
  CarrierRegistry* registry_;
};

}  // namespace qfa
