#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qfa/eigen_support.hpp"

namespace qfa {

// Element of Q+ (or a root) in simple-root coordinates.
using RootVec = std::vector<int>;

int height(const RootVec& beta);

// Q+ ordering: height-major, then descending lexicographic on coordinates.
// This is the fixed enumeration order behind every graded computation.
bool qplus_less(const RootVec& a, const RootVec& b);

struct QPlusLess {
  bool operator()(const RootVec& a, const RootVec& b) const { return qplus_less(a, b); }
};

class RootData;

// Weight in fundamental-weight coordinates c_i = <lambda, alpha_i^vee>,
// optionally carrying a line direction nu for families lambda0 + t*nu.
struct Weight {
  RationalVector coords;
  std::optional<RationalVector> direction;

  Weight() = default;
  explicit Weight(RationalVector c) : coords(std::move(c)) {}
  Weight(RationalVector c, RationalVector dir) : coords(std::move(c)), direction(std::move(dir)) {}

  bool has_direction() const { return direction.has_value(); }
  Weight base() const { return Weight(coords); }
  int rank() const { return static_cast<int>(coords.size()); }

  friend bool operator==(const Weight& a, const Weight& b);
  std::string str() const;
};

// Finite-type Cartan datum: symmetrizers, positive roots, rho, the exact
// inverse Cartan matrix, and the pairings everything downstream consumes.
class RootData {
public:
  // Throws DomainError unless A is a symmetrizable Cartan matrix of finite
  // type. d is computed as the minimal positive relatively prime
  // symmetrizers with d_i a_ij = d_j a_ji.
  static RootData init(const std::vector<std::vector<int>>& cartan);

  // Accepts shorthand "A2", "B2", "G2", ... or an explicit matrix in the
  // form "2,-1;-1,2".
  static RootData from_text(const std::string& text);

  int rank() const { return rank_; }
  int cartan(int i, int j) const { return cartan_[i][j]; }
  const std::vector<std::vector<int>>& cartan_matrix() const { return cartan_; }
  int d(int i) const { return d_[i]; }
  const std::vector<int>& symmetrizers() const { return d_; }
  const std::vector<RootVec>& positive_roots() const { return positive_roots_; }
  const RationalMatrix& inverse_cartan() const { return inv_cartan_; }
  Weight rho() const;

  // Minimal root order D = |det A| * lcm(d_i); v = q^{1/D}.
  int minimal_root_order() const { return minimal_root_order_; }

  // (lambda | beta) for lambda in fundamental coordinates, beta in root
  // coordinates, under the normalization (alpha|alpha) = 2 for short roots.
  Rational bilinear(const RationalVector& lambda, const RootVec& beta) const;
  Rational root_norm(const RootVec& beta) const;  // (beta | beta)

  // <lambda, beta^vee> = 2 (lambda|beta) / (beta|beta).
  Rational pair_coroot(const RationalVector& lambda, const RootVec& beta) const;
  Rational pair_coroot(const Weight& lambda, const RootVec& beta) const { return pair_coroot(lambda.coords, beta); }

  // <lambda + rho, beta^vee>.
  Rational pair_coroot_shifted(const Weight& lambda, const RootVec& beta) const;

  // Simple-root coordinates <lambda, u_i> of a weight (exact, via inv A).
  RationalVector simple_coordinates(const RationalVector& fundamental) const;

  // Simple reflection s_i on fundamental coordinates.
  RationalVector reflect(int i, const RationalVector& coords) const;

  // w . lambda = w(lambda + rho) - rho, word applied right-to-left;
  // letters are 0-based simple reflection indices.
  Weight dot_action(const std::vector<int>& word, const Weight& lambda) const;

  // Plain (non-dot) Weyl action of a word.
  RationalVector weyl_action(const std::vector<int>& word, RationalVector coords) const;

  // All beta in Q+ with 1 <= ht(beta) <= max_height, in Q+ order.
  std::vector<RootVec> enumerate_qplus(int max_height) const;

  // Number of multisets of positive roots summing to beta.
  long kostant_partition(const RootVec& beta) const;

  bool is_dominant_integral(const Weight& lambda) const;

  // Antidominant representative w0(lambda) of the orbit of a dominant
  // integral weight, by repeated simple reflections.
  RationalVector antidominant(RationalVector coords) const;

private:
  int rank_ = 0;
  std::vector<std::vector<int>> cartan_;
  std::vector<int> d_;
  std::vector<RootVec> positive_roots_;
  RationalMatrix inv_cartan_;
  int minimal_root_order_ = 1;
};

std::string root_str(const RootVec& beta);

}  // namespace qfa
