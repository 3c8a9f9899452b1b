#include "qfa/roots.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "qfa/errors.hpp"
#include "qfa/linalg.hpp"

namespace qfa {

int height(const RootVec& beta) { return std::accumulate(beta.begin(), beta.end(), 0); }

bool qplus_less(const RootVec& a, const RootVec& b) {
  int ha = height(a), hb = height(b);
  if (ha != hb) return ha < hb;
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

bool operator==(const Weight& a, const Weight& b) {
  if (a.coords.size() != b.coords.size()) return false;
  for (int i = 0; i < a.coords.size(); ++i)
    if (a.coords(i) != b.coords(i)) return false;
  if (a.direction.has_value() != b.direction.has_value()) return false;
  if (a.direction) {
    for (int i = 0; i < a.direction->size(); ++i)
      if ((*a.direction)(i) != (*b.direction)(i)) return false;
  }
  return true;
}

std::string Weight::str() const {
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < coords.size(); ++i) {
    if (i) os << ",";
    os << coords(i);
  }
  os << ")";
  if (direction) {
    os << "+t*(";
    for (int i = 0; i < direction->size(); ++i) {
      if (i) os << ",";
      os << (*direction)(i);
    }
    os << ")";
  }
  return os.str();
}

std::string root_str(const RootVec& beta) {
  std::ostringstream os;
  for (size_t i = 0; i < beta.size(); ++i) {
    if (i) os << ",";
    os << beta[i];
  }
  return os.str();
}

namespace {

// Minimal positive relatively prime d_i with d_i a_ij = d_j a_ji, found by
// propagating exact ratios along the Dynkin graph.
std::vector<int> compute_symmetrizers(const std::vector<std::vector<int>>& a) {
  const int r = static_cast<int>(a.size());
  std::vector<Rational> d(r, Rational(0));
  for (int start = 0; start < r; ++start) {
    if (!d[start].is_zero()) continue;
    d[start] = Rational(1);
    std::vector<int> stack{start};
    while (!stack.empty()) {
      int i = stack.back();
      stack.pop_back();
      for (int j = 0; j < r; ++j) {
        if (i == j || a[i][j] == 0) continue;
        if (a[i][j] == 0 || a[j][i] == 0) throw DomainError("Cartan matrix: a_ij = 0 iff a_ji = 0 violated");
        Rational dj = d[i] * Rational(a[i][j]) / Rational(a[j][i]);
        if (d[j].is_zero()) {
          d[j] = dj;
          stack.push_back(j);
        } else if (d[j] != dj) {
          throw DomainError("Cartan matrix is not symmetrizable");
        }
      }
    }
  }
  // Scale to minimal positive integers with overall gcd 1.
  Rational lcm(1);
  for (const auto& x : d) lcm = integer_lcm(lcm, x.denominator());
  std::vector<long> num(r);
  for (int i = 0; i < r; ++i) num[i] = (d[i] * lcm).to_long();
  long g = 0;
  for (long x : num) g = std::gcd(g, x);
  std::vector<int> out(r);
  for (int i = 0; i < r; ++i) {
    long value = num[i] / g;
    if (value <= 0) throw DomainError("Cartan matrix: nonpositive symmetrizer");
    out[i] = static_cast<int>(value);
  }
  return out;
}

void check_finite_type(const std::vector<std::vector<int>>& a, const std::vector<int>& d) {
  const int r = static_cast<int>(a.size());
  RationalMatrix sym(r, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      sym(i, j) = Rational(d[i]) * Rational(a[i][j]);
      if (i == j && a[i][j] != 2) throw DomainError("Cartan matrix: diagonal entries must equal 2");
      if (i != j && a[i][j] > 0) throw DomainError("Cartan matrix: off-diagonal entries must be <= 0");
    }
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      if (sym(i, j) != sym(j, i)) throw DomainError("Cartan matrix is not symmetrizable");
  // Sylvester: all leading principal minors of the symmetrized matrix positive.
  for (int k = 1; k <= r; ++k) {
    RationalMatrix minor = sym.topLeftCorner(k, k);
    if (!(determinant(std::move(minor)) > Rational(0)))
      throw DomainError("Cartan matrix is not of finite type (symmetrized form not positive definite)");
  }
}

}  // namespace

RootData RootData::init(const std::vector<std::vector<int>>& cartan) {
  RootData rd;
  rd.rank_ = static_cast<int>(cartan.size());
  if (rd.rank_ == 0) throw DomainError("Cartan matrix: empty");
  for (const auto& row : cartan)
    if (static_cast<int>(row.size()) != rd.rank_) throw DomainError("Cartan matrix: not square");
  rd.cartan_ = cartan;
  rd.d_ = compute_symmetrizers(cartan);
  check_finite_type(cartan, rd.d_);

  // Exact inverse of A.
  RationalMatrix a(rd.rank_, rd.rank_);
  for (int i = 0; i < rd.rank_; ++i)
    for (int j = 0; j < rd.rank_; ++j) a(i, j) = Rational(cartan[i][j]);
  rd.inv_cartan_ = invert(a);

  // Positive roots by root-string closure from the simple roots.
  std::set<RootVec> roots;
  for (int i = 0; i < rd.rank_; ++i) {
    RootVec alpha(rd.rank_, 0);
    alpha[i] = 1;
    roots.insert(alpha);
  }
  bool grew = true;
  int guard = 0;
  while (grew) {
    if (++guard > 64) throw DomainError("Cartan matrix: root closure did not terminate");
    grew = false;
    std::vector<RootVec> snapshot(roots.begin(), roots.end());
    for (const RootVec& beta : snapshot) {
      for (int i = 0; i < rd.rank_; ++i) {
        // <beta, alpha_i^vee> = (A beta)_i.
        int pairing = 0;
        for (int j = 0; j < rd.rank_; ++j) pairing += cartan[i][j] * beta[j];
        // Root string beta - p alpha_i, ..., beta + q alpha_i with
        // q = p - <beta, alpha_i^vee>.
        int p = 0;
        RootVec down = beta;
        while (true) {
          down[i] -= 1;
          if (down[i] < 0 || !roots.count(down)) break;
          ++p;
        }
        if (p - pairing >= 1) {
          RootVec up = beta;
          up[i] += 1;
          if (roots.insert(up).second) grew = true;
        }
      }
    }
  }
  rd.positive_roots_.assign(roots.begin(), roots.end());
  std::sort(rd.positive_roots_.begin(), rd.positive_roots_.end(), qplus_less);

  // D = |det A| * lcm(d_i).
  Rational det = determinant(std::move(a));
  long det_abs = det.abs().to_long();
  long lcm_d = 1;
  for (int di : rd.d_) lcm_d = std::lcm(lcm_d, static_cast<long>(di));
  rd.minimal_root_order_ = static_cast<int>(det_abs * lcm_d);
  return rd;
}

RootData RootData::from_text(const std::string& text) {
  std::string t;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
  if (t.empty()) throw DomainError("Cartan input: empty");
  if (std::isalpha(static_cast<unsigned char>(t[0]))) {
    char family = static_cast<char>(std::toupper(static_cast<unsigned char>(t[0])));
    int n = 0;
    try {
      n = std::stoi(t.substr(1));
    } catch (...) {
      throw DomainError("Cartan input: bad type shorthand '" + text + "'");
    }
    auto chain = [&](int len) {
      std::vector<std::vector<int>> m(len, std::vector<int>(len, 0));
      for (int i = 0; i < len; ++i) {
        m[i][i] = 2;
        if (i + 1 < len) {
          m[i][i + 1] = -1;
          m[i + 1][i] = -1;
        }
      }
      return m;
    };
    if (family == 'A' && n >= 1) return init(chain(n));
    if (family == 'B' && n >= 2) {
      auto m = chain(n);
      m[n - 1][n - 2] = -2;  // alpha_n short
      return init(m);
    }
    if (family == 'C' && n >= 2) {
      auto m = chain(n);
      m[n - 2][n - 1] = -2;  // alpha_n long
      return init(m);
    }
    if (family == 'D' && n >= 4) {
      auto m = chain(n - 1);
      for (auto& row : m) row.push_back(0);
      m.push_back(std::vector<int>(n, 0));
      m[n - 1][n - 1] = 2;
      m[n - 1][n - 3] = -1;
      m[n - 3][n - 1] = -1;
      return init(m);
    }
    if (family == 'G' && n == 2) return init({{2, -1}, {-3, 2}});
    throw DomainError("Cartan input: unsupported type '" + text + "'");
  }
  // Explicit matrix: rows separated by ';', entries by ','.
  std::vector<std::vector<int>> m;
  std::stringstream rows(t);
  std::string row;
  while (std::getline(rows, row, ';')) {
    std::vector<int> entries;
    std::stringstream cells(row);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      try {
        entries.push_back(std::stoi(cell));
      } catch (...) {
        throw DomainError("Cartan input: bad entry '" + cell + "'");
      }
    }
    m.push_back(std::move(entries));
  }
  return init(m);
}

Weight RootData::rho() const {
  RationalVector c = RationalVector::Constant(rank_, Rational(1));
  return Weight(std::move(c));
}

Rational RootData::bilinear(const RationalVector& lambda, const RootVec& beta) const {
  Rational s(0);
  for (int i = 0; i < rank_; ++i) s += Rational(beta[i]) * Rational(d_[i]) * lambda(i);
  return s;
}

Rational RootData::root_norm(const RootVec& beta) const {
  Rational s(0);
  for (int i = 0; i < rank_; ++i)
    for (int j = 0; j < rank_; ++j) s += Rational(beta[i]) * Rational(beta[j]) * Rational(d_[i] * cartan_[i][j]);
  return s;
}

Rational RootData::pair_coroot(const RationalVector& lambda, const RootVec& beta) const {
  return Rational(2) * bilinear(lambda, beta) / root_norm(beta);
}

Rational RootData::pair_coroot_shifted(const Weight& lambda, const RootVec& beta) const {
  RationalVector shifted = lambda.coords;
  for (int i = 0; i < rank_; ++i) shifted(i) += Rational(1);
  return pair_coroot(shifted, beta);
}

RationalVector RootData::simple_coordinates(const RationalVector& fundamental) const {
  return inv_cartan_ * fundamental;
}

RationalVector RootData::reflect(int i, const RationalVector& coords) const {
  // s_i: c_j -> c_j - c_i a_ji  (alpha_i has fundamental coordinates a_ji).
  RationalVector out = coords;
  for (int j = 0; j < rank_; ++j) out(j) -= coords(i) * Rational(cartan_[j][i]);
  return out;
}

Weight RootData::dot_action(const std::vector<int>& word, const Weight& lambda) const {
  RationalVector c = lambda.coords;
  for (int i = 0; i < rank_; ++i) c(i) += Rational(1);
  c = weyl_action(word, std::move(c));
  for (int i = 0; i < rank_; ++i) c(i) -= Rational(1);
  Weight out(std::move(c));
  return out;
}

RationalVector RootData::weyl_action(const std::vector<int>& word, RationalVector coords) const {
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    if (*it < 0 || *it >= rank_) throw DomainError("Weyl word: reflection index out of range");
    coords = reflect(*it, coords);
  }
  return coords;
}

std::vector<RootVec> RootData::enumerate_qplus(int max_height) const {
  std::vector<RootVec> out;
  for (int h = 1; h <= max_height; ++h) {
    // Compositions of h into rank_ nonnegative parts.
    RootVec beta(rank_, 0);
    std::function<void(int, int)> rec = [&](int idx, int remaining) {
      if (idx == rank_ - 1) {
        beta[idx] = remaining;
        out.push_back(beta);
        return;
      }
      for (int c = 0; c <= remaining; ++c) {
        beta[idx] = c;
        rec(idx + 1, remaining - c);
      }
      beta[idx] = 0;
    };
    rec(0, h);
  }
  std::sort(out.begin(), out.end(), qplus_less);
  return out;
}

long RootData::kostant_partition(const RootVec& beta) const {
  for (int c : beta)
    if (c < 0) return 0;
  std::map<std::pair<RootVec, int>, long> memo;
  std::function<long(const RootVec&, int)> rec = [&](const RootVec& target, int max_root) -> long {
    if (std::all_of(target.begin(), target.end(), [](int c) { return c == 0; })) return 1;
    if (max_root < 0) return 0;
    auto key = std::make_pair(target, max_root);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    long total = 0;
    RootVec reduced = target;
    bool feasible = true;
    int uses = 0;
    while (feasible) {
      total += rec(reduced, max_root - 1);
      const RootVec& root = positive_roots_[max_root];
      for (int i = 0; i < rank_; ++i) {
        reduced[i] -= root[i];
        if (reduced[i] < 0) feasible = false;
      }
      ++uses;
      if (uses > 64) throw DomainError("kostant_partition: runaway recursion");
    }
    memo.emplace(key, total);
    return total;
  };
  return rec(beta, static_cast<int>(positive_roots_.size()) - 1);
}

bool RootData::is_dominant_integral(const Weight& lambda) const {
  for (int i = 0; i < rank_; ++i) {
    const Rational& c = lambda.coords(i);
    if (!c.is_integer() || c.sign() < 0) return false;
  }
  return true;
}

RationalVector RootData::antidominant(RationalVector coords) const {
  bool changed = true;
  int guard = 0;
  while (changed) {
    if (++guard > 10000) throw DomainError("antidominant: did not terminate");
    changed = false;
    for (int i = 0; i < rank_; ++i) {
      if (coords(i) > Rational(0)) {
        coords = reflect(i, coords);
        changed = true;
      }
    }
  }
  return coords;
}

}  // namespace qfa
