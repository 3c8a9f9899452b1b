#pragma once

#include <vector>

#include "qfa/eigen_support.hpp"
#include "qfa/errors.hpp"

// Exact dense linear algebra over a field scalar (Rational or Scalar).
// Pivoting is positional only (first usable row, columns scanned in order),
// so every result is deterministic and independent of any magnitude notion.

namespace qfa {

// Reduced row echelon form in place; returns the pivot column indices in
// ascending order.
template <typename T>
std::vector<int> rref_in_place(DenseMatrix<T>& m) {
  std::vector<int> pivots;
  const int rows = static_cast<int>(m.rows());
  const int cols = static_cast<int>(m.cols());
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int pivot = -1;
    for (int i = r; i < rows; ++i) {
      if (!(m(i, c) == T(0))) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) continue;
    if (pivot != r) m.row(pivot).swap(m.row(r));
    T inv = T(1) / m(r, c);
    for (int j = c; j < cols; ++j) m(r, j) = m(r, j) * inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r) continue;
      if (m(i, c) == T(0)) continue;
      T factor = m(i, c);
      for (int j = c; j < cols; ++j) m(i, j) = m(i, j) - factor * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

template <typename T>
int rank_of(DenseMatrix<T> m) {
  return static_cast<int>(rref_in_place(m).size());
}

// Canonical null space basis: one vector per free column, ascending, with a
// unit entry at the free column and the RREF-determined entries at pivots.
template <typename T>
std::vector<DenseVector<T>> null_space_basis(DenseMatrix<T> m) {
  const int cols = static_cast<int>(m.cols());
  std::vector<int> pivots = rref_in_place(m);
  std::vector<bool> is_pivot(cols, false);
  for (int c : pivots) is_pivot[c] = true;
  std::vector<DenseVector<T>> basis;
  for (int f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    DenseVector<T> v = DenseVector<T>::Constant(cols, T(0));
    v(f) = T(1);
    for (int p = 0; p < static_cast<int>(pivots.size()); ++p) v(pivots[p]) = -m(p, f);
    basis.push_back(std::move(v));
  }
  return basis;
}

template <typename T>
DenseMatrix<T> invert(const DenseMatrix<T>& m) {
  if (m.rows() != m.cols()) throw DomainError("invert: matrix is not square");
  const int n = static_cast<int>(m.rows());
  DenseMatrix<T> work(n, 2 * n);
  work.leftCols(n) = m;
  work.rightCols(n) = DenseMatrix<T>::Identity(n, n);
  std::vector<int> pivots = rref_in_place(work);
  if (static_cast<int>(pivots.size()) != n || (n > 0 && pivots.back() != n - 1))
    throw DomainError("invert: matrix is singular");
  return work.rightCols(n);
}

template <typename T>
T determinant(DenseMatrix<T> m) {
  if (m.rows() != m.cols()) throw DomainError("determinant: matrix is not square");
  const int n = static_cast<int>(m.rows());
  T det = T(1);
  for (int c = 0; c < n; ++c) {
    int pivot = -1;
    for (int i = c; i < n; ++i) {
      if (!(m(i, c) == T(0))) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) return T(0);
    if (pivot != c) {
      m.row(pivot).swap(m.row(c));
      det = -det;
    }
    det = det * m(c, c);
    T inv = T(1) / m(c, c);
    for (int i = c + 1; i < n; ++i) {
      if (m(i, c) == T(0)) continue;
      T factor = m(i, c) * inv;
      for (int j = c; j < n; ++j) m(i, j) = m(i, j) - factor * m(c, j);
    }
  }
  return det;
}

template <typename T>
DenseMatrix<T> kronecker(const DenseMatrix<T>& a, const DenseMatrix<T>& b) {
  DenseMatrix<T> r(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return r;
}

template <typename T>
bool is_zero_vector(const DenseVector<T>& v) {
  for (int i = 0; i < v.size(); ++i)
    if (!(v(i) == T(0))) return false;
  return true;
}

// True when v lies in the span of the given vectors.
template <typename T>
bool in_span(const std::vector<DenseVector<T>>& span, const DenseVector<T>& v) {
  if (span.empty()) return is_zero_vector(v);
  DenseMatrix<T> m(span.size() + 1, v.size());
  for (size_t i = 0; i < span.size(); ++i) m.row(i) = span[i].transpose();
  m.row(span.size()) = v.transpose();
  DenseMatrix<T> base(span.size(), v.size());
  for (size_t i = 0; i < span.size(); ++i) base.row(i) = span[i].transpose();
  return rank_of(std::move(m)) == rank_of(std::move(base));
}

// Subspace comparison via ranks of stacked generators.
template <typename T>
bool span_contains(const std::vector<DenseVector<T>>& big, const std::vector<DenseVector<T>>& small, int dim) {
  DenseMatrix<T> b(big.size(), dim);
  for (size_t i = 0; i < big.size(); ++i) b.row(i) = big[i].transpose();
  DenseMatrix<T> u(big.size() + small.size(), dim);
  for (size_t i = 0; i < big.size(); ++i) u.row(i) = big[i].transpose();
  for (size_t i = 0; i < small.size(); ++i) u.row(big.size() + i) = small[i].transpose();
  return rank_of(std::move(b)) == rank_of(std::move(u));
}

}  // namespace qfa
