#pragma once

#include <Eigen/Core>

#include "qfa/rational.hpp"
#include "qfa/scalar.hpp"

namespace Eigen {

template <>
struct NumTraits<qfa::Rational> : GenericNumTraits<qfa::Rational> {
  typedef qfa::Rational Real;
  typedef qfa::Rational NonInteger;
  typedef qfa::Rational Nested;
  static inline Real epsilon() { return qfa::Rational(0); }
  static inline Real dummy_precision() { return qfa::Rational(0); }
  static inline int digits10() { return 0; }
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 8,
    AddCost = 40,
    MulCost = 40
  };
};

template <>
struct NumTraits<qfa::Scalar> : GenericNumTraits<qfa::Scalar> {
  typedef qfa::Scalar Real;
  typedef qfa::Scalar NonInteger;
  typedef qfa::Scalar Nested;
  static inline Real epsilon() { return qfa::Scalar(0); }
  static inline Real dummy_precision() { return qfa::Scalar(0); }
  static inline int digits10() { return 0; }
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 16,
    AddCost = 500,
    MulCost = 500
  };
};

}  // namespace Eigen

namespace qfa {

template <typename T>
using DenseMatrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <typename T>
using DenseVector = Eigen::Matrix<T, Eigen::Dynamic, 1>;

using ScalarMatrix = DenseMatrix<Scalar>;
using ScalarVector = DenseVector<Scalar>;
using RationalMatrix = DenseMatrix<Rational>;
using RationalVector = DenseVector<Rational>;

}  // namespace qfa
