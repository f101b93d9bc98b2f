#ifndef NEWSTAG_TYPES_HPP
#define NEWSTAG_TYPES_HPP

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <cstdint>
#include <stdexcept>

namespace newstag {

using Index = Eigen::Index;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using SparseMatrix = Eigen::SparseMatrix<Scalar, Eigen::ColMajor, Index>;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters or flags supplied by the caller.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent input data (corpus files, matrices).
class DataError : public Error {
 public:
  using Error::Error;
};

/// A numerical precondition does not hold (divergent series, failed solve).
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace newstag

#endif  // NEWSTAG_TYPES_HPP
