#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace onebit {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Sorted, duplicate-free list of coefficient indices.
using Support = std::vector<Index>;

/// Raised when an object would be too large to materialize, or an
/// exhaustive search exceeds its combinatorial budget.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A sensing operator with a zero-norm column.
class DegenerateOperatorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// NaN or divergence inside an iterative solver.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TuningError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Iteration cap hit before the stopping rule fired. Carries the best
/// iterate seen so callers can still use it.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, CVector best)
      : std::runtime_error(what), best_(std::move(best)) {}
  const CVector& best() const { return best_; }

 private:
  CVector best_;
};

}  // namespace onebit
