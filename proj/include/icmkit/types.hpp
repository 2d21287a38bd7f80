// types.hpp
// Shared scalar/matrix aliases, tolerances and error types for icmkit.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace icmkit {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

// Numerical tolerances used across the library.
//   rel_rank_eps: relative singular-value cutoff for rank decisions
//                 (a singular value counts when sigma > rel_rank_eps * sigma_max * max(rows, cols)).
//   abs_eps:      absolute cutoff for entrywise/norm comparisons (orthonormality,
//                 Hermiticity, completeness, commutators).
struct Tolerance {
  double rel_rank_eps = 1e-10;
  double abs_eps = 1e-10;
};

// Throws validation_error unless both tolerances are strictly positive and
// rel_rank_eps < 1.
void validate(const Tolerance& tol);

// Caller passed a value that violates a documented precondition.
class validation_error : public std::invalid_argument {
 public:
  explicit validation_error(const std::string& what) : std::invalid_argument(what) {}
};

// File or stream could not be read, written or parsed.
class io_error : public std::runtime_error {
 public:
  explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

// An internal invariant failed (decomposition breakdown, construction
// producing inconsistent output). Never caused by bad user input alone.
class internal_error : public std::runtime_error {
 public:
  explicit internal_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace icmkit
