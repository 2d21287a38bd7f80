// linalg.hpp
// Dense complex linear algebra: Kronecker products, numerical rank,
// orthogonalization, unitary completion, Hermitian eigendecomposition,
// Haar-random unitaries and simultaneous diagonalization.
//
// All functions are pure: results depend only on arguments (randomized ones
// take explicit seeds) and nothing here touches shared mutable state.

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "icmkit/rng.hpp"
#include "icmkit/types.hpp"

namespace icmkit {

// Kronecker product, (a.rows*b.rows) x (a.cols*b.cols), first factor major:
// out((i1,i2),(j1,j2)) = a(i1,j1) * b(i2,j2) with row index i1*b.rows+i2.
Matrix kron(const Matrix& a, const Matrix& b);

// Number of singular values sigma with
//   sigma > rel_rank_eps * sigma_max * max(rows, cols).
// Returns 0 for the zero matrix. Throws validation_error on an empty input
// and internal_error if the SVD fails to converge.
Index numerical_rank(const Matrix& a, const Tolerance& tol);

// Orthonormal spanning set of the input span (modified Gram-Schmidt with
// reorthogonalization). Vectors whose residual norm is <= abs_eps are
// dropped, so the output size equals the numerical rank of the stacked
// input. All vectors must share the same dimension.
std::vector<Vector> gram_schmidt(const std::vector<Vector>& vectors, const Tolerance& tol);

// Completes an m x k matrix with orthonormal columns to an m x m unitary
// whose first k columns equal the input. The remaining columns come from
// orthonormalizing the standard basis against the input in index order, so
// the completion is deterministic. Throws validation_error if the input
// columns are not orthonormal within abs_eps.
Matrix complete_to_unitary(const Matrix& cols, const Tolerance& tol);

// Eigendecomposition of a (hermitized) matrix: a == V diag(lambda) V^dagger
// with eigenvalues ascending and V unitary. Throws validation_error on a
// non-square input.
std::pair<RealVector, Matrix> eig_hermitian(const Matrix& a);

// n x n unitary sampled from the Haar measure: complex-Gaussian matrix, QR,
// then a column phase fix so the triangular factor has a positive real
// diagonal. Deterministic per seed.
Matrix haar_random_unitary(Index n, std::uint64_t seed);

// Orthonormal basis of C^n diagonalizing every input simultaneously. The
// inputs must be square, normal within abs_eps and pairwise commuting within
// abs_eps (validation_error otherwise). Implemented by diagonalizing a
// random real-coefficient Hermitian combination of the inputs' Hermitian and
// anti-Hermitian parts, retrying with fresh coefficients when an accidental
// degeneracy breaks joint diagonality. Deterministic per seed.
std::vector<Vector> common_eigenbasis(const std::vector<Matrix>& commuting,
                                      const Tolerance& tol,
                                      std::uint64_t seed = 0);

// n x n complex matrix with iid standard-complex-Gaussian entries.
Matrix gaussian_matrix(Index rows, Index cols, Rng& rng);

}  // namespace icmkit
