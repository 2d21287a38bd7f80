// measurement.hpp
// POVM data model and informational-completeness tests: the flattened effect
// matrix and its rank, IC over a subspace, effect-count compression, frame
// potential, trace balance and trace optimality.

#pragma once

#include <vector>

#include "icmkit/linalg.hpp"
#include "icmkit/types.hpp"

namespace icmkit {

// One measurement operator (Hermitian, PSD within tolerance).
struct Effect {
  Matrix matrix;
};

// Ordered collection of effects acting on C^dim. Non-complete POVMs are
// first class: `complete` records whether the effects sum to the identity.
struct Povm {
  std::vector<Effect> effects;
  Index dim = 0;
  bool complete = false;
};

// Orthonormal kets spanning a d-dimensional subspace of C^dim_ambient.
struct SubspaceBasis {
  Index dim_ambient = 0;
  std::vector<Vector> kets;
};

// Result of an informational-completeness test. is_ic holds exactly when
// rank == required (n^2 for the full space, d^2 over a subspace).
struct IcReport {
  Index rank = 0;
  Index required = 0;
  bool is_ic = false;
  Index effect_count = 0;
};

// Set of unit-norm kets (frame-potential input).
struct UnitVectorSet {
  std::vector<Vector> kets;
};

// Result of trace_balance_check: whether all per-effect averages agree, and
// the averages themselves (effect order).
struct TraceBalanceReport {
  bool balanced = false;
  std::vector<double> averages;
};

// Throws validation_error if the POVM violates its invariants: effects share
// dim, each is Hermitian within abs_eps with eigenvalues >= -abs_eps, and a
// complete POVM sums to the identity within abs_eps.
void validate(const Povm& povm, const Tolerance& tol);

// Throws validation_error unless the kets are orthonormal within abs_eps and
// live in C^dim_ambient.
void validate(const SubspaceBasis& basis, const Tolerance& tol);

// Convenience factory: wraps matrices into a validated POVM.
Povm make_povm(std::vector<Matrix> effects, bool complete, const Tolerance& tol);

// The m x n^2 matrix whose row i is the row-major flattening of effect i
// (column (k, j) holds entry (k, j) of the effect at index k*n + j).
Matrix build_effect_matrix(const Povm& povm);

// Informational completeness of the POVM over the full space:
// rank(build_effect_matrix) == n^2.
IcReport is_ic(const Povm& povm, const Tolerance& tol);

// Informational completeness over the subspace spanned by d_basis: each
// effect is compressed to its d x d block expressed in d_basis, then the
// rank test runs with required = d^2.
IcReport is_ic_over_subspace(const Povm& povm, const SubspaceBasis& d_basis, const Tolerance& tol);

// The POVM whose effects are the d x d compressed blocks (in d_basis) of the
// input effects. Equivalent to the input when measuring states supported on
// the subspace.
Povm compress_effects(const Povm& povm, const SubspaceBasis& d_basis, const Tolerance& tol);

// Reduces a complete POVM that is IC over the subspace to exactly d^2
// effects that are still complete and IC over the subspace: picks a maximal
// linearly independent subset of compressed effects (greedy in index order),
// forms the completing effect M0 = I - sum(selected), expands M0's
// compression in the selected-block basis and merges M0 into the first
// selected effect whose expansion coefficient x_k has x_k != -1.
Povm compress_ic_over_subspace(const Povm& povm, const SubspaceBasis& d_basis,
                               const Tolerance& tol);

// Frame potential sum over all ordered pairs, diagonal included:
// sum_{x,y} |<x|y>|^2.
double frame_potential(const UnitVectorSet& s);

// Per-effect averages a_i = Tr(M_i P_D) / d, where P_D projects onto the
// subspace (the uniform average state over the subspace is P_D / d);
// balanced when all averages agree within abs_eps.
TraceBalanceReport trace_balance_check(const Povm& povm, const SubspaceBasis& d_basis,
                                       const Tolerance& tol);

// True iff the POVM is trace balanced over the subspace and its effects sum
// to the identity on the subspace (every subspace state has total outcome
// probability 1).
bool trace_optimal_check(const Povm& povm, const SubspaceBasis& d_basis, const Tolerance& tol);

// The n^2 rank-one operators
//   {|s><s|}  u  {(|j>+|k>)(<j|+<k|)/2 : k > j}  u  {(|j>+i|k>)(<j|-i<k|)/2 : k > j},
// ordered projectors first, then the real pair group, then the imaginary
// pair group, (j, k) ascending j-major. Their sum is not the identity, so
// the POVM carries complete = false.
Povm canonical_ic_set(Index n);

// Rescales a POVM with positive-definite effect sum S into a complete one
// via M_i -> S^{-1/2} M_i S^{-1/2}. Preserves effect ranks and the IC
// verdict. Throws validation_error when S is singular within abs_eps.
Povm make_complete(const Povm& povm, const Tolerance& tol);

// Standard basis of C^n as a SubspaceBasis of the first d coordinates of
// C^dim_ambient.
SubspaceBasis leading_coordinates_basis(Index dim_ambient, Index d);

// Row-major flattening of a square matrix (row k goes to entries k*n..k*n+n-1).
Vector flatten_row_major(const Matrix& a);

}  // namespace icmkit
