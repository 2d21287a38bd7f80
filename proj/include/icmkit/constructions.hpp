// constructions.hpp
// Explicit measurement constructions: MPICM families (hardcoded n=4/6 and
// the general even-n family), the rank-one IC POVM, ancilla
// orthogonalization with a trace-balanced variant, the local measurement on
// C^n (x) C^(n+1), two Naimark dilations, tensor products, MUB and
// Haar-random baseline bases.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "icmkit/measurement.hpp"
#include "icmkit/types.hpp"

namespace icmkit {

// Ordered set of orthonormal bases of C^dim; each basis is a list of dim kets.
struct BasisFamily {
  Index dim = 0;
  std::vector<std::vector<Vector>> bases;
};

// Partition of a unitary operator basis of Mat_n(C): the identity (stored
// implicitly) plus n+1 groups of n-1 pairwise commuting unitaries.
struct UnitaryPartition {
  Index dim = 0;
  std::vector<std::vector<Matrix>> groups;
};

// Throws validation_error unless every basis is a full orthonormal basis of
// C^dim within abs_eps.
void validate(const BasisFamily& fam, const Tolerance& tol);

// Hardcoded minimal projective IC families: 5 bases for n=4, 7 bases for
// n=6. Throws validation_error for other n.
BasisFamily mpicm_explicit(Index n);

// General even-dimension family: n+1 orthonormal bases of C^n assembled
// from quartets of paired kets and their discrete-Fourier combinations.
// Defined for even n = 2r with r >= 5; throws validation_error otherwise.
BasisFamily mpicm_general(Index n);

namespace detail {
// mpicm_general without the n >= 10 precondition and without the final
// orthonormality check; used by tests probing dimensions where the family
// is known to lose informational completeness.
BasisFamily mpicm_general_unchecked(Index n);
}  // namespace detail

// Rank-one projectors of all bases. With scaled=true each projector carries
// weight 1/(number of bases) and the result is a complete POVM; with
// scaled=false the raw projectors are returned (complete = false). Scaling
// never changes the IC verdict.
Povm povm_from_bases(const BasisFamily& fam, bool scaled = true);

// For each basis {|p_j>}, the commuting group {U_k = sum_j w^(jk)|p_j><p_j| :
// k = 1..n-1} with w = e^(2 pi i / n). Requires an IC family of n+1 bases;
// the flattened {I} u groups span is verified to have full rank n^2.
UnitaryPartition unitary_partition_from_mpicm(const BasisFamily& fam, const Tolerance& tol);

// Reverse direction: per group, a common eigenbasis of {I} u group. The
// span of each returned basis' projectors matches the span of {I} u group.
BasisFamily mpicm_from_unitary_partition(const UnitaryPartition& part, const Tolerance& tol,
                                         std::uint64_t seed = 0);

// Complete rank-one IC POVM with n^2 effects, every effect of trace 1/n.
// For odd prime n the kets are
//   |e_lj> = (n|x|^2 + n^2 - n)^(-1/2) * sum_k a_lk w^(jk) |k>,
// a_lk = 1 + delta_lk (x - 1), w = e^(2 pi i / n), with x real and
// x not in {1, -1, 1 - n/2}. For n = 2 the same ket form is used with a
// complex parameter constrained by |x| != 1 and x^2 not real (default
// 1 + i). Composite n is built as the tensor product over the ascending
// prime factorization; the x argument then applies to the odd prime
// factors, while factors of dimension 2 use the default.
Povm rank_one_ic_povm(Index n, std::optional<Complex> x = std::nullopt);

// Component-wise rescaling ket'[c] = ket[c] * b[c]; preserves linear
// independence of the derived projectors. All scales must be nonzero.
std::vector<Vector> diagonal_rescale_kets(const std::vector<Vector>& kets,
                                          const std::vector<Complex>& b);

// Ancilla orthogonalization: m kets of C^n whose projectors form an IC set
// are lifted to m pairwise orthogonal kets of C^(n+m). Output j is the
// deflated ket plus the j-th appended standard direction; the C^n component
// of output j equals input j, so the normalized projectors reproduce the
// original outcome statistics on embedded states (up to the squared norms)
// and remain IC over the embedded C^n.
std::vector<Vector> orthogonalize_with_ancilla(const std::vector<Vector>& kets,
                                               const Tolerance& tol);

// Appends a second ancilla block: h_j = e_m[j] + x_j g_j in C^(n+2m), with
// x_j >= 0 chosen so that ||original_j||^2 / ||h_j||^2 is the same constant
// for every j (the normalized projectors become trace balanced over the
// embedded C^n). Outputs stay pairwise orthogonal.
std::vector<Vector> trace_balanced_extension(const std::vector<Vector>& e_m,
                                             const std::vector<Vector>& original_kets);

// Local projective measurement on C^n (x) C^(n+1) built from an IC family
// of n+1 bases: the n(n+1) projectors |p_ij><p_ij| (x) |i><i| (i = basis
// index on the second factor). Complete, frame potential n + n^2, IC over
// the embedded C^n and trace balanced on states rho (x) I/(n+1).
Povm local_tomography_measurement(const BasisFamily& fam, const Tolerance& tol);

// Subspace basis {|k> (x) |+>} of C^(n(n+1)) with |+> the uniform
// superposition of the second factor. States rho (x) I/(n+1) have the same
// outcome statistics as this embedding, and the local measurement above is
// IC over it.
SubspaceBasis local_embedding_basis(Index n);

// Compact dilation of a complete rank-one POVM of C^n with m effects:
// stacks the factored kets as rows of an m x n matrix G (columns
// orthonormal exactly when the POVM is complete), completes G to a unitary
// and returns the rank-one projectors onto its rows. Measuring a state
// embedded in the first n coordinates of C^m reproduces the original
// outcome probabilities exactly.
Povm naimark_dilate_rank_one(const Povm& povm, const Tolerance& tol);

// Standard dilation: unitary on system (x) ancilla implementing
// |phi>|0> -> sum_k (sqrt(M_k)|phi>) |k>; measuring the ancilla in the
// standard basis reproduces the POVM statistics.
struct NaimarkDilation {
  Matrix unitary;      // (n*m) x (n*m), index (s, k) -> s*m + k
  Index system_dim = 0;
  Index ancilla_dim = 0;
};
NaimarkDilation naimark_standard(const Povm& povm, const Tolerance& tol);

// All Kronecker products of one effect per part, part-major order. Complete
// iff every part is complete; IC iff every part is IC.
Povm tensor_povm(const std::vector<Povm>& parts);

// Mutually unbiased bases: n+1 bases with all cross-basis overlaps
// |<b|b'>|^2 = 1/n. Supported for n = 2 and n = 4 (hardcoded families) and
// odd prime n (Fourier-quadratic construction, standard basis first).
BasisFamily mub_family(Index n);

// count_bases Haar-random orthonormal bases of C^n, deterministic per seed.
BasisFamily random_bases(Index n, Index count_bases, std::uint64_t seed);

// Extracts the ket of a rank-one PSD matrix via its top eigenpair, with the
// phase fixed so the largest-magnitude component is real positive. Throws
// validation_error when the second eigenvalue exceeds 1e-8 times the top
// one (the effect is not rank one under roundoff).
Vector rank_one_ket(const Matrix& effect);

}  // namespace icmkit
