// Information-volume criterion: orthonormalize each measurement's traceless
// operator subspace and measure the parallelepiped volume spanned by the
// union. Larger volume = better-conditioned tomography.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "icmkit/constructions.hpp"
#include "icmkit/measurement.hpp"
#include "icmkit/types.hpp"

namespace icmkit {

struct VolumeReport {
  double volume = 0.0;        // may underflow; log10_volume is authoritative
  double log10_volume = 0.0;  // -inf for degenerate (rank-deficient) families
  Index operator_count = 0;
  std::vector<Index> per_subspace_dims;
};

struct VolumeSurveyRow {
  Index n = 0;
  std::string scheme;  // "mub", "mpicm" or "random"
  std::optional<std::uint64_t> seed;
  VolumeReport report;
};

// The n traceless Hermitian operators |x><x| - I/n of an orthonormal basis;
// they sum to zero, so their span has dimension n-1.
std::vector<Matrix> q_operators(const std::vector<Vector>& basis, const Tolerance& tol);

// Shared volume core: per group, Gram-Schmidt the flattened operators under
// the Hilbert-Schmidt inner product (index order, dependents dropped); stack
// every survivor and accumulate the singular values in log10 space. A
// rank-deficient stack reports volume 0 with log10 = -inf.
VolumeReport volume_of_operator_groups(const std::vector<std::vector<Matrix>>& groups, Index dim,
                                       const Tolerance& tol);

// Volume of the family's q_operators subspaces.
VolumeReport information_volume(const BasisFamily& fam, const Tolerance& tol);

// Volume of a single complete rank-one projective measurement: forms
// {P_k - I/m}, drops the last, orthonormalizes. Equals 1 for orthonormal
// projectors.
VolumeReport single_measurement_volume(const Povm& povm, const Tolerance& tol);

// Rows for mub_family / the MPICM construction (each when available for this
// n) plus one random_bases row per seed.
std::vector<VolumeSurveyRow> volume_survey(Index n, const std::vector<std::uint64_t>& seeds,
                                           const Tolerance& tol);

}  // namespace icmkit
