// Born-rule probabilities, linear-inversion reconstruction, and finite-shot
// sampling for POVM measurements.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "icmkit/measurement.hpp"
#include "icmkit/types.hpp"

namespace icmkit {

struct DensityState {
  Matrix matrix;  // Hermitian, PSD, unit trace
};

struct OutcomeDistribution {
  RealVector probs;                 // aligned with the effect order of the POVM
  std::optional<Index> shots;       // absent: exact Born-rule values
};

struct TomographyReport {
  DensityState estimate;
  // Errors compare the estimate against a known reference state; they are
  // populated by run_experiment and left at zero by reconstruct alone.
  double hs_error = 0.0;
  double trace_error = 0.0;
  std::optional<Index> shots;
  double residual = 0.0;  // least-squares residual of the linear inversion
};

// Checks Hermiticity, positivity (eigenvalues >= -abs_eps) and unit trace.
void validate(const DensityState& rho, const Tolerance& tol);

// p_i = Re Tr(M_i rho), clamped at zero when within -abs_eps.
OutcomeDistribution probabilities(const Povm& povm, const DensityState& rho, const Tolerance& tol);

// Least-squares inversion of the effect matrix; the estimate is hermitized
// and trace-renormalized, and optionally clipped to the PSD cone. Requires an
// IC povm.
TomographyReport reconstruct(const Povm& povm, const OutcomeDistribution& dist, bool project_psd,
                             const Tolerance& tol);

// Multinomial counts / shots, deterministic per seed. A non-complete povm
// gets a hidden complement outcome whose counts are discarded.
OutcomeDistribution sample_outcomes(const Povm& povm, const DensityState& rho, Index shots,
                                    std::uint64_t seed, const Tolerance& tol);

// rho = AA^dag / Tr(AA^dag) with A complex-Gaussian n x rank (default n).
DensityState random_density(Index n, std::optional<Index> rank, std::uint64_t seed);

// probabilities (exact, or sampled when shots is set) -> reconstruct -> error
// report against rho. PSD projection defaults to on for sampled data and off
// for exact data; pass project_psd to override.
TomographyReport run_experiment(const Povm& povm, const DensityState& rho,
                                std::optional<Index> shots, std::uint64_t seed,
                                std::optional<bool> project_psd, const Tolerance& tol);

}  // namespace icmkit
