// tomography.cpp

#include "icmkit/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "icmkit/linalg.hpp"
#include "icmkit/rng.hpp"

namespace icmkit {

void validate(const DensityState& rho, const Tolerance& tol) {
  validate(tol);
  const Matrix& a = rho.matrix;
  if (a.rows() != a.cols() || a.rows() < 1) {
    throw validation_error("density state: matrix must be square and non-empty");
  }
  if (!a.allFinite()) {
    throw validation_error("density state: non-finite entries");
  }
  if ((a - a.adjoint()).cwiseAbs().maxCoeff() > tol.abs_eps) {
    throw validation_error("density state: matrix is not Hermitian");
  }
  if (std::abs(a.trace() - Complex(1.0, 0.0)) > tol.abs_eps) {
    throw validation_error("density state: trace must be 1");
  }
  const auto [eigenvalues, vectors] = eig_hermitian(a);
  if (eigenvalues.minCoeff() < -tol.abs_eps) {
    throw validation_error("density state: negative eigenvalue");
  }
}

OutcomeDistribution probabilities(const Povm& povm, const DensityState& rho, const Tolerance& tol) {
  validate(povm, tol);
  validate(rho, tol);
  if (rho.matrix.rows() != povm.dim) {
    throw validation_error("probabilities: state dimension does not match the povm");
  }
  OutcomeDistribution dist;
  dist.probs.resize(static_cast<Index>(povm.effects.size()));
  for (std::size_t i = 0; i < povm.effects.size(); ++i) {
    double p = (povm.effects[i].matrix * rho.matrix).trace().real();
    if (p < 0.0 && p >= -tol.abs_eps) {
      p = 0.0;
    }
    dist.probs(static_cast<Index>(i)) = p;
  }
  return dist;
}

TomographyReport reconstruct(const Povm& povm, const OutcomeDistribution& dist, bool project_psd,
                             const Tolerance& tol) {
  validate(povm, tol);
  const Index n = povm.dim;
  const Index m = static_cast<Index>(povm.effects.size());
  if (dist.probs.size() != m) {
    throw validation_error("reconstruct: distribution length does not match the effect count");
  }
  const Matrix effect_matrix = build_effect_matrix(povm);
  {
    const Index rank = numerical_rank(effect_matrix, tol);
    if (rank != n * n) {
      std::ostringstream msg;
      msg << "reconstruct: povm is not IC (rank " << rank << ", deficit " << n * n - rank << ")";
      throw validation_error(msg.str());
    }
  }
  const Vector rhs = dist.probs.cast<Complex>();
  const Vector solution = effect_matrix.colPivHouseholderQr().solve(rhs);
  // Row i of the effect matrix pairs entry (k,j) of M_i with entry (j,k) of
  // rho, so the solved vector is the row-major flattening of rho transposed.
  Matrix estimate(n, n);
  for (Index k = 0; k < n; ++k) {
    for (Index j = 0; j < n; ++j) {
      estimate(j, k) = solution(k * n + j);
    }
  }
  estimate = 0.5 * (estimate + estimate.adjoint()).eval();
  const double trace = estimate.trace().real();
  if (std::abs(trace) < 1e-14) {
    throw internal_error("reconstruct: estimate has vanishing trace");
  }
  estimate /= trace;
  if (project_psd) {
    const auto [eigenvalues, vectors] = eig_hermitian(estimate);
    const RealVector clipped = eigenvalues.cwiseMax(0.0);
    estimate = vectors * (clipped / clipped.sum()).asDiagonal() * vectors.adjoint();
  }
  TomographyReport report;
  report.estimate = DensityState{std::move(estimate)};
  report.shots = dist.shots;
  report.residual = (effect_matrix * solution - rhs).norm();
  return report;
}

OutcomeDistribution sample_outcomes(const Povm& povm, const DensityState& rho, Index shots,
                                    std::uint64_t seed, const Tolerance& tol) {
  if (shots < 1) {
    throw validation_error("sample_outcomes: shots must be >= 1");
  }
  const OutcomeDistribution exact = probabilities(povm, rho, tol);
  const Index m = exact.probs.size();
  // Cumulative distribution; a non-complete povm keeps its missing weight in
  // an extra bucket that is sampled but never reported.
  RealVector cumulative(m + 1);
  double total = 0.0;
  for (Index i = 0; i < m; ++i) {
    total += std::max(0.0, exact.probs(i));
    cumulative(i) = total;
  }
  cumulative(m) = std::max(total, 1.0);
  std::vector<Index> counts(static_cast<std::size_t>(m) + 1, 0);
  Rng rng(seed);
  for (Index s = 0; s < shots; ++s) {
    const double u = rng.uniform() * cumulative(m);
    Index bucket = 0;
    while (bucket < m && u >= cumulative(bucket)) {
      ++bucket;
    }
    ++counts[static_cast<std::size_t>(bucket)];
  }
  OutcomeDistribution dist;
  dist.shots = shots;
  dist.probs.resize(m);
  for (Index i = 0; i < m; ++i) {
    dist.probs(i) = static_cast<double>(counts[static_cast<std::size_t>(i)]) /
                    static_cast<double>(shots);
  }
  return dist;
}

DensityState random_density(Index n, std::optional<Index> rank, std::uint64_t seed) {
  if (n < 1) {
    throw validation_error("random_density: n must be >= 1");
  }
  const Index r = rank.value_or(n);
  if (r < 1 || r > n) {
    throw validation_error("random_density: rank must be in [1, n]");
  }
  Rng rng(seed);
  const Matrix a = gaussian_matrix(n, r, rng);
  Matrix rho = a * a.adjoint();
  rho /= rho.trace().real();
  return DensityState{std::move(rho)};
}

TomographyReport run_experiment(const Povm& povm, const DensityState& rho,
                                std::optional<Index> shots, std::uint64_t seed,
                                std::optional<bool> project_psd, const Tolerance& tol) {
  const OutcomeDistribution dist = shots.has_value()
                                       ? sample_outcomes(povm, rho, *shots, seed, tol)
                                       : probabilities(povm, rho, tol);
  TomographyReport report = reconstruct(povm, dist, project_psd.value_or(shots.has_value()), tol);
  const Matrix difference = report.estimate.matrix - rho.matrix;
  report.hs_error = difference.norm();
  const auto [eigenvalues, vectors] = eig_hermitian(difference);
  report.trace_error = 0.5 * eigenvalues.cwiseAbs().sum();
  return report;
}

}  // namespace icmkit
