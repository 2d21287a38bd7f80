// criteria.cpp

#include "icmkit/criteria.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <limits>

#include "icmkit/linalg.hpp"

namespace icmkit {

std::vector<Matrix> q_operators(const std::vector<Vector>& basis, const Tolerance& tol) {
  validate(tol);
  if (basis.empty()) {
    throw validation_error("q_operators: empty basis");
  }
  const Index n = basis.front().size();
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (basis[i].size() != n) {
      throw validation_error("q_operators: kets must share one dimension");
    }
    for (std::size_t j = i; j < basis.size(); ++j) {
      const Complex inner = basis[i].dot(basis[j]);
      const double target = (i == j) ? 1.0 : 0.0;
      if (std::abs(inner - target) > tol.abs_eps) {
        throw validation_error("q_operators: basis is not orthonormal");
      }
    }
  }
  std::vector<Matrix> out;
  out.reserve(basis.size());
  const Matrix uniform = Matrix::Identity(n, n) / static_cast<double>(n);
  for (const auto& ket : basis) {
    out.push_back(ket * ket.adjoint() - uniform);
  }
  return out;
}

VolumeReport volume_of_operator_groups(const std::vector<std::vector<Matrix>>& groups, Index dim,
                                       const Tolerance& tol) {
  validate(tol);
  if (dim < 1 || groups.empty()) {
    throw validation_error("volume_of_operator_groups: need dim >= 1 and at least one group");
  }
  VolumeReport report;
  std::vector<Vector> rows;
  for (const auto& group : groups) {
    std::vector<Vector> flattened;
    flattened.reserve(group.size());
    for (const auto& op : group) {
      if (op.rows() != dim || op.cols() != dim) {
        throw validation_error("volume_of_operator_groups: operator dimension mismatch");
      }
      flattened.push_back(flatten_row_major(op));
    }
    std::vector<Vector> survivors = gram_schmidt(flattened, tol);
    report.per_subspace_dims.push_back(static_cast<Index>(survivors.size()));
    for (auto& row : survivors) {
      rows.push_back(std::move(row));
    }
  }
  const Index row_count = static_cast<Index>(rows.size());
  report.operator_count = row_count;
  Matrix stacked(row_count, dim * dim);
  for (Index r = 0; r < row_count; ++r) {
    stacked.row(r) = rows[static_cast<std::size_t>(r)].transpose();
  }
  Eigen::BDCSVD<Matrix> svd(stacked);
  if (svd.info() != Eigen::Success) {
    throw internal_error("volume_of_operator_groups: SVD failed to converge");
  }
  const RealVector& sigma = svd.singularValues();
  const double cutoff = tol.rel_rank_eps * sigma.maxCoeff() *
                        static_cast<double>(std::max(stacked.rows(), stacked.cols()));
  Index rank = 0;
  for (Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > cutoff) {
      ++rank;
    }
  }
  if (rank < row_count) {
    report.volume = 0.0;
    report.log10_volume = -std::numeric_limits<double>::infinity();
    return report;
  }
  double log10_volume = 0.0;
  for (Index i = 0; i < row_count; ++i) {
    log10_volume += std::log10(sigma(i));
  }
  report.log10_volume = log10_volume;
  report.volume = std::pow(10.0, log10_volume);
  return report;
}

VolumeReport information_volume(const BasisFamily& fam, const Tolerance& tol) {
  validate(fam, tol);
  std::vector<std::vector<Matrix>> groups;
  groups.reserve(fam.bases.size());
  for (const auto& basis : fam.bases) {
    groups.push_back(q_operators(basis, tol));
  }
  return volume_of_operator_groups(groups, fam.dim, tol);
}

VolumeReport single_measurement_volume(const Povm& povm, const Tolerance& tol) {
  validate(povm, tol);
  if (!povm.complete) {
    throw validation_error("single_measurement_volume: povm must be complete");
  }
  const Index m = static_cast<Index>(povm.effects.size());
  std::vector<Vector> kets;
  kets.reserve(static_cast<std::size_t>(m));
  for (const auto& effect : povm.effects) {
    kets.push_back(rank_one_ket(effect.matrix));
  }
  for (std::size_t i = 0; i < kets.size(); ++i) {
    for (std::size_t j = i; j < kets.size(); ++j) {
      const Complex inner = kets[i].dot(kets[j]);
      const double target = (i == j) ? 1.0 : 0.0;
      if (std::abs(inner - target) > tol.abs_eps) {
        throw validation_error("single_measurement_volume: povm is not projective");
      }
    }
  }
  const Matrix uniform = Matrix::Identity(povm.dim, povm.dim) / static_cast<double>(m);
  std::vector<Matrix> group;
  group.reserve(static_cast<std::size_t>(m - 1));
  for (Index k = 0; k + 1 < m; ++k) {
    group.push_back(povm.effects[static_cast<std::size_t>(k)].matrix - uniform);
  }
  return volume_of_operator_groups({group}, povm.dim, tol);
}

std::vector<VolumeSurveyRow> volume_survey(Index n, const std::vector<std::uint64_t>& seeds,
                                           const Tolerance& tol) {
  if (n < 2) {
    throw validation_error("volume_survey: n must be >= 2");
  }
  std::vector<VolumeSurveyRow> rows;
  const auto add = [&](const char* scheme, std::optional<std::uint64_t> seed,
                       const BasisFamily& fam) {
    VolumeSurveyRow row;
    row.n = n;
    row.scheme = scheme;
    row.seed = seed;
    row.report = information_volume(fam, tol);
    rows.push_back(std::move(row));
  };
  const bool prime_odd = [n] {
    if (n < 3 || n % 2 == 0) {
      return false;
    }
    for (Index d = 3; d * d <= n; d += 2) {
      if (n % d == 0) {
        return false;
      }
    }
    return true;
  }();
  if (n == 2 || n == 4 || prime_odd) {
    add("mub", std::nullopt, mub_family(n));
  }
  if (n == 4 || n == 6) {
    add("mpicm", std::nullopt, mpicm_explicit(n));
  } else if (n % 2 == 0 && n >= 10) {
    add("mpicm", std::nullopt, mpicm_general(n));
  }
  for (const auto seed : seeds) {
    add("random", seed, random_bases(n, n + 1, seed));
  }
  return rows;
}

}  // namespace icmkit
