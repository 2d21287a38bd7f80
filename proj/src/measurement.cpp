// measurement.cpp

#include "icmkit/measurement.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace icmkit {

void validate(const Povm& povm, const Tolerance& tol) {
  validate(tol);
  if (povm.dim < 1) {
    throw validation_error("povm: dim must be >= 1");
  }
  if (povm.effects.empty()) {
    throw validation_error("povm: no effects");
  }
  Matrix sum = Matrix::Zero(povm.dim, povm.dim);
  for (std::size_t i = 0; i < povm.effects.size(); ++i) {
    const Matrix& m = povm.effects[i].matrix;
    if (m.rows() != povm.dim || m.cols() != povm.dim) {
      std::ostringstream msg;
      msg << "povm: effect " << i << " is " << m.rows() << "x" << m.cols()
          << ", expected " << povm.dim << "x" << povm.dim;
      throw validation_error(msg.str());
    }
    if (!m.allFinite()) {
      throw validation_error("povm: effect has non-finite entries");
    }
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tol.abs_eps) {
      std::ostringstream msg;
      msg << "povm: effect " << i << " is not Hermitian";
      throw validation_error(msg.str());
    }
    const auto [eigenvalues, vectors] = eig_hermitian(m);
    if (eigenvalues.size() > 0 && eigenvalues(0) < -tol.abs_eps) {
      std::ostringstream msg;
      msg << "povm: effect " << i << " has negative eigenvalue " << eigenvalues(0);
      throw validation_error(msg.str());
    }
    sum += m;
  }
  if (povm.complete) {
    const double defect = (sum - Matrix::Identity(povm.dim, povm.dim)).cwiseAbs().maxCoeff();
    if (defect > tol.abs_eps) {
      std::ostringstream msg;
      msg << "povm: marked complete but effects sum off identity by " << defect;
      throw validation_error(msg.str());
    }
  }
}

void validate(const SubspaceBasis& basis, const Tolerance& tol) {
  validate(tol);
  if (basis.kets.empty()) {
    throw validation_error("subspace basis: no kets");
  }
  for (const auto& ket : basis.kets) {
    if (ket.size() != basis.dim_ambient) {
      throw validation_error("subspace basis: ket dimension mismatch");
    }
  }
  for (std::size_t i = 0; i < basis.kets.size(); ++i) {
    for (std::size_t j = i; j < basis.kets.size(); ++j) {
      const Complex inner = basis.kets[i].dot(basis.kets[j]);
      const double target = (i == j) ? 1.0 : 0.0;
      if (std::abs(inner - target) > tol.abs_eps) {
        throw validation_error("subspace basis: kets are not orthonormal");
      }
    }
  }
}

Povm make_povm(std::vector<Matrix> effects, bool complete, const Tolerance& tol) {
  Povm povm;
  if (effects.empty()) {
    throw validation_error("make_povm: no effects");
  }
  povm.dim = effects.front().rows();
  povm.complete = complete;
  povm.effects.reserve(effects.size());
  for (auto& m : effects) {
    povm.effects.push_back(Effect{std::move(m)});
  }
  validate(povm, tol);
  return povm;
}

Vector flatten_row_major(const Matrix& a) {
  const Index n = a.cols();
  Vector v(a.rows() * n);
  for (Index k = 0; k < a.rows(); ++k) {
    for (Index j = 0; j < n; ++j) {
      v(k * n + j) = a(k, j);
    }
  }
  return v;
}

Matrix build_effect_matrix(const Povm& povm) {
  const Index n = povm.dim;
  Matrix out(static_cast<Index>(povm.effects.size()), n * n);
  for (std::size_t i = 0; i < povm.effects.size(); ++i) {
    out.row(static_cast<Index>(i)) = flatten_row_major(povm.effects[i].matrix).transpose();
  }
  return out;
}

IcReport is_ic(const Povm& povm, const Tolerance& tol) {
  IcReport report;
  report.effect_count = static_cast<Index>(povm.effects.size());
  report.required = povm.dim * povm.dim;
  report.rank = numerical_rank(build_effect_matrix(povm), tol);
  report.is_ic = report.rank == report.required;
  return report;
}

Povm compress_effects(const Povm& povm, const SubspaceBasis& d_basis, const Tolerance& tol) {
  validate(d_basis, tol);
  if (d_basis.dim_ambient != povm.dim) {
    throw validation_error("compress_effects: subspace ambient dim != povm dim");
  }
  const Index d = static_cast<Index>(d_basis.kets.size());
  Matrix b(povm.dim, d);
  for (Index c = 0; c < d; ++c) {
    b.col(c) = d_basis.kets[static_cast<std::size_t>(c)];
  }
  Povm out;
  out.dim = d;
  out.effects.reserve(povm.effects.size());
  Matrix sum = Matrix::Zero(d, d);
  for (const auto& effect : povm.effects) {
    Matrix block = b.adjoint() * effect.matrix * b;
    sum += block;
    out.effects.push_back(Effect{std::move(block)});
  }
  out.complete = (sum - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() <= tol.abs_eps;
  return out;
}

IcReport is_ic_over_subspace(const Povm& povm, const SubspaceBasis& d_basis,
                             const Tolerance& tol) {
  const Povm compressed = compress_effects(povm, d_basis, tol);
  return is_ic(compressed, tol);
}

Povm compress_ic_over_subspace(const Povm& povm, const SubspaceBasis& d_basis,
                               const Tolerance& tol) {
  if (!povm.complete) {
    throw validation_error("compress_ic_over_subspace: povm must be complete");
  }
  const Povm compressed = compress_effects(povm, d_basis, tol);
  const Index d = compressed.dim;
  const Index required = d * d;
  {
    const IcReport report = is_ic(compressed, tol);
    if (!report.is_ic) {
      std::ostringstream msg;
      msg << "compress_ic_over_subspace: povm is not IC over the subspace (rank "
          << report.rank << " < " << required << ")";
      throw validation_error(msg.str());
    }
  }
  // Greedy maximal independent subset of compressed effects, index order.
  std::vector<Index> selected;
  Matrix stacked(required, required);
  Index rank = 0;
  for (Index i = 0; i < static_cast<Index>(compressed.effects.size()) && rank < required; ++i) {
    stacked.row(rank) =
        flatten_row_major(compressed.effects[static_cast<std::size_t>(i)].matrix).transpose();
    const Index candidate_rank = numerical_rank(stacked.topRows(rank + 1), tol);
    if (candidate_rank > rank) {
      selected.push_back(i);
      rank = candidate_rank;
    }
  }
  if (rank < required) {
    throw internal_error("compress_ic_over_subspace: failed to select a full basis");
  }
  // Completing effect and its expansion over the selected compressed blocks.
  Matrix m0 = Matrix::Identity(povm.dim, povm.dim);
  for (Index i : selected) {
    m0 -= povm.effects[static_cast<std::size_t>(i)].matrix;
  }
  Matrix b(povm.dim, d);
  for (Index c = 0; c < d; ++c) {
    b.col(c) = d_basis.kets[static_cast<std::size_t>(c)];
  }
  const Vector m0_flat = flatten_row_major(b.adjoint() * m0 * b);
  const Vector coeffs = stacked.transpose().colPivHouseholderQr().solve(m0_flat);
  Index merge_at = -1;
  for (Index k = 0; k < required; ++k) {
    if (std::abs(coeffs(k) + 1.0) > tol.abs_eps) {
      merge_at = k;
      break;
    }
  }
  if (merge_at < 0) {
    throw internal_error("compress_ic_over_subspace: every expansion coefficient is -1");
  }
  Povm out;
  out.dim = povm.dim;
  out.complete = true;
  out.effects.reserve(static_cast<std::size_t>(required));
  for (Index k = 0; k < required; ++k) {
    Matrix m = povm.effects[static_cast<std::size_t>(selected[static_cast<std::size_t>(k)])].matrix;
    if (k == merge_at) {
      m += m0;
    }
    out.effects.push_back(Effect{std::move(m)});
  }
  return out;
}

double frame_potential(const UnitVectorSet& s) {
  double total = 0.0;
  for (const auto& x : s.kets) {
    for (const auto& y : s.kets) {
      total += std::norm(x.dot(y));
    }
  }
  return total;
}

TraceBalanceReport trace_balance_check(const Povm& povm, const SubspaceBasis& d_basis,
                                       const Tolerance& tol) {
  const Povm compressed = compress_effects(povm, d_basis, tol);
  const double d = static_cast<double>(compressed.dim);
  TraceBalanceReport report;
  report.averages.reserve(compressed.effects.size());
  for (const auto& effect : compressed.effects) {
    report.averages.push_back(effect.matrix.trace().real() / d);
  }
  const auto [lo, hi] = std::minmax_element(report.averages.begin(), report.averages.end());
  report.balanced = (*hi - *lo) <= tol.abs_eps;
  return report;
}

bool trace_optimal_check(const Povm& povm, const SubspaceBasis& d_basis, const Tolerance& tol) {
  const TraceBalanceReport balance = trace_balance_check(povm, d_basis, tol);
  if (!balance.balanced) {
    return false;
  }
  const Povm compressed = compress_effects(povm, d_basis, tol);
  Matrix sum = Matrix::Zero(compressed.dim, compressed.dim);
  for (const auto& effect : compressed.effects) {
    sum += effect.matrix;
  }
  return (sum - Matrix::Identity(compressed.dim, compressed.dim)).cwiseAbs().maxCoeff() <=
         tol.abs_eps;
}

Povm canonical_ic_set(Index n) {
  if (n < 1) {
    throw validation_error("canonical_ic_set: n must be >= 1");
  }
  Povm povm;
  povm.dim = n;
  povm.complete = false;
  povm.effects.reserve(static_cast<std::size_t>(n * n));
  for (Index s = 0; s < n; ++s) {
    Matrix m = Matrix::Zero(n, n);
    m(s, s) = 1.0;
    povm.effects.push_back(Effect{std::move(m)});
  }
  const auto pair_projector = [n](Index j, Index k, Complex phase) {
    Vector v = Vector::Zero(n);
    v(j) = 1.0;
    v(k) = phase;
    return Matrix(0.5 * v * v.adjoint());
  };
  for (Index j = 0; j < n; ++j) {
    for (Index k = j + 1; k < n; ++k) {
      povm.effects.push_back(Effect{pair_projector(j, k, Complex(1.0, 0.0))});
    }
  }
  for (Index j = 0; j < n; ++j) {
    for (Index k = j + 1; k < n; ++k) {
      povm.effects.push_back(Effect{pair_projector(j, k, Complex(0.0, 1.0))});
    }
  }
  return povm;
}

Povm make_complete(const Povm& povm, const Tolerance& tol) {
  validate(tol);
  Matrix sum = Matrix::Zero(povm.dim, povm.dim);
  for (const auto& effect : povm.effects) {
    sum += effect.matrix;
  }
  const auto [eigenvalues, vectors] = eig_hermitian(sum);
  if (eigenvalues(0) <= tol.abs_eps) {
    throw validation_error("make_complete: effect sum is not positive definite");
  }
  const Matrix inv_sqrt =
      vectors * eigenvalues.cwiseSqrt().cwiseInverse().asDiagonal() * vectors.adjoint();
  Povm out;
  out.dim = povm.dim;
  out.complete = true;
  out.effects.reserve(povm.effects.size());
  for (const auto& effect : povm.effects) {
    out.effects.push_back(Effect{inv_sqrt * effect.matrix * inv_sqrt});
  }
  return out;
}

SubspaceBasis leading_coordinates_basis(Index dim_ambient, Index d) {
  if (d < 1 || d > dim_ambient) {
    throw validation_error("leading_coordinates_basis: need 1 <= d <= dim_ambient");
  }
  SubspaceBasis basis;
  basis.dim_ambient = dim_ambient;
  basis.kets.reserve(static_cast<std::size_t>(d));
  for (Index k = 0; k < d; ++k) {
    Vector v = Vector::Zero(dim_ambient);
    v(k) = 1.0;
    basis.kets.push_back(std::move(v));
  }
  return basis;
}

}  // namespace icmkit
