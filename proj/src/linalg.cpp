// linalg.cpp

#include "icmkit/linalg.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace icmkit {

void validate(const Tolerance& tol) {
  if (!(tol.rel_rank_eps > 0.0) || !(tol.abs_eps > 0.0)) {
    throw validation_error("tolerances must be strictly positive");
  }
  if (!(tol.rel_rank_eps < 1.0)) {
    throw validation_error("rel_rank_eps must be < 1");
  }
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Index numerical_rank(const Matrix& a, const Tolerance& tol) {
  validate(tol);
  if (a.rows() == 0 || a.cols() == 0) {
    throw validation_error("numerical_rank: empty matrix");
  }
  Eigen::BDCSVD<Matrix> svd(a);
  if (svd.info() != Eigen::Success) {
    throw internal_error("numerical_rank: SVD did not converge");
  }
  const auto& sigma = svd.singularValues();
  const double sigma_max = sigma.size() > 0 ? sigma(0) : 0.0;
  if (sigma_max == 0.0) {
    return 0;
  }
  const double cutoff =
      tol.rel_rank_eps * sigma_max * static_cast<double>(std::max(a.rows(), a.cols()));
  Index rank = 0;
  for (Index k = 0; k < sigma.size(); ++k) {
    if (sigma(k) > cutoff) {
      ++rank;
    }
  }
  return rank;
}

std::vector<Vector> gram_schmidt(const std::vector<Vector>& vectors, const Tolerance& tol) {
  validate(tol);
  std::vector<Vector> basis;
  if (vectors.empty()) {
    return basis;
  }
  const Index dim = vectors.front().size();
  for (const auto& v : vectors) {
    if (v.size() != dim) {
      throw validation_error("gram_schmidt: vectors must share one dimension");
    }
  }
  basis.reserve(vectors.size());
  for (const auto& v : vectors) {
    Vector r = v;
    // Two projection passes keep orthogonality near machine precision even
    // for nearly dependent inputs.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) {
        r -= b.dot(r) * b;
      }
    }
    const double norm = r.norm();
    if (norm > tol.abs_eps) {
      basis.push_back(r / norm);
    }
  }
  return basis;
}

Matrix complete_to_unitary(const Matrix& cols, const Tolerance& tol) {
  validate(tol);
  const Index m = cols.rows();
  const Index k = cols.cols();
  if (m < k) {
    throw validation_error("complete_to_unitary: more columns than rows");
  }
  const double defect = (cols.adjoint() * cols - Matrix::Identity(k, k)).cwiseAbs().maxCoeff();
  if (defect > tol.abs_eps) {
    std::ostringstream msg;
    msg << "complete_to_unitary: input columns not orthonormal (defect " << defect << ")";
    throw validation_error(msg.str());
  }
  Matrix u(m, m);
  u.leftCols(k) = cols;
  Index filled = k;
  // Candidates are the standard basis vectors in index order; a candidate is
  // accepted when its residual against the accepted columns stays above a
  // fixed threshold. At least one candidate always clears 1/sqrt(m), so a
  // full rejected pass means the input itself was defective.
  while (filled < m) {
    const Index before = filled;
    for (Index c = 0; c < m && filled < m; ++c) {
      Vector r = Vector::Zero(m);
      r(c) = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        r -= u.leftCols(filled) * (u.leftCols(filled).adjoint() * r);
      }
      const double norm = r.norm();
      if (norm > 1e-6) {
        u.col(filled) = r / norm;
        ++filled;
      }
    }
    if (filled == before) {
      throw internal_error("complete_to_unitary: completion stalled");
    }
  }
  return u;
}

std::pair<RealVector, Matrix> eig_hermitian(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw validation_error("eig_hermitian: matrix must be square");
  }
  const Matrix sym = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw internal_error("eig_hermitian: eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Matrix gaussian_matrix(Index rows, Index cols, Rng& rng) {
  Matrix out(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      out(i, j) = Complex(rng.normal(), rng.normal());
    }
  }
  return out;
}

Matrix haar_random_unitary(Index n, std::uint64_t seed) {
  if (n < 1) {
    throw validation_error("haar_random_unitary: n must be >= 1");
  }
  Rng rng(seed);
  const Matrix g = gaussian_matrix(n, n, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phase ambiguity of QR so the map from Gaussian matrices to
  // unitaries is well defined (and the result Haar distributed).
  for (Index j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    const double mag = std::abs(d);
    q.col(j) *= (mag > 0.0) ? (d / mag) : Complex(1.0, 0.0);
  }
  return q;
}

namespace {

// Max-norm of the commutator [a, b].
double commutator_norm(const Matrix& a, const Matrix& b) {
  return (a * b - b * a).cwiseAbs().maxCoeff();
}

}  // namespace

std::vector<Vector> common_eigenbasis(const std::vector<Matrix>& commuting,
                                      const Tolerance& tol,
                                      std::uint64_t seed) {
  validate(tol);
  if (commuting.empty()) {
    throw validation_error("common_eigenbasis: empty input");
  }
  const Index n = commuting.front().rows();
  for (const auto& a : commuting) {
    if (a.rows() != n || a.cols() != n) {
      throw validation_error("common_eigenbasis: inputs must all be n x n");
    }
    if (commutator_norm(a, Matrix(a.adjoint())) > tol.abs_eps) {
      throw validation_error("common_eigenbasis: input is not normal");
    }
  }
  for (std::size_t i = 0; i < commuting.size(); ++i) {
    for (std::size_t j = i + 1; j < commuting.size(); ++j) {
      if (commutator_norm(commuting[i], commuting[j]) > tol.abs_eps) {
        throw validation_error("common_eigenbasis: inputs do not commute");
      }
    }
  }
  // Split every input into Hermitian and anti-Hermitian parts; commuting
  // normal matrices make all the parts commute, so a random real combination
  // separates the joint eigenspaces with probability one.
  std::vector<Matrix> parts;
  parts.reserve(2 * commuting.size());
  for (const auto& a : commuting) {
    parts.push_back(0.5 * (a + a.adjoint()));
    parts.push_back(Complex(0.0, -0.5) * (a - a.adjoint()));
  }
  const int max_attempts = 16;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(attempt)));
    Matrix combo = Matrix::Zero(n, n);
    for (const auto& p : parts) {
      combo += rng.normal() * p;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(combo);
    if (solver.info() != Eigen::Success) {
      continue;
    }
    const Matrix& vecs = solver.eigenvectors();
    bool ok = true;
    for (const auto& a : commuting) {
      const double scale = 1.0 + a.cwiseAbs().maxCoeff();
      for (Index c = 0; c < n && ok; ++c) {
        const Vector v = vecs.col(c);
        const Complex lambda = v.dot(a * v);
        if ((a * v - lambda * v).norm() > 1e-9 * scale) {
          ok = false;
        }
      }
      if (!ok) {
        break;
      }
    }
    if (ok) {
      std::vector<Vector> basis;
      basis.reserve(n);
      for (Index c = 0; c < n; ++c) {
        basis.push_back(vecs.col(c));
      }
      return basis;
    }
  }
  throw internal_error("common_eigenbasis: failed to separate joint eigenspaces");
}

}  // namespace icmkit
