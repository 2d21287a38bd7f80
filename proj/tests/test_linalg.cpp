// Dense linear-algebra helpers: Kronecker products, numerical rank,
// orthonormalization, eigendecompositions, Haar sampling, joint eigenbases.

#include <doctest.h>

#include <cmath>
#include <vector>

#include "icmkit/linalg.hpp"
#include "icmkit/rng.hpp"
#include "icmkit/types.hpp"

using namespace icmkit;

namespace {

Matrix random_matrix(Index rows, Index cols, Rng& rng) {
  return gaussian_matrix(rows, cols, rng);
}

Matrix random_hermitian(Index n, Rng& rng) {
  const Matrix a = gaussian_matrix(n, n, rng);
  return 0.5 * (a + a.adjoint());
}

}  // namespace

TEST_CASE("kron matches the block definition") {
  Matrix a(2, 2);
  a << Complex(1, 0), Complex(0, 1), Complex(2, 0), Complex(0, -1);
  Matrix b(2, 3);
  b << 1, 2, 3, 4, 5, 6;
  const Matrix k = kron(a, b);
  REQUIRE(k.rows() == 4);
  REQUIRE(k.cols() == 6);
  for (Index i = 0; i < 4; ++i) {
    for (Index j = 0; j < 6; ++j) {
      const Complex expected = a(i / 2, j / 3) * b(i % 2, j % 3);
      CHECK(std::abs(k(i, j) - expected) == 0.0);
    }
  }
}

TEST_CASE("kron is associative in dimensions") {
  Rng rng(11);
  const Matrix a = random_matrix(2, 3, rng);
  const Matrix b = random_matrix(3, 2, rng);
  const Matrix c = random_matrix(2, 2, rng);
  const Matrix left = kron(kron(a, b), c);
  const Matrix right = kron(a, kron(b, c));
  CHECK((left - right).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("numerical_rank detects constructed deficiencies") {
  const Tolerance tol;
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const Index inner = 1 + static_cast<Index>(rng.below(4));
    const Matrix product = random_matrix(6, inner, rng) * random_matrix(inner, 7, rng);
    CHECK(numerical_rank(product, tol) == inner);
  }
  CHECK(numerical_rank(Matrix::Identity(9, 9), tol) == 9);
  CHECK(numerical_rank(Matrix::Zero(4, 5), tol) == 0);
}

TEST_CASE("numerical_rank survives tiny perturbations of a deficient matrix") {
  const Tolerance tol;
  Rng rng(17);
  Matrix a = random_matrix(8, 2, rng) * random_matrix(2, 8, rng);
  a += 1e-14 * random_matrix(8, 8, rng);
  CHECK(numerical_rank(a, tol) == 2);
}

TEST_CASE("gram_schmidt yields an orthonormal spanning set and drops dependents") {
  const Tolerance tol;
  Rng rng(23);
  std::vector<Vector> vectors;
  for (int i = 0; i < 3; ++i) {
    vectors.push_back(random_matrix(6, 1, rng).col(0));
  }
  vectors.push_back(vectors[0] + vectors[1]);  // dependent
  vectors.push_back(random_matrix(6, 1, rng).col(0));
  const std::vector<Vector> basis = gram_schmidt(vectors, tol);
  REQUIRE(basis.size() == 4);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = i; j < basis.size(); ++j) {
      const double target = (i == j) ? 1.0 : 0.0;
      CHECK(std::abs(basis[i].dot(basis[j]) - Complex(target, 0)) < 1e-10);
    }
  }
  // Every input is reproduced by its projection onto the output span.
  for (const auto& v : vectors) {
    Vector projected = Vector::Zero(6);
    for (const auto& b : basis) {
      projected += b.dot(v) * b;
    }
    CHECK((projected - v).norm() < 1e-9);
  }
}

TEST_CASE("complete_to_unitary extends orthonormal columns") {
  const Tolerance tol;
  Rng rng(31);
  const Matrix q = haar_random_unitary(7, 99).leftCols(3);
  const Matrix u = complete_to_unitary(q, tol);
  REQUIRE(u.rows() == 7);
  REQUIRE(u.cols() == 7);
  CHECK((u.leftCols(3) - q).cwiseAbs().maxCoeff() == 0.0);
  CHECK((u.adjoint() * u - Matrix::Identity(7, 7)).cwiseAbs().maxCoeff() < 1e-10);
  Matrix bad = q;
  bad.col(1) *= 2.0;
  CHECK_THROWS_AS(complete_to_unitary(bad, tol), validation_error);
}

TEST_CASE("eig_hermitian reconstructs random Hermitian matrices") {
  Rng rng(41);
  for (Index n : {3, 17, 50}) {
    const Matrix a = random_hermitian(n, rng);
    const auto [values, vectors] = eig_hermitian(a);
    const Matrix rebuilt = vectors * values.asDiagonal() * vectors.adjoint();
    CHECK((rebuilt - a).cwiseAbs().maxCoeff() <= 1e-10);
    for (Index i = 1; i < n; ++i) {
      CHECK(values(i - 1) <= values(i));
    }
  }
}

TEST_CASE("haar_random_unitary is unitary and seed-deterministic") {
  const Matrix u1 = haar_random_unitary(6, 12345);
  const Matrix u2 = haar_random_unitary(6, 12345);
  const Matrix u3 = haar_random_unitary(6, 54321);
  CHECK((u1 - u2).cwiseAbs().maxCoeff() == 0.0);
  CHECK((u1 - u3).cwiseAbs().maxCoeff() > 1e-3);
  CHECK((u1.adjoint() * u1 - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("haar_random_unitary has no column-phase bias") {
  // With the phase fix the first row would otherwise be real-positive.
  int nontrivial_phase = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Matrix u = haar_random_unitary(3, seed);
    if (std::abs(u(0, 0).imag()) > 1e-3) {
      ++nontrivial_phase;
    }
  }
  CHECK(nontrivial_phase > 10);
}

TEST_CASE("common_eigenbasis jointly diagonalizes commuting normals") {
  const Tolerance tol;
  Rng rng(7);
  const Matrix u = haar_random_unitary(5, 77);
  RealVector d1(5), d2(5);
  for (Index i = 0; i < 5; ++i) {
    d1(i) = rng.normal();
    d2(i) = rng.normal();
  }
  const Matrix a = u * d1.cast<Complex>().asDiagonal() * u.adjoint();
  const Matrix b = u * d2.cast<Complex>().asDiagonal() * u.adjoint();
  const std::vector<Vector> basis = common_eigenbasis({a, b}, tol);
  REQUIRE(basis.size() == 5);
  for (const auto& v : basis) {
    CHECK(std::abs(v.norm() - 1.0) < 1e-10);
    for (const Matrix& op : {a, b}) {
      const Vector image = op * v;
      const Complex lambda = v.dot(image);
      CHECK((image - lambda * v).norm() < 1e-8);
    }
  }
}

TEST_CASE("common_eigenbasis rejects non-commuting input") {
  const Tolerance tol;
  Matrix x(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  z << 1, 0, 0, -1;
  CHECK_THROWS_AS(common_eigenbasis({x, z}, tol), validation_error);
}

TEST_CASE("mix_seed decorrelates streams") {
  CHECK(mix_seed(1, 0) != mix_seed(1, 1));
  CHECK(mix_seed(1, 0) != mix_seed(2, 0));
  CHECK(mix_seed(3, 4) == mix_seed(3, 4));
}

TEST_CASE("Rng uniform and normal look sane") {
  Rng rng(2024);
  double sum = 0.0;
  double sum_sq = 0.0;
  const int count = 20000;
  for (int i = 0; i < count; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const double g = rng.normal();
    sum += g;
    sum_sq += g * g;
  }
  CHECK(std::abs(sum / count) < 0.05);
  CHECK(std::abs(sum_sq / count - 1.0) < 0.05);
  for (int i = 0; i < 100; ++i) {
    CHECK(rng.below(7) < 7);
  }
}
