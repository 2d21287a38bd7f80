// POVM validation, effect-matrix flattening, IC rank tests, subspace
// compression, frame potential and trace-balance checks.

#include <doctest.h>

#include <cmath>
#include <vector>

#include "icmkit/linalg.hpp"
#include "icmkit/measurement.hpp"
#include "icmkit/rng.hpp"
#include "icmkit/types.hpp"

using namespace icmkit;

namespace {

Povm standard_projectors(Index n) {
  Povm povm;
  povm.dim = n;
  povm.complete = true;
  for (Index k = 0; k < n; ++k) {
    Matrix p = Matrix::Zero(n, n);
    p(k, k) = 1.0;
    povm.effects.push_back(Effect{p});
  }
  return povm;
}

}  // namespace

TEST_CASE("flatten_row_major uses the (k,j) -> k*n+j layout") {
  Matrix a(2, 2);
  a << Complex(1, 0), Complex(2, 0), Complex(3, 0), Complex(4, 0);
  const Vector v = flatten_row_major(a);
  REQUIRE(v.size() == 4);
  CHECK(v(0) == Complex(1, 0));
  CHECK(v(1) == Complex(2, 0));
  CHECK(v(2) == Complex(3, 0));
  CHECK(v(3) == Complex(4, 0));
}

TEST_CASE("validate(Povm) accepts projective measurements and rejects defects") {
  const Tolerance tol;
  validate(standard_projectors(3), tol);

  Povm not_hermitian = standard_projectors(2);
  not_hermitian.effects[0].matrix(0, 1) = Complex(0.5, 0.5);
  CHECK_THROWS_AS(validate(not_hermitian, tol), validation_error);

  Povm not_psd = standard_projectors(2);
  not_psd.effects[0].matrix(1, 1) = -0.2;
  CHECK_THROWS_AS(validate(not_psd, tol), validation_error);

  Povm bad_sum = standard_projectors(2);
  bad_sum.effects.pop_back();
  CHECK_THROWS_AS(validate(bad_sum, tol), validation_error);
  bad_sum.complete = false;
  validate(bad_sum, tol);  // fine once the completeness claim is dropped
}

TEST_CASE("canonical_ic_set is IC with n^2 rank-one effects") {
  const Tolerance tol;
  for (Index n : {2, 3, 4, 5}) {
    const Povm povm = canonical_ic_set(n);
    REQUIRE(static_cast<Index>(povm.effects.size()) == n * n);
    CHECK_FALSE(povm.complete);
    validate(povm, tol);
    const IcReport report = is_ic(povm, tol);
    CHECK(report.rank == n * n);
    CHECK(report.required == n * n);
    CHECK(report.is_ic);
    for (const auto& effect : povm.effects) {
      CHECK(numerical_rank(effect.matrix, tol) == 1);
    }
  }
}

TEST_CASE("is_ic reports the rank deficit of a plain basis measurement") {
  const Tolerance tol;
  const IcReport report = is_ic(standard_projectors(4), tol);
  CHECK(report.rank == 4);
  CHECK(report.required == 16);
  CHECK_FALSE(report.is_ic);
  CHECK(report.effect_count == 4);
}

TEST_CASE("build_effect_matrix stacks flattened effects as rows") {
  const Povm povm = standard_projectors(2);
  const Matrix stacked = build_effect_matrix(povm);
  REQUIRE(stacked.rows() == 2);
  REQUIRE(stacked.cols() == 4);
  CHECK(stacked(0, 0) == Complex(1, 0));
  CHECK(stacked(1, 3) == Complex(1, 0));
  CHECK(std::abs(stacked(0, 3)) == 0.0);
}

TEST_CASE("compress_effects restricts to the subspace blocks") {
  const Tolerance tol;
  const Povm povm = canonical_ic_set(3);
  const SubspaceBasis d = leading_coordinates_basis(3, 2);
  const Povm compressed = compress_effects(povm, d, tol);
  REQUIRE(compressed.dim == 2);
  REQUIRE(compressed.effects.size() == povm.effects.size());
  for (std::size_t i = 0; i < povm.effects.size(); ++i) {
    CHECK((compressed.effects[i].matrix - povm.effects[i].matrix.topLeftCorner(2, 2))
              .cwiseAbs()
              .maxCoeff() < 1e-14);
  }
}

TEST_CASE("is_ic_over_subspace sees full rank on an embedded IC set") {
  const Tolerance tol;
  // Embed the canonical C^2 set into C^4 as top-left blocks.
  const Povm small = canonical_ic_set(2);
  Povm embedded;
  embedded.dim = 4;
  embedded.complete = false;
  for (const auto& effect : small.effects) {
    Matrix big = Matrix::Zero(4, 4);
    big.topLeftCorner(2, 2) = effect.matrix;
    embedded.effects.push_back(Effect{big});
  }
  const IcReport over_d = is_ic_over_subspace(embedded, leading_coordinates_basis(4, 2), tol);
  CHECK(over_d.rank == 4);
  CHECK(over_d.is_ic);
  const IcReport full = is_ic(embedded, tol);
  CHECK_FALSE(full.is_ic);
}

TEST_CASE("make_complete rescales a spanning set into a POVM") {
  const Tolerance tol;
  for (Index n : {2, 3}) {
    const Povm complete = make_complete(canonical_ic_set(n), tol);
    CHECK(complete.complete);
    validate(complete, tol);
    Matrix sum = Matrix::Zero(n, n);
    for (const auto& effect : complete.effects) {
      sum += effect.matrix;
    }
    CHECK((sum - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(is_ic(complete, tol).is_ic);
  }
}

TEST_CASE("compress_ic_over_subspace yields a complete IC measurement on D") {
  const Tolerance tol;
  const Index n = 4;
  const Index d = 2;
  const Povm big = make_complete(canonical_ic_set(n), tol);
  const SubspaceBasis basis = leading_coordinates_basis(n, d);
  const Povm reduced = compress_ic_over_subspace(big, basis, tol);
  CHECK(reduced.dim == n);  // effects stay on the ambient space
  CHECK(reduced.complete);
  CHECK(static_cast<Index>(reduced.effects.size()) == d * d);
  validate(reduced, tol);
  CHECK(is_ic_over_subspace(reduced, basis, tol).is_ic);
}

TEST_CASE("compress_ic_over_subspace requires a complete input") {
  const Tolerance tol;
  CHECK_THROWS_AS(
      compress_ic_over_subspace(canonical_ic_set(3), leading_coordinates_basis(3, 2), tol),
      validation_error);
}

TEST_CASE("frame_potential sums squared overlaps over ordered pairs") {
  UnitVectorSet set;
  Vector e0(2), e1(2), plus(2);
  e0 << 1, 0;
  e1 << 0, 1;
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  set.kets = {e0, e1, plus};
  // Pairs: 3 self-overlaps of 1, plus |<e0|plus>|^2 = |<e1|plus>|^2 = 1/2
  // each counted twice.
  CHECK(frame_potential(set) == doctest::Approx(3.0 + 4.0 * 0.5).epsilon(1e-12));
}

TEST_CASE("trace balance distinguishes uniform from skewed measurements") {
  const Tolerance tol;
  const Index n = 3;
  const SubspaceBasis full = leading_coordinates_basis(n, n);
  const TraceBalanceReport uniform = trace_balance_check(standard_projectors(n), full, tol);
  CHECK(uniform.balanced);
  REQUIRE(uniform.averages.size() == 3);
  CHECK(uniform.averages[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  Povm skewed = standard_projectors(n);
  skewed.complete = false;
  skewed.effects[0].matrix *= 0.5;
  CHECK_FALSE(trace_balance_check(skewed, full, tol).balanced);
}

TEST_CASE("trace_optimal_check needs balance plus completeness over D") {
  const Tolerance tol;
  const Index n = 3;
  const SubspaceBasis full = leading_coordinates_basis(n, n);
  CHECK(trace_optimal_check(standard_projectors(n), full, tol));
  // The canonical set spans but does not resolve the identity.
  CHECK_FALSE(trace_optimal_check(canonical_ic_set(n), full, tol));
}

TEST_CASE("IC rank is invariant under invertible recombination of effects") {
  const Tolerance tol;
  Rng rng(99);
  const Povm povm = canonical_ic_set(3);
  const Index m = static_cast<Index>(povm.effects.size());
  // Random real invertible mixing preserves the span of the effects.
  RealMatrix mix(m, m);
  for (Index r = 0; r < m; ++r) {
    for (Index c = 0; c < m; ++c) {
      mix(r, c) = rng.normal();
    }
  }
  mix += 10.0 * RealMatrix::Identity(m, m);  // keep it well-conditioned
  Povm mixed;
  mixed.dim = povm.dim;
  mixed.complete = false;
  for (Index r = 0; r < m; ++r) {
    Matrix sum = Matrix::Zero(povm.dim, povm.dim);
    for (Index c = 0; c < m; ++c) {
      sum += mix(r, c) * povm.effects[static_cast<std::size_t>(c)].matrix;
    }
    mixed.effects.push_back(Effect{sum});
  }
  Matrix stacked = build_effect_matrix(mixed);
  CHECK(numerical_rank(stacked, tol) == 9);
}
