// Born-rule probabilities, linear inversion, sampling and the end-to-end
// experiment driver.

#include <doctest.h>

#include <cmath>
#include <optional>
#include <string>

#include "icmkit/constructions.hpp"
#include "icmkit/linalg.hpp"
#include "icmkit/measurement.hpp"
#include "icmkit/tomography.hpp"
#include "icmkit/types.hpp"

using namespace icmkit;

namespace {

const Tolerance kTol;

DensityState maximally_mixed(Index n) {
  return DensityState{Matrix::Identity(n, n) / static_cast<double>(n)};
}

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

TEST_CASE("validate(DensityState) enforces the state invariants") {
  validate(maximally_mixed(3), kTol);
  validate(random_density(4, std::nullopt, 5), kTol);

  DensityState bad_trace = maximally_mixed(2);
  bad_trace.matrix *= 1.5;
  CHECK_THROWS_AS(validate(bad_trace, kTol), validation_error);

  DensityState not_hermitian = maximally_mixed(2);
  not_hermitian.matrix(0, 1) = Complex(0.3, 0.0);
  CHECK_THROWS_AS(validate(not_hermitian, kTol), validation_error);

  DensityState negative;
  negative.matrix = Matrix::Zero(2, 2);
  negative.matrix(0, 0) = 1.5;
  negative.matrix(1, 1) = -0.5;
  CHECK_THROWS_AS(validate(negative, kTol), validation_error);
}

TEST_CASE("probabilities hits the known uniform values") {
  {
    const OutcomeDistribution dist = probabilities(standard_projectors(3), maximally_mixed(3), kTol);
    REQUIRE(dist.probs.size() == 3);
    CHECK_FALSE(dist.shots.has_value());
    for (Index i = 0; i < 3; ++i) {
      CHECK(dist.probs(i) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    }
  }
  {
    // Trace-1/n rank-one effects on the maximally mixed state: 1/n^2 each.
    const Povm povm = rank_one_ic_povm(3);
    const OutcomeDistribution dist = probabilities(povm, maximally_mixed(3), kTol);
    for (Index i = 0; i < dist.probs.size(); ++i) {
      CHECK(dist.probs(i) == doctest::Approx(1.0 / 9.0).epsilon(1e-12));
    }
    CHECK(dist.probs.sum() == doctest::Approx(1.0).epsilon(1e-12));
  }
  {
    const Povm povm = local_tomography_measurement(mub_family(2), kTol);
    const OutcomeDistribution dist = probabilities(povm, maximally_mixed(6), kTol);
    for (Index i = 0; i < dist.probs.size(); ++i) {
      CHECK(dist.probs(i) == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("probabilities is linear in the state") {
  const Povm povm = rank_one_ic_povm(2);
  const DensityState a = random_density(2, std::nullopt, 1);
  const DensityState b = random_density(2, std::nullopt, 2);
  DensityState mix;
  mix.matrix = 0.25 * a.matrix + 0.75 * b.matrix;
  const RealVector lhs = probabilities(povm, mix, kTol).probs;
  const RealVector rhs = 0.25 * probabilities(povm, a, kTol).probs +
                         0.75 * probabilities(povm, b, kTol).probs;
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("probabilities rejects mismatched dimensions") {
  CHECK_THROWS_AS(probabilities(standard_projectors(3), maximally_mixed(2), kTol),
                  validation_error);
}

TEST_CASE("reconstruct inverts exact statistics") {
  const Povm povm = canonical_ic_set(3);
  const DensityState rho = random_density(3, std::nullopt, 21);
  const OutcomeDistribution dist = probabilities(povm, rho, kTol);
  const TomographyReport report = reconstruct(povm, dist, false, kTol);
  CHECK((report.estimate.matrix - rho.matrix).norm() < 1e-8);
  CHECK(report.residual < 1e-10);
  CHECK_FALSE(report.shots.has_value());
  CHECK(report.hs_error == 0.0);  // reconstruct alone has no reference state
  validate(report.estimate, kTol);
}

TEST_CASE("reconstruct recovers the maximally mixed state exactly") {
  const Povm povm = rank_one_ic_povm(2);
  const OutcomeDistribution dist = probabilities(povm, maximally_mixed(2), kTol);
  const TomographyReport report = reconstruct(povm, dist, true, kTol);
  CHECK((report.estimate.matrix - maximally_mixed(2).matrix).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("reconstruct reports the rank deficit of a non-IC povm") {
  const Povm povm = standard_projectors(3);
  OutcomeDistribution dist;
  dist.probs = RealVector::Constant(3, 1.0 / 3.0);
  try {
    reconstruct(povm, dist, false, kTol);
    FAIL("expected validation_error");
  } catch (const validation_error& err) {
    const std::string what = err.what();
    CHECK(what.find("rank 3") != std::string::npos);
    CHECK(what.find("deficit 6") != std::string::npos);
  }
}

TEST_CASE("reconstruction commutes with relabeling the outcomes") {
  const Povm povm = canonical_ic_set(2);
  const DensityState rho = random_density(2, std::nullopt, 3);
  const OutcomeDistribution dist = probabilities(povm, rho, kTol);

  Povm shuffled;
  shuffled.dim = povm.dim;
  shuffled.complete = povm.complete;
  OutcomeDistribution shuffled_dist;
  shuffled_dist.probs.resize(dist.probs.size());
  const Index m = dist.probs.size();
  for (Index i = 0; i < m; ++i) {
    const Index src = (i + 2) % m;
    shuffled.effects.push_back(povm.effects[static_cast<std::size_t>(src)]);
    shuffled_dist.probs(i) = dist.probs(src);
  }
  const Matrix direct = reconstruct(povm, dist, false, kTol).estimate.matrix;
  const Matrix relabeled = reconstruct(shuffled, shuffled_dist, false, kTol).estimate.matrix;
  CHECK((direct - relabeled).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("psd projection clips negative eigenvalues and keeps trace one") {
  const Povm povm = make_complete(canonical_ic_set(2), kTol);
  const DensityState pure = random_density(2, 1, 8);
  // Finite statistics push the linear inversion outside the PSD cone for a
  // pure state; the projection must pull it back.
  const OutcomeDistribution noisy = sample_outcomes(povm, pure, 200, 5, kTol);
  const TomographyReport clipped = reconstruct(povm, noisy, true, kTol);
  const auto [eigenvalues, vectors] = eig_hermitian(clipped.estimate.matrix);
  CHECK(eigenvalues.minCoeff() >= -1e-12);
  CHECK(clipped.estimate.matrix.trace().real() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sample_outcomes is deterministic per seed and normalized") {
  const Povm povm = make_complete(canonical_ic_set(2), kTol);
  const DensityState rho = random_density(2, std::nullopt, 4);
  const OutcomeDistribution a = sample_outcomes(povm, rho, 500, 42, kTol);
  const OutcomeDistribution b = sample_outcomes(povm, rho, 500, 42, kTol);
  const OutcomeDistribution c = sample_outcomes(povm, rho, 500, 43, kTol);
  REQUIRE(a.shots == 500);
  CHECK((a.probs - b.probs).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.probs - c.probs).cwiseAbs().maxCoeff() > 0.0);
  CHECK(a.probs.sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(a.probs.minCoeff() >= 0.0);
}

TEST_CASE("sampling an eigenstate fills a single bucket") {
  DensityState ground;
  ground.matrix = Matrix::Zero(2, 2);
  ground.matrix(0, 0) = 1.0;
  const OutcomeDistribution dist = sample_outcomes(standard_projectors(2), ground, 1000, 9, kTol);
  CHECK(dist.probs(0) == 1.0);
  CHECK(dist.probs(1) == 0.0);
}

TEST_CASE("non-complete povms lose weight to the hidden outcome") {
  // Halved projectors retain total probability 1/2; the sampled frequencies
  // must reflect the loss instead of renormalizing it away.
  Povm halved = standard_projectors(2);
  halved.complete = false;
  for (auto& effect : halved.effects) {
    effect.matrix *= 0.5;
  }
  const OutcomeDistribution dist =
      sample_outcomes(halved, maximally_mixed(2), 20000, 11, kTol);
  CHECK(dist.probs.sum() == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("large samples concentrate on the Born values") {
  const Povm povm = make_complete(canonical_ic_set(2), kTol);
  const DensityState rho = random_density(2, std::nullopt, 6);
  const RealVector exact = probabilities(povm, rho, kTol).probs;
  const OutcomeDistribution dist = sample_outcomes(povm, rho, 1000000, 12, kTol);
  CHECK((dist.probs - exact).cwiseAbs().maxCoeff() < 5e-3);
}

TEST_CASE("sample_outcomes rejects a non-positive shot count") {
  CHECK_THROWS_AS(sample_outcomes(standard_projectors(2), maximally_mixed(2), 0, 1, kTol),
                  validation_error);
}

TEST_CASE("random_density honors trace, rank and seed") {
  const DensityState full = random_density(4, std::nullopt, 31);
  validate(full, kTol);
  CHECK(numerical_rank(full.matrix, kTol) == 4);

  const DensityState pure = random_density(4, 1, 31);
  validate(pure, kTol);
  CHECK(numerical_rank(pure.matrix, kTol) == 1);
  CHECK((pure.matrix * pure.matrix).trace().real() == doctest::Approx(1.0).epsilon(1e-10));

  const DensityState again = random_density(4, std::nullopt, 31);
  CHECK((full.matrix - again.matrix).cwiseAbs().maxCoeff() == 0.0);
  const DensityState other = random_density(4, std::nullopt, 32);
  CHECK((full.matrix - other.matrix).cwiseAbs().maxCoeff() > 1e-6);

  CHECK_THROWS_AS(random_density(3, 4, 0), validation_error);
  CHECK_THROWS_AS(random_density(3, 0, 0), validation_error);
}

TEST_CASE("run_experiment round-trips exactly without shots") {
  const Povm povm = rank_one_ic_povm(3);
  const DensityState rho = random_density(3, std::nullopt, 14);
  const TomographyReport report = run_experiment(povm, rho, std::nullopt, 0, std::nullopt, kTol);
  CHECK(report.hs_error < 1e-8);
  CHECK(report.trace_error < 1e-8);
  CHECK_FALSE(report.shots.has_value());
}

TEST_CASE("run_experiment with shots defaults to a physical estimate") {
  const Povm povm = make_complete(canonical_ic_set(2), kTol);
  const DensityState rho = random_density(2, 1, 15);
  const TomographyReport report = run_experiment(povm, rho, 2000, 77, std::nullopt, kTol);
  REQUIRE(report.shots == 2000);
  const auto [eigenvalues, vectors] = eig_hermitian(report.estimate.matrix);
  CHECK(eigenvalues.minCoeff() >= -1e-12);
  CHECK(report.hs_error > 0.0);
  CHECK(report.hs_error < 0.5);
  CHECK(report.trace_error > 0.0);
}

TEST_CASE("more shots help on average") {
  const Povm povm = make_complete(canonical_ic_set(2), kTol);
  const DensityState rho = random_density(2, std::nullopt, 16);
  double coarse = 0.0;
  double fine = 0.0;
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    coarse += run_experiment(povm, rho, 1000, seed, false, kTol).hs_error;
    fine += run_experiment(povm, rho, 100000, seed, false, kTol).hs_error;
  }
  CHECK(fine < coarse);
}
