// constructions.cpp

#include "icmkit/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

namespace icmkit {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Complex root_of_unity(Index num, Index den) {
  return std::polar(1.0, kTwoPi * static_cast<double>(num) / static_cast<double>(den));
}

Vector basis_ket(Index dim, Index at) {
  Vector v = Vector::Zero(dim);
  v(at) = 1.0;
  return v;
}

// Ket with entry 1 at position p and `second` at position s (0-indexed).
Vector paired_ket(Index dim, Index p, Index s, Complex second) {
  Vector v = Vector::Zero(dim);
  v(p) = 1.0;
  v(s) = second;
  return v;
}

std::vector<Vector> normalized(std::vector<Vector> kets) {
  for (auto& ket : kets) {
    ket.normalize();
  }
  return kets;
}

void check_family_orthonormal(const BasisFamily& fam, double eps, const char* who) {
  for (const auto& basis : fam.bases) {
    if (static_cast<Index>(basis.size()) != fam.dim) {
      throw internal_error(std::string(who) + ": basis of wrong size");
    }
    for (std::size_t i = 0; i < basis.size(); ++i) {
      for (std::size_t j = i; j < basis.size(); ++j) {
        const Complex inner = basis[i].dot(basis[j]);
        const double target = (i == j) ? 1.0 : 0.0;
        if (std::abs(inner - target) > eps) {
          throw internal_error(std::string(who) + ": constructed basis is not orthonormal");
        }
      }
    }
  }
}

}  // namespace

void validate(const BasisFamily& fam, const Tolerance& tol) {
  validate(tol);
  if (fam.dim < 1) {
    throw validation_error("basis family: dim must be >= 1");
  }
  if (fam.bases.empty()) {
    throw validation_error("basis family: no bases");
  }
  for (const auto& basis : fam.bases) {
    if (static_cast<Index>(basis.size()) != fam.dim) {
      throw validation_error("basis family: basis must contain dim kets");
    }
    for (std::size_t i = 0; i < basis.size(); ++i) {
      if (basis[i].size() != fam.dim) {
        throw validation_error("basis family: ket dimension mismatch");
      }
      for (std::size_t j = i; j < basis.size(); ++j) {
        const Complex inner = basis[i].dot(basis[j]);
        const double target = (i == j) ? 1.0 : 0.0;
        if (std::abs(inner - target) > tol.abs_eps) {
          throw validation_error("basis family: basis is not orthonormal");
        }
      }
    }
  }
}

BasisFamily mpicm_explicit(Index n) {
  if (n != 4 && n != 6) {
    throw validation_error("mpicm_explicit: only n = 4 and n = 6 are available");
  }
  BasisFamily fam;
  fam.dim = n;
  const Complex i1(0.0, 1.0);
  if (n == 4) {
    const auto ket = [](Complex a, Complex b, Complex c, Complex d) {
      Vector v(4);
      v << a, b, c, d;
      return v;
    };
    fam.bases.push_back({basis_ket(4, 0), basis_ket(4, 1), basis_ket(4, 2), basis_ket(4, 3)});
    fam.bases.push_back(normalized({ket(1, 1, 0, 0), ket(0, 0, 1, 1),
                                    ket(1, -1, 1, -1), ket(1, -1, -1, 1)}));
    fam.bases.push_back(normalized({ket(1, 0, 1, 0), ket(0, 1, 0, 1),
                                    ket(1, i1, -1, -i1), ket(1, -i1, -1, i1)}));
    fam.bases.push_back(normalized({ket(1, i1, 0, 0), ket(0, 0, 1, i1),
                                    ket(1, -i1, i1, 1), ket(1, -i1, -i1, -1)}));
    fam.bases.push_back(normalized({ket(1, 0, i1, 0), ket(0, 1, 0, i1),
                                    ket(1, 1, -i1, -i1), ket(1, -1, -i1, i1)}));
  } else {
    // Each basis pairs the six coordinates three ways: three kets u + phi*v,
    // then three Fourier combinations of the differences u - phi*v (the
    // first basis weights its third difference by i).
    struct Recipe {
      std::array<std::pair<Index, Index>, 3> pairs;  // 1-indexed coordinates
      Complex phi;
      std::array<Complex, 3> weights;
    };
    const Complex one(1.0, 0.0);
    const std::array<Recipe, 6> recipes = {{
        {{{{1, 2}, {3, 5}, {4, 6}}}, one, {one, one, i1}},
        {{{{1, 3}, {2, 6}, {4, 5}}}, one, {one, one, one}},
        {{{{1, 4}, {2, 3}, {5, 6}}}, one, {one, one, one}},
        {{{{1, 2}, {3, 5}, {4, 6}}}, i1, {one, one, one}},
        {{{{1, 3}, {2, 6}, {4, 5}}}, i1, {one, one, one}},
        {{{{1, 4}, {2, 3}, {5, 6}}}, i1, {one, one, one}},
    }};
    std::vector<Vector> standard;
    for (Index k = 0; k < 6; ++k) {
      standard.push_back(basis_ket(6, k));
    }
    fam.bases.push_back(std::move(standard));
    for (const auto& recipe : recipes) {
      std::vector<Vector> basis;
      for (const auto& [p, s] : recipe.pairs) {
        basis.push_back(paired_ket(6, p - 1, s - 1, recipe.phi));
      }
      for (Index combo = 0; combo < 3; ++combo) {
        Vector v = Vector::Zero(6);
        for (Index t = 0; t < 3; ++t) {
          const auto& [p, s] = recipe.pairs[static_cast<std::size_t>(t)];
          v += root_of_unity(t * combo, 3) * recipe.weights[static_cast<std::size_t>(t)] *
               paired_ket(6, p - 1, s - 1, -recipe.phi);
        }
        basis.push_back(std::move(v));
      }
      fam.bases.push_back(normalized(std::move(basis)));
    }
  }
  check_family_orthonormal(fam, 1e-9, "mpicm_explicit");
  return fam;
}

namespace {

// Coordinate pair (1-indexed) behind the j-th ket of paired family i, for
// even dimension n = 2r. Families with odd index i = 2k-1 take j = 1..k from
// the first case, j = r from the third, the rest from the second; families
// with even index i = 2k replace the third case by j = k+1.
std::pair<Index, Index> general_pair(Index n, Index i, Index j) {
  const Index r = n / 2;
  if (i % 2 == 1) {
    const Index k = (i + 1) / 2;
    if (j <= k) {
      return {j, 2 * k + 1 - j};
    }
    if (j == r) {
      return {r + k, 2 * r};
    }
    return {j + k, 2 * r + k - j};
  }
  const Index k = i / 2;
  if (j <= k) {
    return {j, 2 * k + 2 - j};
  }
  if (j == k + 1) {
    return {k + 1, 2 * r};
  }
  return {j + k, 2 * r + k - j + 1};
}

BasisFamily mpicm_general_impl(Index n) {
  const Index r = n / 2;
  const Complex q = root_of_unity(1, n);
  // Paired kets: a/b are the +/- combinations, c/d the q-twisted ones.
  const auto pair_sum = [n](Index i, Index j, Complex second) {
    const auto [p, s] = general_pair(n, i, j);
    return paired_ket(n, p - 1, s - 1, second);
  };
  const auto fourier_of = [n, r](Index i, Complex second, const auto& pair_fn) {
    std::vector<Vector> combos;
    for (Index t = 1; t <= r; ++t) {
      Vector v = Vector::Zero(n);
      for (Index k = 1; k <= r; ++k) {
        v += root_of_unity((k - 1) * (t - 1), r) * pair_fn(i, k, second);
      }
      combos.push_back(std::move(v));
    }
    return combos;
  };
  BasisFamily fam;
  fam.dim = n;
  std::vector<Vector> standard;
  for (Index k = 0; k < n; ++k) {
    standard.push_back(basis_ket(n, k));
  }
  fam.bases.push_back(std::move(standard));
  const auto push_family = [&](Index i, Complex plus, Complex minus) {
    std::vector<Vector> basis;
    for (Index j = 1; j <= r; ++j) {
      basis.push_back(pair_sum(i, j, plus));
    }
    for (auto& combo : fourier_of(i, minus, pair_sum)) {
      basis.push_back(std::move(combo));
    }
    fam.bases.push_back(normalized(std::move(basis)));
  };
  // Plain families 1..r, then q-twisted families r-1..2r-2.
  for (Index i = 1; i <= r; ++i) {
    push_family(i, Complex(1.0, 0.0), Complex(-1.0, 0.0));
  }
  for (Index i = r - 1; i <= 2 * r - 2; ++i) {
    push_family(i, q, -q);
  }
  return fam;
}

}  // namespace

namespace detail {

BasisFamily mpicm_general_unchecked(Index n) {
  if (n < 4 || n % 2 != 0) {
    throw validation_error("mpicm_general_unchecked: n must be even and >= 4");
  }
  return mpicm_general_impl(n);
}

}  // namespace detail

BasisFamily mpicm_general(Index n) {
  if (n % 2 != 0 || n < 10) {
    throw validation_error("mpicm_general: construction not defined for odd n or n <= 8");
  }
  BasisFamily fam = mpicm_general_impl(n);
  check_family_orthonormal(fam, 1e-9, "mpicm_general");
  return fam;
}

Povm povm_from_bases(const BasisFamily& fam, bool scaled) {
  Povm povm;
  povm.dim = fam.dim;
  povm.complete = scaled;
  const double weight = scaled ? 1.0 / static_cast<double>(fam.bases.size()) : 1.0;
  for (const auto& basis : fam.bases) {
    for (const auto& ket : basis) {
      povm.effects.push_back(Effect{weight * (ket * ket.adjoint())});
    }
  }
  return povm;
}

UnitaryPartition unitary_partition_from_mpicm(const BasisFamily& fam, const Tolerance& tol) {
  validate(fam, tol);
  const Index n = fam.dim;
  if (static_cast<Index>(fam.bases.size()) != n + 1) {
    throw validation_error("unitary_partition_from_mpicm: family must contain n+1 bases");
  }
  {
    const IcReport report = is_ic(povm_from_bases(fam, false), tol);
    if (!report.is_ic) {
      std::ostringstream msg;
      msg << "unitary_partition_from_mpicm: family is not IC (rank " << report.rank << " < "
          << report.required << ")";
      throw validation_error(msg.str());
    }
  }
  UnitaryPartition part;
  part.dim = n;
  for (const auto& basis : fam.bases) {
    std::vector<Matrix> group;
    for (Index k = 1; k < n; ++k) {
      Matrix u = Matrix::Zero(n, n);
      for (Index j = 0; j < n; ++j) {
        u += root_of_unity(j * k, n) *
             (basis[static_cast<std::size_t>(j)] * basis[static_cast<std::size_t>(j)].adjoint());
      }
      group.push_back(std::move(u));
    }
    part.groups.push_back(std::move(group));
  }
  // The identity together with all group members must span Mat_n(C).
  Matrix stacked(n * n, n * n);
  stacked.row(0) = flatten_row_major(Matrix::Identity(n, n)).transpose();
  Index row = 1;
  for (const auto& group : part.groups) {
    for (const auto& u : group) {
      stacked.row(row++) = flatten_row_major(u).transpose();
    }
  }
  if (numerical_rank(stacked, tol) != n * n) {
    throw internal_error("unitary_partition_from_mpicm: partition lost full operator rank");
  }
  return part;
}

BasisFamily mpicm_from_unitary_partition(const UnitaryPartition& part, const Tolerance& tol,
                                         std::uint64_t seed) {
  validate(tol);
  const Index n = part.dim;
  if (n < 1 || part.groups.empty()) {
    throw validation_error("mpicm_from_unitary_partition: empty partition");
  }
  for (const auto& group : part.groups) {
    for (const auto& u : group) {
      if (u.rows() != n || u.cols() != n) {
        throw validation_error("mpicm_from_unitary_partition: member dimension mismatch");
      }
      if ((u.adjoint() * u - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() > tol.abs_eps) {
        throw validation_error("mpicm_from_unitary_partition: member is not unitary");
      }
    }
  }
  BasisFamily fam;
  fam.dim = n;
  for (std::size_t g = 0; g < part.groups.size(); ++g) {
    std::vector<Matrix> ops;
    ops.push_back(Matrix::Identity(n, n));
    for (const auto& u : part.groups[g]) {
      ops.push_back(u);
    }
    std::vector<Vector> basis = common_eigenbasis(ops, tol, mix_seed(seed, g));
    // The projectors must span the same operator subspace as {I} u group.
    Matrix stacked(static_cast<Index>(ops.size()) + n, n * n);
    Index row = 0;
    for (const auto& op : ops) {
      stacked.row(row++) = flatten_row_major(op).transpose();
    }
    for (const auto& ket : basis) {
      stacked.row(row++) = flatten_row_major(ket * ket.adjoint()).transpose();
    }
    const Index ops_rank = numerical_rank(stacked.topRows(static_cast<Index>(ops.size())), tol);
    const Index joint_rank = numerical_rank(stacked, tol);
    if (ops_rank != n || joint_rank != n) {
      throw internal_error("mpicm_from_unitary_partition: eigenbasis span mismatch");
    }
    fam.bases.push_back(std::move(basis));
  }
  return fam;
}

namespace {

bool is_prime(Index n) {
  if (n < 2) {
    return false;
  }
  for (Index d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      return false;
    }
  }
  return true;
}

constexpr double kParamGuard = 1e-9;

Povm rank_one_ic_prime(Index n, Complex x) {
  if (n == 2) {
    if (std::abs(std::abs(x) - 1.0) <= kParamGuard) {
      throw validation_error("rank_one_ic_povm: n = 2 requires |x| != 1");
    }
    if (std::abs((x * x).imag()) <= kParamGuard * std::max(1.0, std::norm(x))) {
      throw validation_error("rank_one_ic_povm: n = 2 requires x^2 to be non-real");
    }
  } else {
    if (x.imag() != 0.0) {
      throw validation_error("rank_one_ic_povm: odd prime n requires real x");
    }
    const double xr = x.real();
    const double forbidden[] = {1.0, -1.0, 1.0 - static_cast<double>(n) / 2.0};
    for (double f : forbidden) {
      if (std::abs(xr - f) <= kParamGuard) {
        std::ostringstream msg;
        msg << "rank_one_ic_povm: x = " << f << " is excluded for n = " << n;
        throw validation_error(msg.str());
      }
    }
  }
  const double scale =
      1.0 / std::sqrt(static_cast<double>(n) * std::norm(x) +
                      static_cast<double>(n * n) - static_cast<double>(n));
  Povm povm;
  povm.dim = n;
  povm.complete = true;
  for (Index l = 0; l < n; ++l) {
    for (Index j = 0; j < n; ++j) {
      Vector ket(n);
      for (Index k = 0; k < n; ++k) {
        const Complex a = (l == k) ? x : Complex(1.0, 0.0);
        ket(k) = scale * a * root_of_unity(j * k, n);
      }
      povm.effects.push_back(Effect{ket * ket.adjoint()});
    }
  }
  Matrix sum = Matrix::Zero(n, n);
  for (const auto& effect : povm.effects) {
    sum += effect.matrix;
  }
  if ((sum - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-10) {
    throw internal_error("rank_one_ic_povm: effects do not sum to the identity");
  }
  return povm;
}

}  // namespace

Povm rank_one_ic_povm(Index n, std::optional<Complex> x) {
  if (n < 2) {
    throw validation_error("rank_one_ic_povm: n must be >= 2");
  }
  if (is_prime(n)) {
    const Complex param = x.value_or(n == 2 ? Complex(1.0, 1.0) : Complex(2.0, 0.0));
    return rank_one_ic_prime(n, param);
  }
  std::vector<Povm> parts;
  Index rest = n;
  for (Index p = 2; rest > 1; ++p) {
    while (rest % p == 0) {
      parts.push_back(rank_one_ic_prime(
          p, p == 2 ? Complex(1.0, 1.0) : x.value_or(Complex(2.0, 0.0))));
      rest /= p;
    }
  }
  return tensor_povm(parts);
}

std::vector<Vector> diagonal_rescale_kets(const std::vector<Vector>& kets,
                                          const std::vector<Complex>& b) {
  for (const auto& scale : b) {
    if (std::abs(scale) == 0.0) {
      throw validation_error("diagonal_rescale_kets: zero scale");
    }
  }
  std::vector<Vector> out;
  out.reserve(kets.size());
  for (const auto& ket : kets) {
    if (ket.size() != static_cast<Index>(b.size())) {
      throw validation_error("diagonal_rescale_kets: ket dimension != number of scales");
    }
    Vector v = ket;
    for (Index c = 0; c < v.size(); ++c) {
      v(c) *= b[static_cast<std::size_t>(c)];
    }
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<Vector> orthogonalize_with_ancilla(const std::vector<Vector>& kets,
                                               const Tolerance& tol) {
  if (kets.empty()) {
    throw validation_error("orthogonalize_with_ancilla: no kets");
  }
  const Index n = kets.front().size();
  const Index m = static_cast<Index>(kets.size());
  {
    Matrix flattened(m, n * n);
    for (Index k = 0; k < m; ++k) {
      const Vector& e = kets[static_cast<std::size_t>(k)];
      if (e.size() != n) {
        throw validation_error("orthogonalize_with_ancilla: kets must share one dimension");
      }
      flattened.row(k) = flatten_row_major(e * e.adjoint()).transpose();
    }
    const Index rank = numerical_rank(flattened, tol);
    if (rank != n * n) {
      std::ostringstream msg;
      msg << "orthogonalize_with_ancilla: ket projectors are not IC (rank " << rank << " < "
          << n * n << ")";
      throw validation_error(msg.str());
    }
  }
  std::vector<Vector> current;
  current.reserve(static_cast<std::size_t>(m));
  for (const auto& ket : kets) {
    Vector v = Vector::Zero(n + m);
    v.head(n) = ket;
    current.push_back(std::move(v));
  }
  std::vector<Vector> out;
  out.reserve(static_cast<std::size_t>(m));
  // Step i pins ket i by adding the fresh ancilla direction f_i and removes
  // its remaining overlap from every later ket along that same direction.
  for (Index i = 0; i < m; ++i) {
    for (Index k = i + 1; k < m; ++k) {
      const Complex overlap =
          current[static_cast<std::size_t>(i)].dot(current[static_cast<std::size_t>(k)]);
      current[static_cast<std::size_t>(k)](n + i) -= overlap;
    }
    Vector pinned = current[static_cast<std::size_t>(i)];
    pinned(n + i) = 1.0;
    out.push_back(std::move(pinned));
  }
  return out;
}

std::vector<Vector> trace_balanced_extension(const std::vector<Vector>& e_m,
                                             const std::vector<Vector>& original_kets) {
  if (e_m.empty() || e_m.size() != original_kets.size()) {
    throw validation_error("trace_balanced_extension: input lists must match in size");
  }
  const Index m = static_cast<Index>(e_m.size());
  const Index n = original_kets.front().size();
  for (const auto& ket : e_m) {
    if (ket.size() != n + m) {
      throw validation_error("trace_balanced_extension: orthogonalized kets must live in C^(n+m)");
    }
  }
  double t = std::numeric_limits<double>::infinity();
  for (Index j = 0; j < m; ++j) {
    t = std::min(t, original_kets[static_cast<std::size_t>(j)].squaredNorm() /
                        e_m[static_cast<std::size_t>(j)].squaredNorm());
  }
  std::vector<Vector> out;
  out.reserve(static_cast<std::size_t>(m));
  for (Index j = 0; j < m; ++j) {
    Vector h = Vector::Zero(n + 2 * m);
    h.head(n + m) = e_m[static_cast<std::size_t>(j)];
    const double deficit = original_kets[static_cast<std::size_t>(j)].squaredNorm() / t -
                           e_m[static_cast<std::size_t>(j)].squaredNorm();
    h(n + m + j) = std::sqrt(std::max(0.0, deficit));
    out.push_back(std::move(h));
  }
  return out;
}

Povm local_tomography_measurement(const BasisFamily& fam, const Tolerance& tol) {
  validate(fam, tol);
  const Index n = fam.dim;
  if (static_cast<Index>(fam.bases.size()) != n + 1) {
    throw validation_error("local_tomography_measurement: family must contain n+1 bases");
  }
  {
    const IcReport report = is_ic(povm_from_bases(fam, false), tol);
    if (!report.is_ic) {
      std::ostringstream msg;
      msg << "local_tomography_measurement: family is not IC (rank " << report.rank << " < "
          << report.required << ")";
      throw validation_error(msg.str());
    }
  }
  const Index ancilla = n + 1;
  Povm povm;
  povm.dim = n * ancilla;
  povm.complete = true;
  for (Index i = 0; i < ancilla; ++i) {
    for (Index j = 0; j < n; ++j) {
      const Vector& p = fam.bases[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      Vector ket = Vector::Zero(n * ancilla);
      for (Index a = 0; a < n; ++a) {
        ket(a * ancilla + i) = p(a);
      }
      povm.effects.push_back(Effect{ket * ket.adjoint()});
    }
  }
  return povm;
}

SubspaceBasis local_embedding_basis(Index n) {
  if (n < 1) {
    throw validation_error("local_embedding_basis: n must be >= 1");
  }
  const Index ancilla = n + 1;
  SubspaceBasis basis;
  basis.dim_ambient = n * ancilla;
  const double amp = 1.0 / std::sqrt(static_cast<double>(ancilla));
  for (Index k = 0; k < n; ++k) {
    Vector v = Vector::Zero(n * ancilla);
    for (Index i = 0; i < ancilla; ++i) {
      v(k * ancilla + i) = amp;
    }
    basis.kets.push_back(std::move(v));
  }
  return basis;
}

Vector rank_one_ket(const Matrix& effect) {
  const auto [eigenvalues, vectors] = eig_hermitian(effect);
  const Index last = eigenvalues.size() - 1;
  const double top = eigenvalues(last);
  if (top <= 0.0) {
    throw validation_error("rank_one_ket: effect has no positive eigenvalue");
  }
  for (Index k = 0; k < last; ++k) {
    if (std::abs(eigenvalues(k)) > 1e-8 * top) {
      throw validation_error("rank_one_ket: effect is not rank one");
    }
  }
  Vector ket = std::sqrt(top) * vectors.col(last);
  Index best = 0;
  double best_mag = 0.0;
  for (Index c = 0; c < ket.size(); ++c) {
    if (std::abs(ket(c)) > best_mag + 1e-12) {
      best_mag = std::abs(ket(c));
      best = c;
    }
  }
  if (best_mag > 0.0) {
    ket *= std::conj(ket(best)) / std::abs(ket(best));
  }
  return ket;
}

Povm naimark_dilate_rank_one(const Povm& povm, const Tolerance& tol) {
  validate(tol);
  const Index n = povm.dim;
  const Index m = static_cast<Index>(povm.effects.size());
  if (m < n) {
    throw validation_error("naimark_dilate_rank_one: fewer effects than dimensions");
  }
  Matrix g(m, n);
  for (Index k = 0; k < m; ++k) {
    g.row(k) = rank_one_ket(povm.effects[static_cast<std::size_t>(k)].matrix).transpose();
  }
  const double defect = (g.adjoint() * g - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
  if (defect > tol.abs_eps) {
    std::ostringstream msg;
    msg << "naimark_dilate_rank_one: povm is not complete (stacked-ket columns deviate from "
           "orthonormal by "
        << defect << ")";
    throw validation_error(msg.str());
  }
  const Matrix completed = complete_to_unitary(g, tol);
  Povm out;
  out.dim = m;
  out.complete = true;
  for (Index k = 0; k < m; ++k) {
    const Vector row_ket = completed.row(k).transpose();
    out.effects.push_back(Effect{row_ket * row_ket.adjoint()});
  }
  return out;
}

NaimarkDilation naimark_standard(const Povm& povm, const Tolerance& tol) {
  validate(tol);
  const Index n = povm.dim;
  const Index m = static_cast<Index>(povm.effects.size());
  Matrix isometry = Matrix::Zero(n * m, n);
  for (Index k = 0; k < m; ++k) {
    const auto [eigenvalues, vectors] = eig_hermitian(povm.effects[static_cast<std::size_t>(k)].matrix);
    const Matrix root = vectors * eigenvalues.cwiseMax(0.0).cwiseSqrt().asDiagonal() *
                        vectors.adjoint();
    for (Index s = 0; s < n; ++s) {
      isometry.row(s * m + k) += root.row(s);
    }
  }
  const double defect =
      (isometry.adjoint() * isometry - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
  if (defect > tol.abs_eps) {
    std::ostringstream msg;
    msg << "naimark_standard: povm is not complete (isometry defect " << defect << ")";
    throw validation_error(msg.str());
  }
  const Matrix completed = complete_to_unitary(isometry, tol);
  // Spread the isometry columns to positions j*m so that the unitary maps
  // |phi>|0> to sum_k sqrt(M_k)|phi> |k>; filler columns take the remaining
  // positions in order.
  Matrix unitary(n * m, n * m);
  Index filler = n;
  for (Index target = 0; target < n * m; ++target) {
    if (target % m == 0) {
      unitary.col(target) = completed.col(target / m);
    } else {
      unitary.col(target) = completed.col(filler++);
    }
  }
  NaimarkDilation dilation;
  dilation.unitary = std::move(unitary);
  dilation.system_dim = n;
  dilation.ancilla_dim = m;
  return dilation;
}

Povm tensor_povm(const std::vector<Povm>& parts) {
  if (parts.empty()) {
    throw validation_error("tensor_povm: no parts");
  }
  Povm out;
  out.dim = 1;
  out.complete = true;
  out.effects.push_back(Effect{Matrix::Identity(1, 1)});
  for (const auto& part : parts) {
    Povm next;
    next.dim = out.dim * part.dim;
    next.complete = out.complete && part.complete;
    next.effects.reserve(out.effects.size() * part.effects.size());
    for (const auto& left : out.effects) {
      for (const auto& right : part.effects) {
        next.effects.push_back(Effect{kron(left.matrix, right.matrix)});
      }
    }
    out = std::move(next);
  }
  return out;
}

BasisFamily mub_family(Index n) {
  BasisFamily fam;
  fam.dim = n;
  if (n == 2) {
    const Complex i1(0.0, 1.0);
    const auto ket = [](Complex a, Complex b) {
      Vector v(2);
      v << a, b;
      return v;
    };
    fam.bases.push_back({ket(1, 0), ket(0, 1)});
    fam.bases.push_back(normalized({ket(1, 1), ket(1, -1)}));
    fam.bases.push_back(normalized({ket(1, i1), ket(1, -i1)}));
    return fam;
  }
  if (n == 4) {
    const Complex h(0.5, 0.0);
    const Complex hi(0.0, 0.5);
    const auto ket = [](Complex a, Complex b, Complex c, Complex d) {
      Vector v(4);
      v << a, b, c, d;
      return v;
    };
    fam.bases.push_back({ket(1, 0, 0, 0), ket(0, 1, 0, 0), ket(0, 0, 1, 0), ket(0, 0, 0, 1)});
    fam.bases.push_back({ket(h, -h, -h, h), ket(h, h, -h, -h), ket(h, -h, h, -h), ket(h, h, h, h)});
    fam.bases.push_back(
        {ket(h, -hi, -hi, -h), ket(h, hi, -hi, h), ket(h, -hi, hi, h), ket(h, hi, hi, -h)});
    fam.bases.push_back(
        {ket(h, -hi, -h, -hi), ket(h, hi, -h, hi), ket(h, -hi, h, hi), ket(h, hi, h, -hi)});
    fam.bases.push_back(
        {ket(h, -h, -hi, -hi), ket(h, h, hi, -hi), ket(h, h, -hi, hi), ket(h, -h, hi, hi)});
    return fam;
  }
  if (n >= 3 && n % 2 == 1 && is_prime(n)) {
    std::vector<Vector> standard;
    for (Index k = 0; k < n; ++k) {
      standard.push_back(basis_ket(n, k));
    }
    fam.bases.push_back(std::move(standard));
    const double amp = 1.0 / std::sqrt(static_cast<double>(n));
    for (Index a = 0; a < n; ++a) {
      std::vector<Vector> basis;
      for (Index b = 0; b < n; ++b) {
        Vector v(n);
        for (Index j = 0; j < n; ++j) {
          v(j) = amp * root_of_unity((a * j * j + b * j) % n, n);
        }
        basis.push_back(std::move(v));
      }
      fam.bases.push_back(std::move(basis));
    }
    return fam;
  }
  throw validation_error("mub_family: supported for n = 2, n = 4 and odd prime n");
}

BasisFamily random_bases(Index n, Index count_bases, std::uint64_t seed) {
  if (n < 1 || count_bases < 1) {
    throw validation_error("random_bases: need n >= 1 and count_bases >= 1");
  }
  BasisFamily fam;
  fam.dim = n;
  for (Index b = 0; b < count_bases; ++b) {
    const Matrix u = haar_random_unitary(n, mix_seed(seed, static_cast<std::uint64_t>(b)));
    std::vector<Vector> basis;
    basis.reserve(static_cast<std::size_t>(n));
    for (Index c = 0; c < n; ++c) {
      basis.push_back(u.col(c));
    }
    fam.bases.push_back(std::move(basis));
  }
  return fam;
}

}  // namespace icmkit
