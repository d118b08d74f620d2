#include <doctest.h>

#include <cmath>

#include "jtrace/instances.hpp"
#include "jtrace/spectral.hpp"
#include "oracles.hpp"

using namespace jtrace;
using oracle::CMatrix;

namespace {

HermitianMatrix diag(std::initializer_list<double> d) {
  RVector v(static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (double x : d) v(i++) = x;
  return HermitianMatrix::diagonal(v);
}

HermitianMatrix sigma_x() {
  CMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return HermitianMatrix(m);
}

HermitianMatrix sigma_z() { return diag({1, -1}); }

}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("constructor symmetrizes and rejects non-finite entries") {
  oracle::Gen g(1);
  const CMatrix raw = g.gaussian(4, 4);
  const HermitianMatrix h(raw);
  CHECK((h.matrix() - h.matrix().adjoint()).norm() <= kHermitianTol * (1 + h.norm()));
  CHECK((h.matrix() - 0.5 * (raw + raw.adjoint())).norm() < 1e-15 * (1 + raw.norm()));
  CMatrix bad = CMatrix::Zero(2, 2);
  bad(0, 1) = std::nan("");
  CHECK_THROWS_AS(HermitianMatrix{bad}, Error);
}

TEST_CASE("commutator examples") {
  CHECK(commutator(diag({1, 2}), diag({3, 4})).norm() == 0.0);
  CHECK(commutator(sigma_x(), sigma_z()).norm() == doctest::Approx(2 * std::sqrt(2.0)).epsilon(1e-14));
  oracle::Gen g(2);
  const HermitianMatrix x(g.hermitian(5));
  const HermitianMatrix x2(x.matrix() * x.matrix());
  CHECK(commutator(x, x2).norm() <= 1e-12 * (1 + x.norm() * x2.norm()));
}

TEST_CASE("is_abelian examples") {
  Rng rng(3, 0);
  const auto t = random_abelian_tuple(rng, 5, 3, uniform_cube(3, {-1, 1}));
  CHECK(is_abelian(t.members()).abelian);
  const std::vector<HermitianMatrix> pauli{sigma_x(), sigma_z()};
  const auto check = is_abelian(pauli);
  CHECK_FALSE(check.abelian);
  CHECK(check.worst_absolute == doctest::Approx(2 * std::sqrt(2.0)));
  const std::vector<HermitianMatrix> single{sigma_x()};
  CHECK(is_abelian(single).abelian);
}

TEST_CASE("abelian tuple validates shape, commutation and cube") {
  CHECK_THROWS_AS(AbelianTuple({sigma_x(), sigma_z()}, uniform_cube(2, {-1, 1})), PreconditionError);
  CHECK_THROWS_AS(AbelianTuple({diag({1, 2}), diag({1, 2, 3})}, uniform_cube(2, {0, 3})),
                  DimensionMismatch);
  CHECK_THROWS_AS(AbelianTuple({diag({1, 5})}, uniform_cube(1, {0, 2})), DomainError);
  // Within the endpoint slack.
  CHECK_NOTHROW(AbelianTuple({diag({1, 2 + 5e-10})}, uniform_cube(1, {0, 2})));
  const auto t = AbelianTuple::with_spectral_cube({diag({-1, 3}), diag({2, 2})});
  CHECK(t.cube()[0].lo == doctest::Approx(-1));
  CHECK(t.cube()[0].hi == doctest::Approx(3));
}

TEST_CASE("diagonal tuples decompose into their diagonals") {
  const std::vector<HermitianMatrix> m{diag({1, 2, 3}), diag({4, 5, 6})};
  const auto d = joint_diagonalize(m);
  // Every row of the table is one of the stacked diagonal rows.
  for (Eigen::Index j = 0; j < 3; ++j) {
    bool found = false;
    for (int k = 0; k < 3; ++k) {
      found = found || (std::abs(d.table(j, 0) - (1 + k)) < 1e-12 && std::abs(d.table(j, 1) - (4 + k)) < 1e-12);
    }
    CHECK(found);
  }
  // U is a phase-permutation matrix.
  CHECK(d.basis.cwiseAbs().rowwise().maxCoeff().minCoeff() == doctest::Approx(1.0));
}

TEST_CASE("functional relation between members survives in the table") {
  oracle::Gen g(4);
  for (int trial = 0; trial < 10; ++trial) {
    const HermitianMatrix x(g.hermitian(6));
    const HermitianMatrix x3(x.matrix() * x.matrix() * x.matrix());
    const std::vector<HermitianMatrix> m{x, x3};
    const auto d = joint_diagonalize(m);
    for (Eigen::Index j = 0; j < 6; ++j) {
      CHECK(d.table(j, 1) == doctest::Approx(std::pow(d.table(j, 0), 3)).epsilon(1e-8).scale(1.0));
    }
  }
}

TEST_CASE("decomposition invariants on random planted tuples") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Rng rng(seed, 1);
    const auto dim = static_cast<Eigen::Index>(rng.uniform_int(1, 10));
    const auto n = static_cast<std::size_t>(rng.uniform_int(1, 4));
    const auto t = random_abelian_tuple(rng, dim, n, uniform_cube(n, {-2, 2}));
    const auto d = joint_diagonalize(t);
    CHECK((d.basis.adjoint() * d.basis - CMatrix::Identity(dim, dim)).norm() <= kUnitaryTol);
    for (std::size_t i = 0; i < n; ++i) {
      const CMatrix rebuilt = oracle::from_spectrum(d.basis, d.table.col(static_cast<Eigen::Index>(i)));
      CHECK((t[i].matrix() - rebuilt).norm() <= kReconstructionTol * (1 + t[i].norm()));
    }
  }
}

TEST_CASE("tensor tuple reconstructs") {
  Rng rng(5, 0);
  const auto pair = compatible_pair_tensor(rng, {2, 2, 2}, uniform_cube(3, {-1, 1}));
  const auto d = joint_diagonalize(pair.x);
  CHECK(pair.x.dim() == 8);
  CHECK(reconstruction_residual(pair.x.members(), d) <= 1e-9);
}

TEST_CASE("degenerate tuples force clustering") {
  // x has a 3-fold eigenvalue that y splits; only the pair determines the basis.
  oracle::Gen g(6);
  const CMatrix u = g.unitary(4);
  const std::vector<HermitianMatrix> m{
      HermitianMatrix(oracle::from_spectrum(u, Eigen::Vector4d(1, 1, 1, 2))),
      HermitianMatrix(oracle::from_spectrum(u, Eigen::Vector4d(0, 3, 5, 5)))};
  const auto d = joint_diagonalize(m);
  CHECK(reconstruction_residual(m, d) <= 1e-9);
}

TEST_CASE("jacobi fallback agrees with the data") {
  oracle::Gen g(7);
  const CMatrix u = g.unitary(5);
  const std::vector<HermitianMatrix> m{
      HermitianMatrix(oracle::from_spectrum(u, Eigen::VectorXd::LinSpaced(5, 0, 4))),
      HermitianMatrix(oracle::from_spectrum(u, Eigen::VectorXd::LinSpaced(5, 1, -1)))};
  const auto d = jacobi_joint_diagonalize(m);
  CHECK(reconstruction_residual(m, d) <= 1e-9);
}

TEST_CASE("compatibility examples") {
  Rng rng(8, 0);
  const auto pair = compatible_pair_tensor(rng, {2, 3}, uniform_cube(2, {-1, 1}));
  CHECK(compatible(pair.x, pair.y));

  const AbelianTuple a({sigma_x(), HermitianMatrix::zero(2)}, uniform_cube(2, {-1, 1}));
  const AbelianTuple b({HermitianMatrix::zero(2), sigma_z()}, uniform_cube(2, {-1, 1}));
  CHECK_FALSE(compatible(a, b));

  const auto x = random_abelian_tuple(rng, 4, 2, uniform_cube(2, {-1, 1}));
  const AbelianTuple shifted({x[0] + 2.0 * HermitianMatrix::identity(4), x[1] - 0.5 * HermitianMatrix::identity(4)},
                             uniform_cube(2, {-3, 3}));
  CHECK(compatible(x, shifted));
}

TEST_CASE("compatible pairs are abelian along the whole segment") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed, 2);
    const auto pair = compatible_pair_tensor(rng, {2, 2}, uniform_cube(2, {-1, 1}));
    REQUIRE(compatible(pair.x, pair.y));
    for (int k = 0; k <= 10; ++k) {
      const auto pts = blend(pair.x.members(), pair.y.members(), k / 10.0);
      CHECK(is_abelian(pts).abelian);
    }
  }
}

TEST_CASE("operator order examples") {
  oracle::Gen g(9);
  const HermitianMatrix x(g.hermitian(3));
  CHECK(psd_leq(x, x));
  CHECK(psd_leq(HermitianMatrix::zero(2), diag({1, 2})));
  CHECK_FALSE(psd_leq(diag({0, 2}), diag({1, 1})));
  const CMatrix b = g.gaussian(3, 3);
  const HermitianMatrix gram(b * b.adjoint());
  CHECK(psd_leq(x, x + gram));
}

TEST_CASE("eigenvalues ascend and match the trace") {
  oracle::Gen g(10);
  const HermitianMatrix x(g.hermitian(7));
  const RVector ev = eigenvalues(x);
  for (Eigen::Index i = 1; i < ev.size(); ++i) CHECK(ev(i - 1) <= ev(i));
  CHECK(ev.sum() == doctest::Approx(x.trace()).epsilon(1e-12));
  CHECK(min_eigenvalue(x) == ev(0));
}

TEST_CASE("interval clipping") {
  const Interval i{0.0, 1.0};
  CHECK(i.clip(1.0 + 1e-12) == 1.0);
  CHECK(i.clip(0.5) == 0.5);
  CHECK_THROWS_AS((void)i.clip(1.1), DomainError);
}

}
