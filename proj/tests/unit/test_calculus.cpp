#include <doctest.h>

#include <cmath>
#include <numbers>

#include "jtrace/calculus.hpp"
#include "jtrace/instances.hpp"
#include "oracles.hpp"

using namespace jtrace;
using oracle::CMatrix;

namespace {

ScalarFunction lambda_fn(std::string name, Cube cube, std::function<double(Point)> eval) {
  ScalarFunction f;
  f.name = std::move(name);
  f.cube = std::move(cube);
  f.eval = std::move(eval);
  return f;
}

/// Monomial prod_i l_i^{k_i}.
ScalarFunction monomial(const std::vector<int>& powers, const Cube& cube) {
  return lambda_fn("monomial", cube, [powers](Point p) {
    double v = 1.0;
    for (std::size_t i = 0; i < powers.size(); ++i) v *= std::pow(p[i], powers[i]);
    return v;
  });
}

}  // namespace

TEST_SUITE("calculus") {

TEST_CASE("univariate examples") {
  oracle::Gen g(1);
  const HermitianMatrix x(g.hermitian(4));
  const Cube wide = uniform_cube(1, {-100, 100});
  const auto id = lambda_fn("id", wide, [](Point p) { return p[0]; });
  CHECK(oracle::frob_rel(apply_univariate(id, x).matrix(), x.matrix()) < 1e-12);

  CMatrix flip(2, 2);
  flip << 0, 1, 1, 0;
  const auto sq = catalog("square", 1, uniform_cube(1, {-1, 1}));
  CHECK((apply_univariate(sq, HermitianMatrix(flip)).matrix() - CMatrix::Identity(2, 2)).norm() < 1e-14);

  const auto e = catalog("exp_sum", 1, uniform_cube(1, {0, 1}));
  const auto ex = apply_univariate(e, HermitianMatrix::diagonal(RVector::LinSpaced(2, 0, std::log(2.0))));
  CHECK(ex.matrix()(0, 0).real() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(ex.matrix()(1, 1).real() == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(std::abs(ex.matrix()(0, 1)) < 1e-15);

  CHECK_THROWS_AS(apply_univariate(catalog("product2", 2, uniform_cube(2, {0, 1})), x), DimensionMismatch);
}

TEST_CASE("multivariate examples") {
  const auto d1 = HermitianMatrix::diagonal(RVector::LinSpaced(2, 1, 2));
  const auto d2 = HermitianMatrix::diagonal(RVector::LinSpaced(2, 3, 4));
  const AbelianTuple t({d1, d2}, uniform_cube(2, {0, 5}));
  const auto prod = apply_multivariate(catalog("product2", 2, t.cube()), t);
  CHECK(prod.matrix()(0, 0).real() == doctest::Approx(3.0));
  CHECK(prod.matrix()(1, 1).real() == doctest::Approx(8.0));

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto pair = random_abelian_tuple(seed, 6, 2, uniform_cube(2, {-1, 1}));
    const auto sum = lambda_fn("sum", pair.cube(), [](Point p) { return p[0] + p[1]; });
    CHECK(oracle::frob_rel(apply_multivariate(sum, pair).matrix(), (pair[0] + pair[1]).matrix()) < 1e-10);
    const auto p2 = apply_multivariate(catalog("product2", 2, pair.cube()), pair);
    CHECK(oracle::frob_rel(p2.matrix(), pair[0].matrix() * pair[1].matrix()) < 1e-9);
  }
}

TEST_CASE("monomials agree with explicit products") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    oracle::Gen g(seed);
    const Eigen::Index dim = g.integer(1, 8);
    const std::size_t n = static_cast<std::size_t>(g.integer(1, 3));
    const auto t = random_abelian_tuple(seed + 1000, dim, n, uniform_cube(n, {-1.5, 1.5}));
    std::vector<int> powers(n);
    CMatrix expected = CMatrix::Identity(dim, dim);
    for (std::size_t i = 0; i < n; ++i) {
      powers[i] = g.integer(0, 4);
      expected = expected * oracle::power(t[i].matrix(), powers[i]);
    }
    const auto got = apply_multivariate(monomial(powers, t.cube()), t);
    CHECK((got.matrix() - expected).norm() <= 1e-8 * (1 + expected.norm()));
  }
}

TEST_CASE("calculus is multiplicative") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto t = random_abelian_tuple(seed, 5, 2, uniform_cube(2, {-1, 1}));
    const auto f = lambda_fn("f", t.cube(), [](Point p) { return std::exp(p[0]) - p[1]; });
    const auto g = lambda_fn("g", t.cube(), [](Point p) { return std::sin(p[0] * p[1]) + 2.0; });
    const auto fg = lambda_fn("fg", t.cube(), [&](Point p) { return f(p) * g(p); });
    const CMatrix prod = apply_multivariate(f, t).matrix() * apply_multivariate(g, t).matrix();
    CHECK((apply_multivariate(fg, t).matrix() - prod).norm() <= 1e-8 * (1 + prod.norm()));
  }
}

TEST_CASE("explicit decomposition reproduces the default path") {
  const auto t = random_abelian_tuple(std::uint64_t{3}, 4, 3, uniform_cube(3, {0, 1}));
  const auto d = joint_diagonalize(t);
  const auto f = catalog("product3", 3, t.cube());
  CHECK((apply_multivariate(f, t, d).matrix() - apply_multivariate(f, t).matrix()).norm() < 1e-12);
}

TEST_CASE("partial derivatives") {
  const double at23[] = {2.0, 3.0};
  CHECK(partial_eval(catalog("product2", 2, uniform_cube(2, {0, 5})), 0, at23) == doctest::Approx(3.0));

  const auto exp1 = lambda_fn("exp1", uniform_cube(2, {-1, 1}), [](Point p) { return std::exp(p[0]); });
  const double at00[] = {0.2, -0.3};
  CHECK(std::abs(partial_eval(exp1, 1, at00)) < 1e-9);

  const auto quartic = lambda_fn("l4", uniform_cube(1, {-3, 3}), [](Point p) { return std::pow(p[0], 4); });
  const double at15[] = {1.5};
  CHECK(partial_eval(quartic, 0, at15) == doctest::Approx(4 * std::pow(1.5, 3)).epsilon(1e-6));
  CHECK(partial_eval(quartic, 0, at15) == doctest::Approx(13.5).epsilon(1e-6));

  // One-sided near the boundary stays inside the cube.
  const auto sqrtf = catalog("sqrt_sum", 1, uniform_cube(1, {0, 4}));
  const double at_edge[] = {4.0};
  CHECK(partial_eval(lambda_fn("s", sqrtf.cube, sqrtf.eval), 0, at_edge) == doctest::Approx(0.25).epsilon(1e-4));

  CHECK_THROWS_AS(partial_eval(exp1, 2, at00), DimensionMismatch);
  CHECK(difference_step(2.0) == doctest::Approx(3e-5));
}

TEST_CASE("closed-form partials match finite differences across the catalog") {
  oracle::Gen g(17);
  for (const auto& name : catalog_names()) {
    if (name == "relu_sum" || name == "abs") continue;  // kinks
    const std::size_t n = name == "sin" ? 1 : (name == "product3" ? 3 : 2);
    Cube cube = uniform_cube(n, {0.2, 1.2});
    const auto f = catalog(name, n, cube, 5);
    const auto fd = lambda_fn(name, f.cube, f.eval);
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<double> p(n);
      for (std::size_t i = 0; i < n; ++i) p[i] = g.uniform(f.cube[i].lo + 0.1, f.cube[i].hi - 0.1);
      for (std::size_t k = 0; k < n; ++k) {
        const double exact = partial_eval(f, k, p);
        CHECK_MESSAGE(oracle::rel_err(partial_eval(fd, k, p), exact) < 1e-6, name);
      }
    }
  }
}

TEST_CASE("catalog metadata") {
  CHECK(catalog("square", 1, uniform_cube(1, {-1, 1})).claimed_convex);
  const double p123[] = {1, 2, 3};
  CHECK(catalog("product3", 3, uniform_cube(3, {0, 4}))(p123) == doctest::Approx(6.0));
  const auto s = catalog("sin", 1, uniform_cube(1, {-5, 5}));
  CHECK(s.cube[0].lo == doctest::Approx(-std::numbers::pi / 2));
  CHECK(s.cube[0].hi == doctest::Approx(std::numbers::pi / 2));
  CHECK(catalog_entries().size() == catalog_names().size());
  for (const auto& e : catalog_entries()) {
    // A one-variable product is the identity, so products are checked with at least two variables.
    const std::size_t n = e.name == "product3" ? 3 : (e.name.rfind("product", 0) == 0 ? 2 : 1);
    const auto f = catalog(e.name, n, uniform_cube(n, {0.0, 1.0}));
    CHECK(f.claimed_convex == e.convex);
    CHECK(f.claimed_concave == e.concave);
    CHECK(f.claimed_monotone_increasing == e.monotone_increasing);
  }
}

TEST_CASE("catalog errors") {
  CHECK_THROWS_AS(catalog("nope", 1, uniform_cube(1, {0, 1})), ConfigError);
  CHECK_THROWS_AS(catalog("product2", 3, uniform_cube(3, {0, 1})), Error);
  CHECK_THROWS_AS(catalog("sqrt_sum", 1, uniform_cube(1, {-1, 1})), Error);
  CHECK_THROWS_AS(catalog("log1p_sum", 1, uniform_cube(1, {-2, 1})), Error);
}

TEST_CASE("midpoint probe separates convex from non-convex") {
  for (const auto& e : catalog_entries()) {
    const std::size_t n = e.name == "product3" ? 3 : 2;
    const std::size_t arity = e.name == "sin" ? 1 : n;
    const auto f = catalog(e.name, arity, uniform_cube(arity, {0.0, 1.0}), 1);
    if (e.convex) CHECK_MESSAGE(probe_midpoint_convexity(f, 7), e.name);
    if (e.concave) CHECK_MESSAGE(probe_midpoint_convexity(f, 7, 64, true), e.name);
  }
  CHECK_FALSE(probe_midpoint_convexity(catalog("sin", 1, {}), 7));
  CHECK_FALSE(probe_midpoint_convexity(catalog("product2", 2, uniform_cube(2, {0, 1})), 7));
}

TEST_CASE("affine helper") {
  const auto f = affine_function({1.0, -2.0}, 0.5, uniform_cube(2, {-1, 1}));
  const double p[] = {0.3, 0.1};
  CHECK(f(p) == doctest::Approx(0.6));
  CHECK(partial_eval(f, 1, p) == doctest::Approx(-2.0));
}

}
