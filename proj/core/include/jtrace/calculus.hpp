#pragma once

// Scalar functions on a cube and their lift to commuting matrix tuples.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jtrace/spectral.hpp"

namespace jtrace {

using Point = std::span<const double>;

/// Black-box real function of n variables on a cube, optional closed-form
/// partial derivatives, and caller-asserted shape metadata.
struct ScalarFunction {
  std::string name;
  Cube cube;
  std::function<double(Point)> eval;
  /// partial(point, k) = d f / d lambda_k. Empty means finite differences.
  std::function<double(Point, std::size_t)> partial;
  bool claimed_convex = false;
  bool claimed_concave = false;
  bool claimed_monotone_increasing = false;

  [[nodiscard]] std::size_t arity() const { return cube.size(); }
  double operator()(Point p) const { return eval(p); }
};

/// f(x) through the eigendecomposition of x. f must have arity 1.
HermitianMatrix apply_univariate(const ScalarFunction& f, const HermitianMatrix& x);

/// f(x_1, ..., x_n) = U diag(f(Lambda_j)) U* with (U, Lambda) the joint
/// decomposition of the tuple. Joint eigenvalues are clipped into f's cube.
HermitianMatrix apply_multivariate(const ScalarFunction& f, const AbelianTuple& t);
HermitianMatrix apply_multivariate(const ScalarFunction& f, const AbelianTuple& t,
                                   const JointSpectralDecomposition& d);

/// Step used by the finite-difference fallback: 1e-5 * (1 + |lambda_k|).
double difference_step(double coordinate);

/// d f / d lambda_k. Central difference when no closed form is available,
/// one-sided near the cube boundary.
double partial_eval(const ScalarFunction& f, std::size_t k, Point point);

/// The function lambda -> partial_eval(f, k, lambda) as a ScalarFunction.
ScalarFunction partial_function(const ScalarFunction& f, std::size_t k);

/// Midpoint convexity probe: f((p+q)/2) <= (f(p)+f(q))/2 + 1e-12 * (1 + |f|)
/// at `trials` random pairs of the cube. `concave` flips the inequality.
bool probe_midpoint_convexity(const ScalarFunction& f, std::uint64_t seed, int trials = 64,
                              bool concave = false);

/// Stable catalog identifiers.
std::vector<std::string> catalog_names();

/// Builds a catalog function of the given arity on `cube`. Entries with a
/// natural domain ("sin", "sqrt_sum", "log_sum") ignore or validate the cube.
/// `seed` drives the coefficients of "affine". Throws ConfigError on an
/// unknown name.
ScalarFunction catalog(const std::string& name, std::size_t arity, const Cube& cube,
                       std::uint64_t seed = 0);

/// Metadata-only lookup used for validation and `describe`.
struct CatalogEntry {
  std::string name;
  std::string formula;
  bool convex;
  bool concave;
  bool monotone_increasing;
};
const std::vector<CatalogEntry>& catalog_entries();

/// f + c * sum(lambda) style helpers used by tests and campaigns.
ScalarFunction affine_function(std::vector<double> coefficients, double intercept, Cube cube);

}  // namespace jtrace
