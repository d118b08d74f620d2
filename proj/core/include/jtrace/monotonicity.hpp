#pragma once

// Trace monotonicity: the convex/concave branch check, derivatives along
// compatible paths, the sine splitting LP and the rst search.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "jtrace/calculus.hpp"
#include "jtrace/functionals.hpp"
#include "jtrace/instances.hpp"
#include "jtrace/report.hpp"

namespace jtrace {

/// phi(f(x)) <= phi(f(y)) for x_i <= y_i and f increasing in each variable,
/// when f is convex with every x_i centralized by phi, or f is concave with
/// every y_i centralized. metadata["branch"] is "convex" or "concave".
InequalityReport monotone_trace_check(const ScalarFunction& f, const AbelianTuple& x,
                                      const AbelianTuple& y, const TraceFunctional& phi,
                                      double tol = kDefaultRelTol);

/// g(t) = phi(f(x + t h)).
double path_value(const ScalarFunction& f, const AbelianTuple& x, std::span<const HermitianMatrix> h,
                  double t, const TraceFunctional& phi);

/// g'(t) = sum_k phi(f'_k(z) h_k) with z = x + t h. Throws PreconditionError
/// unless x and x + h are compatible and both are centralized by phi.
double path_derivative(const ScalarFunction& f, const AbelianTuple& x,
                       std::span<const HermitianMatrix> h, double t, const TraceFunctional& phi);

/// g(t) = phi(f((1-t) x + t y)) is nondecreasing across `grid` (steps of at
/// least -tol * scale) and g'(t) >= -1e-8 * scale at every grid point, where
/// scale = 1 + |g(0)| + |g(1)|. Reports lhs = g(0), rhs = g(1).
InequalityReport path_monotonicity_check(const ScalarFunction& f, const AbelianTuple& x,
                                         const AbelianTuple& y, const TraceFunctional& phi,
                                         std::span<const double> grid,
                                         double tol = kDefaultRelTol);

/// int_0^1 exp(r a) b exp((1-r) a) dr through divided differences of exp in
/// the eigenbasis of a. Pairs closer than 1e-8 * (1 + |l_i|) use the
/// midpoint value exp((l_i + l_j) / 2).
CMatrix exp_directional_derivative(const HermitianMatrix& a, const HermitianMatrix& b);

struct SplitOptions {
  /// Require f+ convex; otherwise f+ is only nondecreasing.
  bool convex_plus = true;
  /// Require f- concave; otherwise f- is only nondecreasing.
  bool concave_minus = true;
};

/// Best uniform approximation of a grid function by f+ + f- with both parts
/// nondecreasing, f+ convex and f- concave.
struct SplitCertificate {
  std::size_t n = 0;
  double optimum = 0.0;
  std::vector<double> grid;
  std::vector<double> plus;
  std::vector<double> minus;
};

/// Throws PreconditionError for fewer than 3 points or a non-increasing grid,
/// and Error when the LP solver does not reach an optimum.
SplitCertificate monotone_split_lp(std::span<const double> grid, std::span<const double> target,
                                   SplitOptions options = {});

/// Target sin on the uniform N-point grid of [-pi/2, pi/2].
SplitCertificate sin_decomposition_lp(std::size_t n, SplitOptions options = {});

/// tau(x1 y1) <= tau(x2 y2) for positive x1 <= x2, y1 <= y2 and a trace tau.
InequalityReport two_factor_monotone(const HermitianMatrix& x1, const HermitianMatrix& y1,
                                     const HermitianMatrix& x2, const HermitianMatrix& y2,
                                     const TraceFunctional& tau, double tol = kDefaultRelTol);

enum class RstArm {
  /// Independent eigenbases for the two triples.
  general,
  /// Compatible triples, where monotonicity is already proven.
  compatible,
};

/// One sampled pair of positive commuting triples x <= y with
/// gap = Tr(y1 y2 y3) - Tr(x1 x2 x3).
struct RstTrial {
  std::uint64_t trial = 0;
  Eigen::Index dim = 0;
  std::vector<HermitianMatrix> x;
  std::vector<HermitianMatrix> y;
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;
  [[nodiscard]] double scale() const;
};

/// Trial `trial` of the stream seeded by `seed`; independent of every other
/// trial.
RstTrial rst_trial(std::uint64_t seed, std::uint64_t trial, Eigen::Index dim_min,
                   Eigen::Index dim_max, RstArm arm);

/// {"x": [3 matrices], "y": [3 matrices]}.
nlohmann::json rst_instance_json(const RstTrial& t);

/// Independent long-double evaluation of a serialized instance.
struct RstRecheck {
  bool ordered = false;
  bool commuting = false;
  long double gap = 0.0L;
  /// ordered, commuting and gap < -1e-12 * (1 + |lhs| + |rhs|).
  bool confirmed = false;
};
RstRecheck rst_recheck(const nlohmann::json& instance);

struct RstSearchOptions {
  std::uint64_t seed = 0;
  std::uint64_t trials = 10000;
  Eigen::Index dim_min = 2;
  Eigen::Index dim_max = 6;
  RstArm arm = RstArm::general;
  double tol = kDefaultRelTol;
  unsigned workers = 1;
};

struct RstSearchResult {
  std::uint64_t trials = 0;
  std::vector<Eigen::Index> dims;
  double min_gap = 0.0;
  std::uint64_t worst_trial = 0;
  /// Present only when a trial with gap < -tol * scale survives the recheck.
  std::optional<nlohmann::json> candidate;
  /// Trials that failed at tol but not under the recheck.
  std::uint64_t rejected = 0;
};

RstSearchResult rst_counterexample_search(const RstSearchOptions& options);

/// {"trials", "dims", "min_gap", "candidate"} with candidate null when absent.
nlohmann::json to_json(const RstSearchResult& r);

}  // namespace jtrace
