#include "jtrace/monotonicity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include <Eigen/Eigenvalues>

#include "jtrace/serialize.hpp"
#include "jtrace/simplex.hpp"
#include "jtrace/verifiers.hpp"

namespace jtrace {

namespace {

constexpr const char* kRefMonotone = "trace monotonicity of convex or concave increasing functions";
constexpr const char* kRefPath = "trace monotonicity along compatible paths";
constexpr const char* kRefTwoFactor = "two-factor trace monotonicity";

constexpr double kDerivativeFloor = 1e-8;

std::vector<HermitianMatrix> shifted(const AbelianTuple& x, std::span<const HermitianMatrix> h,
                                     double t) {
  if (h.size() != x.size()) throw DimensionMismatch("direction must have one member per tuple entry");
  std::vector<HermitianMatrix> z;
  z.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (h[i].dim() != x.dim()) throw DimensionMismatch("direction and tuple dims differ");
    z.push_back(x[i] + t * h[i]);
  }
  return z;
}

std::vector<HermitianMatrix> difference(const AbelianTuple& y, const AbelianTuple& x) {
  std::vector<HermitianMatrix> h;
  h.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) h.push_back(y[i] - x[i]);
  return h;
}

bool centralized(const TraceFunctional& phi, const AbelianTuple& t) {
  return in_centralizer(phi, std::span<const HermitianMatrix>(t.members()), kCentralizerTol);
}

// Index of the first pair x_i <= y_i that fails, or nullopt.
std::optional<std::size_t> order_violation(const AbelianTuple& x, const AbelianTuple& y) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!psd_leq(x[i], y[i])) return i;
  }
  return std::nullopt;
}

// Recasts a tuple onto f's cube; nullopt when a spectrum lies outside it.
std::optional<AbelianTuple> on_cube(const AbelianTuple& t, const Cube& cube) {
  try {
    return AbelianTuple(t.members(), cube);
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

}  // namespace

InequalityReport monotone_trace_check(const ScalarFunction& f, const AbelianTuple& x,
                                      const AbelianTuple& y, const TraceFunctional& phi,
                                      double tol) {
  constexpr const char* id = "thm16";
  if (x.size() != y.size() || x.dim() != y.dim()) throw DimensionMismatch("tuples of unequal shape");
  if (f.arity() != x.size()) throw DimensionMismatch("function arity does not match tuple length");
  if (phi.dim() != x.dim()) throw DimensionMismatch("functional and tuple dims differ");

  if (!f.claimed_monotone_increasing) {
    return precondition_report(id, kRefMonotone, "f is not declared increasing in each variable", tol);
  }
  if (auto i = order_violation(x, y)) {
    return precondition_report(id, kRefMonotone,
                               "x_" + std::to_string(*i + 1) + " <= y_" + std::to_string(*i + 1) +
                                   " fails",
                               tol);
  }
  const auto xs = on_cube(x, f.cube);
  const auto ys = on_cube(y, f.cube);
  if (!xs || !ys) return precondition_report(id, kRefMonotone, "a spectrum leaves the cube of f", tol);

  const bool convex = verified_convex(f);
  const bool concave = verified_concave(f);
  const bool x_central = centralized(phi, x);
  const bool y_central = centralized(phi, y);
  std::string branch;
  if (convex && x_central) {
    branch = "convex";
  } else if (concave && y_central) {
    branch = "concave";
  } else {
    std::string why = "neither branch holds:";
    why += convex ? " f convex but x is not centralized by phi;" : " f is not verified convex;";
    why += concave ? " f concave but y is not centralized by phi" : " f is not verified concave";
    return precondition_report(id, kRefMonotone, why, tol);
  }

  const double lhs = phi(apply_multivariate(f, *xs));
  const double rhs = phi(apply_multivariate(f, *ys));
  InequalityReport r = evaluated_report(id, kRefMonotone, lhs, rhs, tol, true);
  r.metadata["branch"] = branch;
  return r;
}

double path_value(const ScalarFunction& f, const AbelianTuple& x, std::span<const HermitianMatrix> h,
                  double t, const TraceFunctional& phi) {
  return phi(apply_multivariate(f, AbelianTuple(shifted(x, h, t), f.cube)));
}

double path_derivative(const ScalarFunction& f, const AbelianTuple& x,
                       std::span<const HermitianMatrix> h, double t, const TraceFunctional& phi) {
  if (f.arity() != x.size()) throw DimensionMismatch("function arity does not match tuple length");
  const AbelianTuple end = AbelianTuple::with_spectral_cube(shifted(x, h, 1.0));
  if (!compatible(x, end)) throw PreconditionError("x and x + h are not compatible");
  if (!centralized(phi, x) || !centralized(phi, end)) {
    throw PreconditionError("x and x + h must lie in the centralizer of phi");
  }
  const AbelianTuple z(shifted(x, h, t), f.cube);
  const JointSpectralDecomposition d = joint_diagonalize(z);
  double sum = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const HermitianMatrix fk = apply_multivariate(partial_function(f, k), z, d);
    sum += phi(CMatrix(fk.matrix() * h[k].matrix()));
  }
  return sum;
}

InequalityReport path_monotonicity_check(const ScalarFunction& f, const AbelianTuple& x,
                                         const AbelianTuple& y, const TraceFunctional& phi,
                                         std::span<const double> grid, double tol) {
  constexpr const char* id = "prop18";
  if (x.size() != y.size() || x.dim() != y.dim()) throw DimensionMismatch("tuples of unequal shape");
  if (f.arity() != x.size()) throw DimensionMismatch("function arity does not match tuple length");
  if (phi.dim() != x.dim()) throw DimensionMismatch("functional and tuple dims differ");

  if (!f.claimed_monotone_increasing) {
    return precondition_report(id, kRefPath, "f is not declared increasing in each variable", tol);
  }
  if (!compatible(x, y)) {
    return precondition_report(id, kRefPath,
                               "x and y are not compatible (residual " +
                                   std::to_string(compatibility_residual(x, y)) + ")",
                               tol);
  }
  if (auto i = order_violation(x, y)) {
    return precondition_report(id, kRefPath,
                               "x_" + std::to_string(*i + 1) + " <= y_" + std::to_string(*i + 1) +
                                   " fails",
                               tol);
  }
  if (!on_cube(x, f.cube) || !on_cube(y, f.cube)) {
    return precondition_report(id, kRefPath, "a spectrum leaves the cube of f", tol);
  }
  if (!centralized(phi, x) || !centralized(phi, y)) {
    return precondition_report(id, kRefPath, "x and y must lie in the centralizer of phi", tol);
  }
  if (grid.empty() || !std::is_sorted(grid.begin(), grid.end()) || grid.front() < 0.0 ||
      grid.back() > 1.0) {
    return precondition_report(id, kRefPath, "grid must be sorted inside [0, 1]", tol);
  }

  const std::vector<HermitianMatrix> h = difference(y, x);
  const double g0 = path_value(f, x, h, 0.0, phi);
  const double g1 = path_value(f, x, h, 1.0, phi);
  InequalityReport r = evaluated_report(id, kRefPath, g0, g1, tol, true);
  const double scale = r.scale();

  double worst_step = 0.0;
  double worst_derivative = std::numeric_limits<double>::infinity();
  double previous = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double g = path_value(f, x, h, grid[k], phi);
    if (k > 0) worst_step = std::min(worst_step, g - previous);
    previous = g;
    worst_derivative = std::min(worst_derivative, path_derivative(f, x, h, grid[k], phi));
  }
  r.metadata["min_step"] = worst_step;
  r.metadata["min_derivative"] = worst_derivative;
  if (worst_step < -tol * scale) {
    r.verdict = Verdict::fail;
    r.detail = "g decreases between grid points";
  } else if (worst_derivative < -kDerivativeFloor * scale) {
    r.verdict = Verdict::fail;
    r.detail = "negative path derivative";
  }
  return r;
}

CMatrix exp_directional_derivative(const HermitianMatrix& a, const HermitianMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("exp derivative of unequal dims");
  const Eigensystem es = eigensystem(a);
  const CMatrix& v = es.vectors;
  CMatrix m = v.adjoint() * b.matrix() * v;
  const Eigen::Index d = a.dim();
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      const double li = es.values(i);
      const double lj = es.values(j);
      const double delta = li - lj;
      double q;
      if (std::abs(delta) < 1e-8 * (1.0 + std::abs(li))) {
        q = std::exp(0.5 * (li + lj));
      } else {
        // (e^li - e^lj) / (li - lj) = e^lj expm1(delta) / delta
        q = std::exp(lj) * std::expm1(delta) / delta;
      }
      m(i, j) *= q;
    }
  }
  return v * m * v.adjoint();
}

SplitCertificate monotone_split_lp(std::span<const double> grid, std::span<const double> target,
                                   SplitOptions options) {
  const std::size_t n = grid.size();
  if (n < 3) throw PreconditionError("the splitting LP needs at least 3 grid points");
  if (target.size() != n) throw DimensionMismatch("one target value per grid point expected");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(grid[i] > grid[i - 1])) throw PreconditionError("grid must be strictly increasing");
  }

  // Basis functions on the grid: f+ = c + sum v_k p_k, f- = sum u_k q_k with
  // v, u >= 0. Convex increasing parts use ramps (t - t_k)_+, concave
  // increasing parts use min(t - t_0, t_k - t_0), plain increasing parts use
  // steps [t >= t_k].
  const auto ni = static_cast<Eigen::Index>(n);
  std::vector<Eigen::VectorXd> plus_basis;
  std::vector<Eigen::VectorXd> minus_basis;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    Eigen::VectorXd p(ni);
    for (std::size_t i = 0; i < n; ++i) {
      p(static_cast<Eigen::Index>(i)) = options.convex_plus ? std::max(0.0, grid[i] - grid[k])
                                                            : (i > k ? 1.0 : 0.0);
    }
    plus_basis.push_back(std::move(p));
  }
  for (std::size_t k = 1; k < n; ++k) {
    Eigen::VectorXd q(ni);
    for (std::size_t i = 0; i < n; ++i) {
      q(static_cast<Eigen::Index>(i)) = options.concave_minus
                                            ? std::min(grid[i] - grid[0], grid[k] - grid[0])
                                            : (i >= k ? 1.0 : 0.0);
    }
    minus_basis.push_back(std::move(q));
  }

  // Variables: c (free), v, u, e. Rows: +-(f+ + f-)(t_i) - e <= +-s_i.
  const auto nv = static_cast<Eigen::Index>(plus_basis.size());
  const auto nu = static_cast<Eigen::Index>(minus_basis.size());
  const Eigen::Index vars = 1 + nv + nu + 1;
  const Eigen::Index e_col = vars - 1;
  LinearProgram lp;
  lp.cost = Eigen::VectorXd::Zero(vars);
  lp.cost(e_col) = 1.0;
  lp.free.assign(static_cast<std::size_t>(vars), false);
  lp.free[0] = true;
  lp.a_ub = Eigen::MatrixXd::Zero(2 * ni, vars);
  lp.b_ub = Eigen::VectorXd::Zero(2 * ni);
  for (Eigen::Index i = 0; i < ni; ++i) {
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(vars);
    row(0) = 1.0;
    for (Eigen::Index k = 0; k < nv; ++k) row(1 + k) = plus_basis[static_cast<std::size_t>(k)](i);
    for (Eigen::Index k = 0; k < nu; ++k) row(1 + nv + k) = minus_basis[static_cast<std::size_t>(k)](i);
    const double s = target[static_cast<std::size_t>(i)];
    lp.a_ub.row(2 * i) = row;
    lp.a_ub(2 * i, e_col) = -1.0;
    lp.b_ub(2 * i) = s;
    lp.a_ub.row(2 * i + 1) = -row;
    lp.a_ub(2 * i + 1, e_col) = -1.0;
    lp.b_ub(2 * i + 1) = -s;
  }

  const LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::optimal) throw Error("splitting LP did not reach an optimum");

  SplitCertificate cert;
  cert.n = n;
  cert.grid.assign(grid.begin(), grid.end());
  cert.plus.assign(n, sol.x(0));
  cert.minus.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    for (Eigen::Index k = 0; k < nv; ++k) cert.plus[i] += sol.x(1 + k) * plus_basis[static_cast<std::size_t>(k)](ii);
    for (Eigen::Index k = 0; k < nu; ++k) cert.minus[i] += sol.x(1 + nv + k) * minus_basis[static_cast<std::size_t>(k)](ii);
  }
  // Report the achieved deviation of the certificate rather than the LP's e.
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    worst = std::max(worst, std::abs(target[i] - cert.plus[i] - cert.minus[i]));
  }
  cert.optimum = worst;
  return cert;
}

SplitCertificate sin_decomposition_lp(std::size_t n, SplitOptions options) {
  if (n < 3) throw PreconditionError("the splitting LP needs at least 3 grid points");
  std::vector<double> grid(n);
  std::vector<double> target(n);
  const double half = std::numbers::pi / 2.0;
  for (std::size_t i = 0; i < n; ++i) {
    grid[i] = -half + std::numbers::pi * static_cast<double>(i) / static_cast<double>(n - 1);
    target[i] = std::sin(grid[i]);
  }
  return monotone_split_lp(grid, target, options);
}

InequalityReport two_factor_monotone(const HermitianMatrix& x1, const HermitianMatrix& y1,
                                     const HermitianMatrix& x2, const HermitianMatrix& y2,
                                     const TraceFunctional& tau, double tol) {
  constexpr const char* id = "two_factor";
  const Eigen::Index d = x1.dim();
  if (y1.dim() != d || x2.dim() != d || y2.dim() != d || tau.dim() != d) {
    throw DimensionMismatch("two-factor check needs equal dims");
  }
  const HermitianMatrix zero = HermitianMatrix::zero(d);
  const std::pair<const HermitianMatrix*, const char*> named[] = {
      {&x1, "x1"}, {&y1, "y1"}, {&x2, "x2"}, {&y2, "y2"}};
  for (const auto& [m, name] : named) {
    if (!psd_leq(zero, *m)) {
      return precondition_report(id, kRefTwoFactor, std::string(name) + " is not positive semidefinite", tol);
    }
  }
  if (!psd_leq(x1, x2)) return precondition_report(id, kRefTwoFactor, "x1 <= x2 fails", tol);
  if (!psd_leq(y1, y2)) return precondition_report(id, kRefTwoFactor, "y1 <= y2 fails", tol);
  if (!tau.is_tracial()) return precondition_report(id, kRefTwoFactor, "the functional is not a trace", tol);

  const double lhs = tau(CMatrix(x1.matrix() * y1.matrix()));
  const double rhs = tau(CMatrix(x2.matrix() * y2.matrix()));
  return evaluated_report(id, kRefTwoFactor, lhs, rhs, tol, true);
}

// ---------------------------------------------------------------------------
// rst search

double RstTrial::scale() const { return 1.0 + std::abs(lhs) + std::abs(rhs); }

namespace {

HermitianMatrix from_basis(const CMatrix& u, const RVector& values) {
  return HermitianMatrix(u * values.cast<Complex>().asDiagonal() * u.adjoint());
}

// exp(i eps H) for a GUE draw H: a random rotation near the identity.
CMatrix small_rotation(Rng& rng, Eigen::Index dim, double eps) {
  const Eigensystem es = eigensystem(random_hermitian(rng, dim, {-1.0, 1.0}));
  CVector phases(dim);
  for (Eigen::Index j = 0; j < dim; ++j) phases(j) = std::polar(1.0, eps * es.values(j));
  return es.vectors * phases.asDiagonal() * es.vectors.adjoint();
}

double product_trace(const std::vector<HermitianMatrix>& t) {
  const AbelianTuple tuple = AbelianTuple::with_spectral_cube(t);
  const ScalarFunction f = catalog("product3", 3, tuple.cube());
  return apply_multivariate(f, tuple).trace();
}

void general_pair(Rng& rng, Eigen::Index dim, std::vector<HermitianMatrix>& x,
                  std::vector<HermitianMatrix>& y) {
  const CMatrix u = haar_unitary(rng, dim);
  // Three sampling modes: a fresh y basis, a slightly rotated basis with
  // fresh eigenvalues, and a slightly rotated basis whose eigenvalues are
  // those of x pulled down a little (pairs close to the order boundary).
  const auto mode = rng.uniform_int(0, 2);
  const CMatrix v = mode == 0 ? haar_unitary(rng, dim)
                              : CMatrix(u * small_rotation(rng, dim, rng.uniform(0.0, 0.3)));
  const double pull = rng.uniform(0.0, 0.3);
  for (int i = 0; i < 3; ++i) {
    RVector a(dim), b(dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
      a(j) = rng.uniform(0.0, 1.0);
      b(j) = mode == 2 ? std::max(0.0, a(j) - pull * rng.uniform(0.0, 1.0)) : rng.uniform(0.0, 1.0);
    }
    x.push_back(from_basis(u, a));
    HermitianMatrix yi = from_basis(v, b);
    // Smallest scalar shift that makes x_i <= y_i.
    const double shift = std::max(0.0, -min_eigenvalue(yi - x.back()));
    yi = yi + shift * HermitianMatrix::identity(dim);
    y.push_back(std::move(yi));
  }
}

void compatible_pair(Rng& rng, Eigen::Index dim, std::uint64_t trial,
                     std::vector<HermitianMatrix>& x, std::vector<HermitianMatrix>& y) {
  if (trial % 2 == 0) {
    const std::vector<double> eps = {rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)};
    const CommutantPair pair = compatible_pair_commutant(rng, dim, eps, {.ordered_positive = true});
    x = pair.x.members();
    y = pair.y.members();
    return;
  }
  // Shared eigenbasis with entrywise ordered eigenvalues.
  const CMatrix u = haar_unitary(rng, dim);
  for (int i = 0; i < 3; ++i) {
    RVector a(dim), b(dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
      a(j) = rng.uniform(0.0, 1.0);
      b(j) = a(j) + rng.uniform(0.0, 1.0);
    }
    x.push_back(from_basis(u, a));
    y.push_back(from_basis(u, b));
  }
}

using LMatrix = Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, Eigen::Dynamic>;

LMatrix long_matrix(const nlohmann::json& j) { return matrix_from_json(j).cast<std::complex<long double>>(); }

long double long_norm(const LMatrix& m) {
  long double s = 0.0L;
  for (Eigen::Index i = 0; i < m.size(); ++i) s += std::norm(m(i));
  return std::sqrt(s);
}

}  // namespace

RstTrial rst_trial(std::uint64_t seed, std::uint64_t trial, Eigen::Index dim_min,
                   Eigen::Index dim_max, RstArm arm) {
  if (dim_min < 1 || dim_max < dim_min) throw ConfigError("invalid dimension range for the rst search");
  Rng rng(seed, trial);
  RstTrial t;
  t.trial = trial;
  t.dim = static_cast<Eigen::Index>(
      rng.uniform_int(static_cast<std::uint64_t>(dim_min), static_cast<std::uint64_t>(dim_max)));
  if (arm == RstArm::general) {
    general_pair(rng, t.dim, t.x, t.y);
  } else {
    compatible_pair(rng, t.dim, trial, t.x, t.y);
  }
  t.lhs = product_trace(t.x);
  t.rhs = product_trace(t.y);
  t.gap = t.rhs - t.lhs;
  return t;
}

nlohmann::json rst_instance_json(const RstTrial& t) {
  nlohmann::json x = nlohmann::json::array();
  nlohmann::json y = nlohmann::json::array();
  for (const auto& m : t.x) x.push_back(hermitian_to_json(m));
  for (const auto& m : t.y) y.push_back(hermitian_to_json(m));
  return {{"x", x}, {"y", y}};
}

RstRecheck rst_recheck(const nlohmann::json& instance) {
  std::vector<LMatrix> x;
  std::vector<LMatrix> y;
  for (const auto& m : instance.at("x")) x.push_back(long_matrix(m));
  for (const auto& m : instance.at("y")) y.push_back(long_matrix(m));
  if (x.size() != 3 || y.size() != 3) throw DimensionMismatch("rst instances hold two triples");

  constexpr long double tight = 1e-12L;
  RstRecheck out;
  out.ordered = true;
  out.commuting = true;
  for (int i = 0; i < 3; ++i) {
    const LMatrix diff = y[i] - x[i];
    Eigen::SelfAdjointEigenSolver<LMatrix> es(diff, Eigen::EigenvaluesOnly);
    const long double scale = 1.0L + std::max(long_norm(x[i]), long_norm(y[i]));
    if (es.eigenvalues().minCoeff() < -tight * scale) out.ordered = false;
    for (int j = i + 1; j < 3; ++j) {
      for (const auto* t : {&x, &y}) {
        const LMatrix& a = (*t)[i];
        const LMatrix& b = (*t)[j];
        if (long_norm(a * b - b * a) > tight * (1.0L + long_norm(a) * long_norm(b))) out.commuting = false;
      }
    }
  }
  const long double lhs = (x[0] * x[1] * x[2]).trace().real();
  const long double rhs = (y[0] * y[1] * y[2]).trace().real();
  out.gap = rhs - lhs;
  out.confirmed = out.ordered && out.commuting &&
                  out.gap < -tight * (1.0L + std::abs(lhs) + std::abs(rhs));
  return out;
}

RstSearchResult rst_counterexample_search(const RstSearchOptions& options) {
  if (options.trials == 0) throw ConfigError("the rst search needs at least one trial");
  struct Outcome {
    double gap = 0.0;
    bool failed = false;
    bool confirmed = false;
    nlohmann::json candidate;
  };
  std::vector<Outcome> outcomes(options.trials);

  auto work = [&](std::uint64_t begin, std::uint64_t step) {
    for (std::uint64_t k = begin; k < options.trials; k += step) {
      const RstTrial t = rst_trial(options.seed, k, options.dim_min, options.dim_max, options.arm);
      Outcome& o = outcomes[k];
      o.gap = t.gap;
      o.failed = t.gap < -options.tol * t.scale();
      if (!o.failed) continue;
      const nlohmann::json instance = rst_instance_json(t);
      const RstRecheck check = rst_recheck(instance);
      o.confirmed = check.confirmed;
      if (o.confirmed) {
        InstanceManifest manifest{options.seed, k, "rst_trial",
                                  {{"dim_min", options.dim_min},
                                   {"dim_max", options.dim_max},
                                   {"arm", options.arm == RstArm::general ? "general" : "compatible"}}};
        o.candidate = {{"trial", k},
                       {"dim", t.dim},
                       {"gap", t.gap},
                       {"recheck_gap", static_cast<double>(check.gap)},
                       {"manifest", manifest},
                       {"instance", instance}};
      }
    }
  };
  const unsigned workers = std::max(1U, options.workers);
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
    for (auto& th : pool) th.join();
  }

  RstSearchResult r;
  r.trials = options.trials;
  for (Eigen::Index d = options.dim_min; d <= options.dim_max; ++d) r.dims.push_back(d);
  r.min_gap = outcomes[0].gap;
  for (std::uint64_t k = 0; k < options.trials; ++k) {
    const Outcome& o = outcomes[k];
    if (o.gap < r.min_gap) {
      r.min_gap = o.gap;
      r.worst_trial = k;
    }
    if (o.failed && !o.confirmed) ++r.rejected;
    if (o.confirmed && !r.candidate) r.candidate = o.candidate;
  }
  return r;
}

nlohmann::json to_json(const RstSearchResult& r) {
  return {{"trials", r.trials},
          {"dims", r.dims},
          {"min_gap", r.min_gap},
          {"worst_trial", r.worst_trial},
          {"rejected", r.rejected},
          {"candidate", r.candidate ? *r.candidate : nlohmann::json(nullptr)}};
}

}  // namespace jtrace
