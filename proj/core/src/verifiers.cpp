#include "jtrace/verifiers.hpp"

#include <cmath>
#include <optional>
#include <sstream>

namespace jtrace {

namespace {

constexpr const char* kRefThm2 = "Jensen trace inequality for a unital column";
constexpr const char* kRefField = "multivariate Jensen trace inequality for fields";
constexpr const char* kRefOneVar = "one-variable Jensen trace inequality for unital column fields";
constexpr const char* kRefMixture = "Jensen trace inequality for mixtures of compatible tuples";
constexpr const char* kRefSegment = "trace convexity on compatible tuples";
constexpr const char* kRefTensor = "Jensen trace inequality on mutually commuting subalgebras";
constexpr const char* kRefBlockZero = "leg-local Jensen trace inequality with zero padding";
constexpr const char* kRefConstant = "leg-local Jensen trace inequality with a fixed tuple";

// Relative tolerance for structural identities (unital sums, leg membership).
constexpr double kStructureTol = 1e-10;

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

std::optional<std::string> convexity_problem(const ScalarFunction& f) {
  if (!f.claimed_convex) return "f is not declared convex";
  if (!verified_convex(f)) return "f fails the midpoint convexity probe";
  return std::nullopt;
}

std::optional<std::string> abelian_problem(std::span<const HermitianMatrix> ys) {
  const AbelianCheck check = is_abelian(ys);
  if (check.abelian) return std::nullopt;
  return "integrated tuple y is not abelian (relative commutator " +
         format_double(check.worst_relative) + ")";
}

std::optional<std::string> centralizer_problem(const TraceFunctional& phi,
                                               std::span<const HermitianMatrix> ys) {
  for (std::size_t i = 0; i < ys.size(); ++i) {
    if (!in_centralizer(phi, ys[i], kCentralizerTol)) {
      return "y_" + std::to_string(i + 1) + " is not in the centralizer of phi";
    }
  }
  return std::nullopt;
}

HermitianMatrix to_hermitian(const CMatrix& m) { return HermitianMatrix(m); }

// phi(f(y)) through the joint calculus of y; nullopt when y leaves the cube.
std::optional<double> joint_side(const ScalarFunction& f, std::vector<HermitianMatrix> ys,
                                 const Cube& cube, const TraceFunctional& phi, std::string& why) {
  try {
    const AbelianTuple y(std::move(ys), cube);
    return phi(apply_multivariate(f, y));
  } catch (const DomainError& e) {
    why = std::string("integrated tuple leaves the cube: ") + e.what();
    return std::nullopt;
  }
}

// Shared body of the field verifiers.
InequalityReport field_report(const char* id, const char* reference, const ScalarFunction& f,
                              const DiscreteField& field, const TraceFunctional& phi, double tol) {
  if (!field.has_tuples()) return precondition_report(id, reference, "field carries no tuples", tol);
  if (f.arity() != field.arity()) {
    throw DimensionMismatch("function arity " + std::to_string(f.arity()) +
                            " does not match field arity " + std::to_string(field.arity()));
  }
  if (phi.dim() != field.dim()) throw DimensionMismatch("functional and field dims differ");
  if (auto p = convexity_problem(f)) return precondition_report(id, reference, *p, tol);

  std::vector<HermitianMatrix> ys = field.integrate_all();
  if (auto p = abelian_problem(ys)) return precondition_report(id, reference, *p, tol);
  if (auto p = centralizer_problem(phi, ys)) return precondition_report(id, reference, *p, tol);

  std::string why;
  const auto lhs = joint_side(f, std::move(ys), field.cube(), phi, why);
  if (!lhs) return precondition_report(id, reference, why, tol);

  double rhs = 0.0;
  for (const FieldNode& node : field.nodes()) {
    const HermitianMatrix fx = apply_multivariate(f, *node.tuple);
    rhs += node.weight * phi(sandwich(node.column, fx.matrix()));
  }
  return evaluated_report(id, reference, *lhs, rhs, tol, true);
}

std::optional<std::string> leg_problem(const LegColumnField& inst) {
  const std::size_t n = inst.leg_dims.size();
  if (inst.leg_columns.size() != n || inst.leg_ops.size() != n || inst.cube.size() != n) {
    return "leg instance has inconsistent leg counts";
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (inst.leg_columns[i].size() != inst.weights.size() ||
        inst.leg_ops[i].size() != inst.weights.size()) {
      return "leg " + std::to_string(i + 1) + " has the wrong number of nodes";
    }
  }
  // sum_i sum_t w_t a_it* a_it = 1 on the full space.
  const Eigen::Index dim = total_dim(inst.leg_dims);
  CMatrix sum = CMatrix::Zero(dim, dim);
  for (std::size_t i = 0; i < n; ++i) {
    CMatrix leg = CMatrix::Zero(inst.leg_dims[i], inst.leg_dims[i]);
    for (std::size_t t = 0; t < inst.weights.size(); ++t) {
      leg += inst.weights[t] * (inst.leg_columns[i][t].adjoint() * inst.leg_columns[i][t]);
    }
    sum += embed_leg(leg, inst.leg_dims, i);
  }
  const double residual = (sum - CMatrix::Identity(dim, dim)).norm();
  if (residual > kStructureTol * std::sqrt(static_cast<double>(dim))) {
    return "leg columns are not unital (residual " + format_double(residual) + ")";
  }
  return std::nullopt;
}

// y_i = sum_t w_t a_it* x_it a_it computed on the full space, x_it = leg_ops[i][t]
// or leg_ops[i][0] when `constant` is set.
std::vector<HermitianMatrix> full_space_tuple(const LegColumnField& inst, bool constant) {
  const std::size_t n = inst.leg_dims.size();
  const Eigen::Index dim = total_dim(inst.leg_dims);
  std::vector<HermitianMatrix> ys;
  ys.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    CMatrix y = CMatrix::Zero(dim, dim);
    CMatrix b = CMatrix::Zero(dim, dim);
    const CMatrix x = embed_leg(inst.leg_ops[i][0].matrix(), inst.leg_dims, i);
    for (std::size_t t = 0; t < inst.weights.size(); ++t) {
      const CMatrix a = embed_leg(inst.leg_columns[i][t], inst.leg_dims, i);
      const CMatrix xt = constant ? x : embed_leg(inst.leg_ops[i][t].matrix(), inst.leg_dims, i);
      y += inst.weights[t] * sandwich(a, xt);
      if (constant) b += inst.weights[t] * (a.adjoint() * a);
    }
    if (constant) y += (CMatrix::Identity(dim, dim) - b) * x;
    ys.push_back(to_hermitian(y));
  }
  return ys;
}

// ||m - m*||_F relative to 1 + ||m||_F.
double hermitian_defect(const CMatrix& m) {
  return (m - m.adjoint()).norm() / (1.0 + m.norm());
}

}  // namespace

bool verified_convex(const ScalarFunction& f) {
  return f.claimed_convex && probe_midpoint_convexity(f, kConvexityProbeSeed);
}

bool verified_concave(const ScalarFunction& f) {
  return f.claimed_concave && probe_midpoint_convexity(f, kConvexityProbeSeed, 64, true);
}

InequalityReport jensen_trace_matrix(const ScalarFunction& f, std::span<const HermitianMatrix> xs,
                                     const UnitalColumn& column, double tol) {
  if (f.arity() != 1) throw DimensionMismatch("jensen_trace_matrix needs a function of one variable");
  if (xs.size() != column.size()) throw DimensionMismatch("need one column block per matrix");
  const Eigen::Index dim = column.dim();
  for (const auto& x : xs) {
    if (x.dim() != column[0].rows()) throw DimensionMismatch("matrix and column block dims differ");
  }
  if (auto p = convexity_problem(f)) return precondition_report("thm2", kRefThm2, *p, tol);

  const TraceFunctional tr = TraceFunctional::trace(dim);
  CMatrix sum = CMatrix::Zero(dim, dim);
  for (std::size_t k = 0; k < xs.size(); ++k) sum += sandwich(column[k], xs[k].matrix());
  // Spectrum violations surface as DomainError from the calculus.
  const double lhs = tr(apply_multivariate(f, AbelianTuple({to_hermitian(sum)}, f.cube)));

  double rhs = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const HermitianMatrix fx = apply_multivariate(f, AbelianTuple({xs[k]}, f.cube));
    rhs += tr(sandwich(column[k], fx.matrix()));
  }
  return evaluated_report("thm2", kRefThm2, lhs, rhs, tol, true);
}

InequalityReport jensen_field_multivar(const ScalarFunction& f, const DiscreteField& field,
                                       const TraceFunctional& phi, double tol) {
  return field_report("thm7", kRefField, f, field, phi, tol);
}

InequalityReport jensen_one_var_field(const ScalarFunction& f, const DiscreteField& field,
                                      const TraceFunctional& phi, double tol) {
  if (field.arity() != 1) {
    return precondition_report("cor9", kRefOneVar, "field tuples must have one member", tol);
  }
  return field_report("cor9", kRefOneVar, f, field, phi, tol);
}

InequalityReport jensen_mixture(const ScalarFunction& f, std::span<const AbelianTuple> tuples,
                                std::span<const double> weights, const TraceFunctional& phi,
                                double tol) {
  constexpr const char* id = "cor10";
  if (tuples.empty() || tuples.size() != weights.size()) {
    throw DimensionMismatch("need one weight per tuple");
  }
  const std::size_t n = tuples[0].size();
  const Eigen::Index dim = tuples[0].dim();
  for (const auto& x : tuples) {
    if (x.size() != n || x.dim() != dim) throw DimensionMismatch("tuples of unequal shape");
  }
  if (f.arity() != n) throw DimensionMismatch("function arity does not match tuple length");
  if (phi.dim() != dim) throw DimensionMismatch("functional and tuple dims differ");

  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) return precondition_report(id, kRefMixture, "negative weight", tol);
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12 * static_cast<double>(weights.size())) {
    return precondition_report(id, kRefMixture, "weights do not sum to 1", tol);
  }
  for (std::size_t t = 0; t < tuples.size(); ++t) {
    for (std::size_t s = t + 1; s < tuples.size(); ++s) {
      if (!compatible(tuples[t], tuples[s])) {
        return precondition_report(id, kRefMixture,
                                   "tuples " + std::to_string(t + 1) + " and " +
                                       std::to_string(s + 1) + " violate [x_it, x_js] = [x_jt, x_is]",
                                   tol);
      }
    }
  }
  if (auto p = convexity_problem(f)) return precondition_report(id, kRefMixture, *p, tol);

  std::vector<HermitianMatrix> ys;
  for (std::size_t i = 0; i < n; ++i) {
    CMatrix y = CMatrix::Zero(dim, dim);
    for (std::size_t t = 0; t < tuples.size(); ++t) y += weights[t] * tuples[t][i].matrix();
    ys.push_back(to_hermitian(y));
  }
  if (auto p = abelian_problem(ys)) return precondition_report(id, kRefMixture, *p, tol);
  if (auto p = centralizer_problem(phi, ys)) return precondition_report(id, kRefMixture, *p, tol);

  std::string why;
  const auto lhs = joint_side(f, std::move(ys), f.cube, phi, why);
  if (!lhs) return precondition_report(id, kRefMixture, why, tol);

  double rhs = 0.0;
  for (std::size_t t = 0; t < tuples.size(); ++t) {
    rhs += weights[t] * phi(apply_multivariate(f, tuples[t]));
  }
  return evaluated_report(id, kRefMixture, *lhs, rhs, tol, true);
}

std::vector<InequalityReport> trace_convexity_segment(const ScalarFunction& f,
                                                      const AbelianTuple& x, const AbelianTuple& y,
                                                      const TraceFunctional& tau,
                                                      std::span<const double> grid, double tol) {
  constexpr const char* id = "cor11";
  if (x.size() != y.size() || x.dim() != y.dim()) throw DimensionMismatch("tuples of unequal shape");
  if (f.arity() != x.size()) throw DimensionMismatch("function arity does not match tuple length");
  if (tau.dim() != x.dim()) throw DimensionMismatch("functional and tuple dims differ");

  std::optional<std::string> problem;
  if (!compatible(x, y)) {
    problem = "x and y are not compatible (residual " +
              format_double(compatibility_residual(x, y)) + ")";
  } else if (!tau.is_tracial()) {
    problem = "the functional is not a trace";
  } else {
    problem = convexity_problem(f);
  }
  std::vector<InequalityReport> out;
  out.reserve(grid.size());
  if (problem) {
    for (std::size_t k = 0; k < grid.size(); ++k) out.push_back(precondition_report(id, kRefSegment, *problem, tol));
    return out;
  }

  const double fx = tau(apply_multivariate(f, x));
  const double fy = tau(apply_multivariate(f, y));
  for (double s : grid) {
    if (!(s >= 0.0 && s <= 1.0)) {
      out.push_back(precondition_report(id, kRefSegment, "grid value outside [0, 1]", tol));
      continue;
    }
    std::string why;
    const auto lhs = joint_side(f, blend(x.members(), y.members(), s), f.cube, tau, why);
    if (!lhs) {
      out.push_back(precondition_report(id, kRefSegment, why, tol));
      continue;
    }
    InequalityReport r = evaluated_report(id, kRefSegment, *lhs, s * fx + (1.0 - s) * fy, tol, true);
    r.metadata["s"] = s;
    out.push_back(std::move(r));
  }
  return out;
}

InequalityReport jensen_subalgebra_tensor(const ScalarFunction& f, const TensorField& instance,
                                          const TraceFunctional& phi, double tol) {
  constexpr const char* id = "cor12";
  const DiscreteField& field = instance.field;
  if (instance.leg_ops.size() != field.size()) {
    throw DimensionMismatch("tensor instance needs leg operators for every node");
  }
  for (std::size_t t = 0; t < field.size(); ++t) {
    const auto& node = field[t];
    if (!node.tuple || node.tuple->size() != instance.leg_dims.size()) {
      return precondition_report(id, kRefTensor, "node tuple does not have one member per leg", tol);
    }
    for (std::size_t i = 0; i < instance.leg_dims.size(); ++i) {
      const CMatrix embedded = embed_leg(instance.leg_ops[t][i].matrix(), instance.leg_dims, i);
      const CMatrix& full = (*node.tuple)[i].matrix();
      if ((full - embedded).norm() > kStructureTol * (1.0 + full.norm())) {
        return precondition_report(id, kRefTensor,
                                   "x_" + std::to_string(i + 1) + " of node " + std::to_string(t + 1) +
                                       " is not supported on leg " + std::to_string(i + 1),
                                   tol);
      }
    }
  }
  return field_report(id, kRefTensor, f, field, phi, tol);
}

std::vector<HermitianMatrix> block_zero_tuple(const LegColumnField& instance) {
  return full_space_tuple(instance, false);
}

std::vector<HermitianMatrix> constant_tuple(const LegColumnField& instance) {
  return full_space_tuple(instance, true);
}

InequalityReport jensen_block_zero(const ScalarFunction& f, const LegColumnField& instance,
                                   const TraceFunctional& phi, double tol) {
  constexpr const char* id = "cor13";
  const std::size_t n = instance.leg_dims.size();
  if (f.arity() != n) throw DimensionMismatch("function arity does not match the number of legs");
  if (phi.dim() != total_dim(instance.leg_dims)) throw DimensionMismatch("functional and instance dims differ");
  for (std::size_t i = 0; i < n; ++i) {
    if (!f.cube[i].contains(0.0)) {
      return precondition_report(id, kRefBlockZero,
                                 "cube side " + std::to_string(i + 1) + " does not contain 0", tol);
    }
  }
  if (auto p = leg_problem(instance)) return precondition_report(id, kRefBlockZero, *p, tol);
  if (auto p = convexity_problem(f)) return precondition_report(id, kRefBlockZero, *p, tol);

  std::vector<HermitianMatrix> ys = block_zero_tuple(instance);
  // Membership: y_i must be the embedding of the leg-local integral.
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Index d = instance.leg_dims[i];
    CMatrix local = CMatrix::Zero(d, d);
    for (std::size_t t = 0; t < instance.weights.size(); ++t) {
      local += instance.weights[t] * sandwich(instance.leg_columns[i][t], instance.leg_ops[i][t].matrix());
    }
    const CMatrix embedded = embed_leg(local, instance.leg_dims, i);
    if ((ys[i].matrix() - embedded).norm() > kStructureTol * (1.0 + ys[i].norm())) {
      return precondition_report(id, kRefBlockZero,
                                 "y_" + std::to_string(i + 1) + " is not supported on leg " +
                                     std::to_string(i + 1),
                                 tol);
    }
  }
  if (auto p = abelian_problem(ys)) return precondition_report(id, kRefBlockZero, *p, tol);
  if (auto p = centralizer_problem(phi, ys)) return precondition_report(id, kRefBlockZero, *p, tol);

  std::string why;
  const auto lhs = joint_side(f, std::move(ys), f.cube, phi, why);
  if (!lhs) return precondition_report(id, kRefBlockZero, why, tol);

  double rhs = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    // g_i(l) = f(0, .., l, .., 0) on leg i.
    ScalarFunction g;
    g.name = f.name + "_leg";
    g.cube = {f.cube[i]};
    g.eval = [&f, i, n](Point p) {
      std::vector<double> full(n, 0.0);
      full[i] = p[0];
      return f.eval(full);
    };
    for (std::size_t t = 0; t < instance.weights.size(); ++t) {
      const HermitianMatrix gx = apply_univariate(g, instance.leg_ops[i][t]);
      const CMatrix a = embed_leg(instance.leg_columns[i][t], instance.leg_dims, i);
      rhs += instance.weights[t] * phi(sandwich(a, embed_leg(gx.matrix(), instance.leg_dims, i)));
    }
  }
  return evaluated_report(id, kRefBlockZero, *lhs, rhs, tol, true);
}

InequalityReport jensen_constant_tuple(const ScalarFunction& f, const LegColumnField& instance,
                                       const TraceFunctional& phi, double tol) {
  constexpr const char* id = "cor14";
  const std::size_t n = instance.leg_dims.size();
  if (f.arity() != n) throw DimensionMismatch("function arity does not match the number of legs");
  if (phi.dim() != total_dim(instance.leg_dims)) throw DimensionMismatch("functional and instance dims differ");
  if (auto p = leg_problem(instance)) return precondition_report(id, kRefConstant, *p, tol);
  if (auto p = convexity_problem(f)) return precondition_report(id, kRefConstant, *p, tol);

  // (1 - b_i) x_i must be self-adjoint for y_i to be.
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Index d = instance.leg_dims[i];
    CMatrix b = CMatrix::Zero(d, d);
    for (std::size_t t = 0; t < instance.weights.size(); ++t) {
      b += instance.weights[t] * (instance.leg_columns[i][t].adjoint() * instance.leg_columns[i][t]);
    }
    const CMatrix rest = (CMatrix::Identity(d, d) - b) * instance.leg_ops[i][0].matrix();
    if (hermitian_defect(rest) > kStructureTol) {
      return precondition_report(id, kRefConstant,
                                 "(1 - b_" + std::to_string(i + 1) + ") x_" + std::to_string(i + 1) +
                                     " is not self-adjoint",
                                 tol);
    }
  }

  std::vector<HermitianMatrix> ys = constant_tuple(instance);
  if (auto p = abelian_problem(ys)) return precondition_report(id, kRefConstant, *p, tol);
  if (auto p = centralizer_problem(phi, ys)) return precondition_report(id, kRefConstant, *p, tol);

  std::string why;
  const auto lhs = joint_side(f, std::move(ys), f.cube, phi, why);
  if (!lhs) return precondition_report(id, kRefConstant, why, tol);

  std::vector<HermitianMatrix> xs;
  for (std::size_t i = 0; i < n; ++i) {
    xs.push_back(to_hermitian(embed_leg(instance.leg_ops[i][0].matrix(), instance.leg_dims, i)));
  }
  const HermitianMatrix fx = apply_multivariate(f, AbelianTuple(std::move(xs), f.cube));
  double rhs = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t t = 0; t < instance.weights.size(); ++t) {
      const CMatrix a = embed_leg(instance.leg_columns[i][t], instance.leg_dims, i);
      rhs += instance.weights[t] * phi(sandwich(a, fx.matrix()));
    }
  }
  return evaluated_report(id, kRefConstant, *lhs, rhs, tol, true);
}

}  // namespace jtrace
