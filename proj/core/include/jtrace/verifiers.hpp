#pragma once

// Jensen-type trace inequalities. Every verifier checks the hypotheses of
// the statement it evaluates; when one fails it returns a
// precondition-failed report instead of a verdict. The left side is always
// computed through the joint calculus of the integrated tuple y and the
// right side through per-node calculus, so the two sides share no
// functional-calculus call.

#include <span>
#include <vector>

#include "jtrace/calculus.hpp"
#include "jtrace/functionals.hpp"
#include "jtrace/instances.hpp"
#include "jtrace/report.hpp"

namespace jtrace {

/// Seed of the midpoint probe that backs a convexity (or concavity) claim.
inline constexpr std::uint64_t kConvexityProbeSeed = 0x5eed;

/// claimed_convex and the midpoint probe passes.
bool verified_convex(const ScalarFunction& f);
bool verified_concave(const ScalarFunction& f);

/// Tr f(sum_k a_k* x_k a_k) <= Tr sum_k a_k* f(x_k) a_k for convex f of one
/// variable. Throws DomainError when a spectrum leaves f's interval.
InequalityReport jensen_trace_matrix(const ScalarFunction& f, std::span<const HermitianMatrix> xs,
                                     const UnitalColumn& column, double tol = kDefaultRelTol);

/// phi(f(y)) <= phi(sum_t w_t a_t* f(x_t) a_t) with y = sum_t w_t a_t* x_t a_t,
/// for convex f on the field's cube, y abelian and centralized by phi.
InequalityReport jensen_field_multivar(const ScalarFunction& f, const DiscreteField& field,
                                       const TraceFunctional& phi, double tol = kDefaultRelTol);

/// One-variable field version.
InequalityReport jensen_one_var_field(const ScalarFunction& f, const DiscreteField& field,
                                      const TraceFunctional& phi, double tol = kDefaultRelTol);

/// phi(f(sum_t w_t x_t)) <= sum_t w_t phi(f(x_t)) for probability weights and
/// tuples with [x_it, x_js] = [x_jt, x_is] for all i, j, s, t.
InequalityReport jensen_mixture(const ScalarFunction& f, std::span<const AbelianTuple> tuples,
                                std::span<const double> weights, const TraceFunctional& phi,
                                double tol = kDefaultRelTol);

/// tau(f(s x + (1-s) y)) <= s tau(f(x)) + (1-s) tau(f(y)) at every grid value
/// s, for compatible x, y and a trace tau.
std::vector<InequalityReport> trace_convexity_segment(const ScalarFunction& f,
                                                      const AbelianTuple& x, const AbelianTuple& y,
                                                      const TraceFunctional& tau,
                                                      std::span<const double> grid,
                                                      double tol = kDefaultRelTol);

/// Field inequality on a tensor product where x_it acts on leg i only.
InequalityReport jensen_subalgebra_tensor(const ScalarFunction& f, const TensorField& instance,
                                          const TraceFunctional& phi, double tol = kDefaultRelTol);

/// phi(f(y_1, ..., y_n)) <= phi(sum_i sum_t w_t a_it* f(0, .., x_it, .., 0) a_it)
/// with y_i = sum_t w_t a_it* x_it a_it on leg i. Needs 0 in every cube side.
InequalityReport jensen_block_zero(const ScalarFunction& f, const LegColumnField& instance,
                                   const TraceFunctional& phi, double tol = kDefaultRelTol);

/// phi(f(y)) <= phi(sum_i sum_t w_t a_it* f(x_1, .., x_n) a_it) with
/// y_i = sum_t w_t a_it* x_i a_it + (1 - b_i) x_i, b_i = sum_t w_t a_it* a_it.
/// Uses leg_ops[i][0] as the fixed x_i.
InequalityReport jensen_constant_tuple(const ScalarFunction& f, const LegColumnField& instance,
                                       const TraceFunctional& phi, double tol = kDefaultRelTol);

/// Integrated tuples of the leg-column constructions on the full tensor
/// space (used by tests and to build centralizing states).
std::vector<HermitianMatrix> block_zero_tuple(const LegColumnField& instance);
std::vector<HermitianMatrix> constant_tuple(const LegColumnField& instance);

}  // namespace jtrace
