#pragma once

// Dense two-phase simplex for small linear programs:
//   minimize cost.x  subject to  a_ub x <= b_ub,  a_eq x = b_eq,
//   x_j >= 0 unless free[j].

#include <vector>

#include <Eigen/Dense>

namespace jtrace {

struct LinearProgram {
  Eigen::MatrixXd a_ub;
  Eigen::VectorXd b_ub;
  Eigen::MatrixXd a_eq;
  Eigen::VectorXd b_eq;
  Eigen::VectorXd cost;
  /// Empty means every variable is non-negative.
  std::vector<bool> free;
};

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

struct LpSolution {
  LpStatus status = LpStatus::iteration_limit;
  double objective = 0.0;
  Eigen::VectorXd x;
  int iterations = 0;
};

/// Dantzig pricing with a switch to Bland's rule after a run of degenerate
/// pivots. Pivot tolerance 1e-11.
LpSolution solve_lp(const LinearProgram& lp, int max_iterations = 100000);

}  // namespace jtrace
