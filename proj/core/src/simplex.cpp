#include "jtrace/simplex.hpp"

#include <cmath>
#include <limits>

#include "jtrace/errors.hpp"

namespace jtrace {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr int kDegenerateStreak = 50;

struct Tableau {
  Eigen::MatrixXd t;  // constraint rows; last column is the right-hand side
  Eigen::VectorXd z;  // reduced costs; last entry is -objective
  std::vector<Eigen::Index> basis;
  std::vector<bool> enterable;

  [[nodiscard]] Eigen::Index rhs() const { return t.cols() - 1; }

  void pivot(Eigen::Index r, Eigen::Index c) {
    t.row(r) /= t(r, c);
    for (Eigen::Index i = 0; i < t.rows(); ++i) {
      if (i != r && t(i, c) != 0.0) t.row(i) -= t(i, c) * t.row(r);
    }
    if (z(c) != 0.0) z -= z(c) * t.row(r).transpose();
    basis[static_cast<std::size_t>(r)] = c;
  }

  void price(const Eigen::VectorXd& cost) {
    z = Eigen::VectorXd::Zero(t.cols());
    z.head(cost.size()) = cost;
    for (Eigen::Index r = 0; r < t.rows(); ++r) {
      const double cb = cost(basis[static_cast<std::size_t>(r)]);
      if (cb != 0.0) z -= cb * t.row(r).transpose();
    }
  }

  // Returns optimal, unbounded or iteration_limit.
  LpStatus run(int& iterations, int max_iterations) {
    bool bland = false;
    int streak = 0;
    while (iterations < max_iterations) {
      Eigen::Index enter = -1;
      double best = -kPivotTol;
      for (Eigen::Index j = 0; j < rhs(); ++j) {
        if (!enterable[static_cast<std::size_t>(j)] || z(j) >= -kPivotTol) continue;
        if (bland) {
          enter = j;
          break;
        }
        if (z(j) < best) {
          best = z(j);
          enter = j;
        }
      }
      if (enter < 0) return LpStatus::optimal;

      Eigen::Index leave = -1;
      double ratio = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < t.rows(); ++i) {
        const double a = t(i, enter);
        if (a <= kPivotTol) continue;
        const double q = t(i, rhs()) / a;
        if (q < ratio - kPivotTol ||
            (q <= ratio + kPivotTol && leave >= 0 &&
             basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
          ratio = std::min(ratio, q);
          leave = i;
        }
      }
      if (leave < 0) return LpStatus::unbounded;
      streak = ratio <= kPivotTol ? streak + 1 : 0;
      if (streak >= kDegenerateStreak) bland = true;
      pivot(leave, enter);
      ++iterations;
    }
    return LpStatus::iteration_limit;
  }
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, int max_iterations) {
  const Eigen::Index n = lp.cost.size();
  const Eigen::Index m_ub = lp.a_ub.rows();
  const Eigen::Index m_eq = lp.a_eq.rows();
  if ((m_ub > 0 && lp.a_ub.cols() != n) || lp.b_ub.size() != m_ub ||
      (m_eq > 0 && lp.a_eq.cols() != n) || lp.b_eq.size() != m_eq ||
      (!lp.free.empty() && static_cast<Eigen::Index>(lp.free.size()) != n)) {
    throw DimensionMismatch("linear program has inconsistent shapes");
  }

  // Split free variables into differences of non-negative ones.
  std::vector<Eigen::Index> negative_part(static_cast<std::size_t>(n), -1);
  Eigen::Index cols = n;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (!lp.free.empty() && lp.free[static_cast<std::size_t>(j)]) negative_part[static_cast<std::size_t>(j)] = cols++;
  }
  const Eigen::Index structural = cols;
  const Eigen::Index slack0 = cols;
  cols += m_ub;

  const Eigen::Index m = m_ub + m_eq;
  // Rows that need an artificial variable: equalities and inequalities with b < 0.
  std::vector<Eigen::Index> needs_artificial;
  for (Eigen::Index r = 0; r < m; ++r) {
    if (r >= m_ub || lp.b_ub(r) < 0.0) needs_artificial.push_back(r);
  }
  const Eigen::Index art0 = cols;
  cols += static_cast<Eigen::Index>(needs_artificial.size());

  Tableau tab;
  tab.t = Eigen::MatrixXd::Zero(m, cols + 1);
  tab.basis.assign(static_cast<std::size_t>(m), -1);
  for (Eigen::Index r = 0; r < m; ++r) {
    const bool ub = r < m_ub;
    const auto row = ub ? lp.a_ub.row(r) : lp.a_eq.row(r - m_ub);
    const double b = ub ? lp.b_ub(r) : lp.b_eq(r - m_ub);
    for (Eigen::Index j = 0; j < n; ++j) {
      tab.t(r, j) = row(j);
      const Eigen::Index neg = negative_part[static_cast<std::size_t>(j)];
      if (neg >= 0) tab.t(r, neg) = -row(j);
    }
    if (ub) tab.t(r, slack0 + r) = 1.0;
    tab.t(r, cols) = b;
    if (b < 0.0) tab.t.row(r) *= -1.0;
    if (ub && b >= 0.0) tab.basis[static_cast<std::size_t>(r)] = slack0 + r;
  }
  for (std::size_t k = 0; k < needs_artificial.size(); ++k) {
    const Eigen::Index r = needs_artificial[k];
    const Eigen::Index c = art0 + static_cast<Eigen::Index>(k);
    tab.t(r, c) = 1.0;
    tab.basis[static_cast<std::size_t>(r)] = c;
  }

  LpSolution sol;
  tab.enterable.assign(static_cast<std::size_t>(cols), true);

  if (!needs_artificial.empty()) {
    Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(cols);
    phase1.tail(cols - art0).setOnes();
    tab.price(phase1);
    sol.status = tab.run(sol.iterations, max_iterations);
    if (sol.status == LpStatus::iteration_limit) return sol;
    const double infeasibility = -tab.z(cols);
    const double scale = 1.0 + tab.t.col(cols).cwiseAbs().maxCoeff();
    if (infeasibility > 1e-9 * scale) {
      sol.status = LpStatus::infeasible;
      return sol;
    }
    // Drive zero-level artificials out of the basis where possible.
    for (Eigen::Index r = 0; r < m; ++r) {
      if (tab.basis[static_cast<std::size_t>(r)] < art0) continue;
      for (Eigen::Index j = 0; j < art0; ++j) {
        if (std::abs(tab.t(r, j)) > kPivotTol) {
          tab.pivot(r, j);
          break;
        }
      }
    }
    for (Eigen::Index j = art0; j < cols; ++j) tab.enterable[static_cast<std::size_t>(j)] = false;
  }

  Eigen::VectorXd phase2 = Eigen::VectorXd::Zero(cols);
  phase2.head(n) = lp.cost;
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::Index neg = negative_part[static_cast<std::size_t>(j)];
    if (neg >= 0) phase2(neg) = -lp.cost(j);
  }
  tab.price(phase2);
  sol.status = tab.run(sol.iterations, max_iterations);
  if (sol.status != LpStatus::optimal) return sol;

  Eigen::VectorXd values = Eigen::VectorXd::Zero(structural);
  for (Eigen::Index r = 0; r < m; ++r) {
    const Eigen::Index b = tab.basis[static_cast<std::size_t>(r)];
    if (b < structural) values(b) = tab.t(r, cols);
  }
  sol.x = values.head(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::Index neg = negative_part[static_cast<std::size_t>(j)];
    if (neg >= 0) sol.x(j) -= values(neg);
  }
  sol.objective = lp.cost.dot(sol.x);
  return sol;
}

}  // namespace jtrace
