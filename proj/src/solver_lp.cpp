#include "sonc/solver/lp.hpp"

#include <cmath>
#include <vector>

namespace sonc {

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::unbounded: return "unbounded";
    case SolveStatus::numerical_failure: return "numerical_failure";
  }
  return "unknown";
}

namespace {

constexpr double kPivotTol = 1e-12;
constexpr double kFeasTol = 1e-9;

struct Tableau {
  Eigen::MatrixXd a;        // rows x cols
  Eigen::VectorXd rhs;      // rows, kept >= 0
  std::vector<int> basis;   // basic column per row

  int rows() const { return static_cast<int>(rhs.size()); }
};

enum class PivotResult { optimal, unbounded, failure };

// One simplex phase on the given costs. Bland's rule: entering variable is
// the lowest-index column with negative reduced cost; leaving row is the
// minimum ratio, ties broken by the lowest basic-variable index.
PivotResult run_simplex(Tableau& t, const Eigen::VectorXd& cost,
                        double& objective) {
  const int m = t.rows();
  const int ncols = static_cast<int>(cost.size());
  Eigen::VectorXd y(m);  // multipliers for reduced costs
  for (;;) {
    // reduced cost of column j: cost[j] - cb' B^-1 a_j; the tableau is kept
    // in basis-reduced form, so basic costs project directly.
    Eigen::VectorXd cb(m);
    for (int i = 0; i < m; ++i) cb[i] = cost[t.basis[i]];
    int entering = -1;
    for (int j = 0; j < ncols; ++j) {
      double red = cost[j] - cb.dot(t.a.col(j));
      if (red < -kFeasTol) {
        entering = j;
        break;
      }
    }
    if (entering < 0) {
      objective = cb.dot(t.rhs);
      return PivotResult::optimal;
    }
    int leave = -1;
    double best_ratio = 0.0;
    for (int i = 0; i < m; ++i) {
      double aij = t.a(i, entering);
      if (aij > kPivotTol) {
        double ratio = t.rhs[i] / aij;
        if (leave < 0 || ratio < best_ratio ||
            (ratio == best_ratio && t.basis[i] < t.basis[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
    }
    if (leave < 0) return PivotResult::unbounded;
    double pivot = t.a(leave, entering);
    if (std::abs(pivot) < kPivotTol) return PivotResult::failure;
    t.a.row(leave) /= pivot;
    t.rhs[leave] /= pivot;
    for (int i = 0; i < m; ++i) {
      if (i == leave) continue;
      double f = t.a(i, entering);
      if (f == 0.0) continue;
      t.a.row(i) -= f * t.a.row(leave);
      t.rhs[i] -= f * t.rhs[leave];
      if (t.rhs[i] < 0 && t.rhs[i] > -kFeasTol) t.rhs[i] = 0;
    }
    t.basis[leave] = entering;
  }
}

}  // namespace

SolverSolution solve_lp(const LinearProgram& lp) {
  SolverSolution sol;
  const int n = lp.num_vars();
  Eigen::MatrixXd a = lp.eq_lhs;
  Eigen::VectorXd b = lp.eq_rhs;

  // Row-reduce to full row rank; drop dependent rows, detect inconsistency.
  {
    Eigen::MatrixXd aug(a.rows(), n + 1);
    aug << a, b;
    int rank = 0;
    for (int col = 0; col < n && rank < aug.rows(); ++col) {
      int piv = -1;
      double best = 1e-10;
      for (int r = rank; r < aug.rows(); ++r) {
        if (std::abs(aug(r, col)) > best) {
          best = std::abs(aug(r, col));
          piv = r;
        }
      }
      if (piv < 0) continue;
      aug.row(piv).swap(aug.row(rank));
      for (int r = 0; r < aug.rows(); ++r) {
        if (r == rank) continue;
        double f = aug(r, col) / aug(rank, col);
        if (f != 0.0) aug.row(r) -= f * aug.row(rank);
      }
      ++rank;
    }
    for (int r = rank; r < aug.rows(); ++r) {
      if (std::abs(aug(r, n)) > kFeasTol) {
        sol.status = SolveStatus::infeasible;
        return sol;
      }
    }
    a = aug.topLeftCorner(rank, n);
    b = aug.col(n).head(rank);
  }
  const int m = static_cast<int>(b.size());
  if (m == 0) {
    // No constraints: optimum is 0 unless some cost is negative.
    sol.x = Eigen::VectorXd::Zero(n);
    for (int j = 0; j < n; ++j) {
      if (lp.c[j] < -kFeasTol) {
        sol.status = SolveStatus::unbounded;
        return sol;
      }
    }
    sol.status = SolveStatus::optimal;
    sol.objective = 0.0;
    sol.stationarity = sol.primal_feasibility = sol.gap = 0.0;
    return sol;
  }
  for (int i = 0; i < m; ++i) {
    if (b[i] < 0) {
      a.row(i) = -a.row(i);
      b[i] = -b[i];
    }
  }

  // Phase 1: artificial identity basis, minimize the artificial sum.
  Tableau t;
  t.a.resize(m, n + m);
  t.a << a, Eigen::MatrixXd::Identity(m, m);
  t.rhs = b;
  t.basis.resize(m);
  for (int i = 0; i < m; ++i) t.basis[i] = n + i;

  Eigen::VectorXd phase1_cost = Eigen::VectorXd::Zero(n + m);
  phase1_cost.tail(m).setOnes();
  double phase1_obj = 0.0;
  switch (run_simplex(t, phase1_cost, phase1_obj)) {
    case PivotResult::optimal: break;
    case PivotResult::unbounded:  // cannot happen: cost bounded below by 0
    case PivotResult::failure:
      sol.status = SolveStatus::numerical_failure;
      return sol;
  }
  if (phase1_obj > kFeasTol) {
    sol.status = SolveStatus::infeasible;
    return sol;
  }
  // Drive leftover artificials out of the basis.
  for (int i = 0; i < m; ++i) {
    if (t.basis[i] < n) continue;
    int enter = -1;
    for (int j = 0; j < n; ++j) {
      if (std::abs(t.a(i, j)) > kPivotTol) {
        enter = j;
        break;
      }
    }
    if (enter < 0) continue;  // redundant row; artificial stays at zero
    double pivot = t.a(i, enter);
    t.a.row(i) /= pivot;
    t.rhs[i] /= pivot;
    for (int r = 0; r < m; ++r) {
      if (r == i) continue;
      double f = t.a(r, enter);
      if (f != 0.0) {
        t.a.row(r) -= f * t.a.row(i);
        t.rhs[r] -= f * t.rhs[i];
      }
    }
    t.basis[i] = enter;
  }

  // Phase 2 on the original costs; artificials keep a prohibitive cost so
  // they never re-enter.
  Eigen::VectorXd cost(n + m);
  cost.head(n) = lp.c;
  cost.tail(m).setConstant(1e30);
  double objective = 0.0;
  switch (run_simplex(t, cost, objective)) {
    case PivotResult::optimal: break;
    case PivotResult::unbounded:
      sol.status = SolveStatus::unbounded;
      return sol;
    case PivotResult::failure:
      sol.status = SolveStatus::numerical_failure;
      return sol;
  }

  sol.x = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < m; ++i)
    if (t.basis[i] < n) sol.x[t.basis[i]] = t.rhs[i];
  sol.objective = lp.c.dot(sol.x);
  sol.primal_feasibility =
      (lp.eq_lhs * sol.x - lp.eq_rhs).cwiseAbs().maxCoeff();
  double worst_red = 0.0;
  {
    Eigen::VectorXd cb(m);
    for (int i = 0; i < m; ++i) cb[i] = cost[t.basis[i]];
    for (int j = 0; j < n; ++j)
      worst_red = std::min(worst_red, lp.c[j] - cb.dot(t.a.col(j)));
  }
  sol.stationarity = -worst_red;
  sol.gap = 0.0;  // basic solutions are complementary
  sol.status = SolveStatus::optimal;
  return sol;
}

}  // namespace sonc
