#pragma once

#include <Eigen/Dense>

#include "sonc/solver/solution.hpp"

namespace sonc {

/// Linear program in standard form:
///   minimize  c'x  subject to  eq_lhs * x = eq_rhs,  x >= 0.
struct LinearProgram {
  Eigen::VectorXd c;
  Eigen::MatrixXd eq_lhs;
  Eigen::VectorXd eq_rhs;

  int num_vars() const { return static_cast<int>(c.size()); }
};

/// Two-phase dense simplex with Bland's rule throughout, so cycling cannot
/// occur. Dependent equality rows are eliminated up front; an inconsistent
/// dependent row reports infeasible. Pivots below 1e-12 in magnitude report
/// numerical_failure.
SolverSolution solve_lp(const LinearProgram& lp);

}  // namespace sonc
