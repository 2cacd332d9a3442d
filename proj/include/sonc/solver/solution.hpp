#pragma once

#include <Eigen/Dense>
#include <string>

#include "sonc/common.hpp"

namespace sonc {

enum class SolveStatus { optimal, infeasible, unbounded, numerical_failure };

std::string to_string(SolveStatus s);

/// Solved state of an LP or convex program. status == optimal guarantees the
/// KKT residual norms are at or below the tolerance the solve ran with.
struct SolverSolution {
  SolveStatus status = SolveStatus::numerical_failure;
  Eigen::VectorXd x;
  double objective = 0.0;
  double stationarity = kInf;
  double primal_feasibility = kInf;
  double gap = kInf;  // complementarity surrogate
};

}  // namespace sonc
