#pragma once

#include <Eigen/Dense>
#include <vector>

#include "sonc/common.hpp"
#include "sonc/solver/solution.hpp"

namespace sonc {

/// a.x + b <= 0
struct AffineIneq {
  Eigen::VectorXd a;
  double b = 0.0;

  double value(const Eigen::VectorXd& x) const { return a.dot(x) + b; }
};

/// log sum_k exp((g x + h)_k) <= 0, evaluated with the max-shift so finite
/// inputs never overflow.
struct LogSumExpIneq {
  Eigen::MatrixXd g;
  Eigen::VectorXd h;

  double value(const Eigen::VectorXd& x) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd hessian(const Eigen::VectorXd& x) const;
};

/// D(u, e*v) <= w0 + w.x over designated variable triples, with
/// D(u, e*v) = sum_k u_k log(u_k / v_k) - sum_k u_k. The u/v variables must
/// stay strictly positive (list them in ConvexProgram::positive_vars).
struct EntropyIneq {
  std::vector<int> u;
  std::vector<int> v;
  Eigen::VectorXd w;
  double w0 = 0.0;

  double value(const Eigen::VectorXd& x) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd hessian(const Eigen::VectorXd& x) const;
};

/// Smooth convex program:
///   minimize  objective . x
///   s.t.      eq_lhs x = eq_rhs, affine/lse/entropy atoms <= 0,
///             x_j > 0 for j in positive_vars.
/// initial_point must satisfy the domain restrictions (positivity and
/// entropy arguments); it need not satisfy the equalities or inequalities.
struct ConvexProgram {
  int num_vars = 0;
  Eigen::VectorXd objective;
  Eigen::MatrixXd eq_lhs;
  Eigen::VectorXd eq_rhs;
  std::vector<AffineIneq> affine_ineqs;
  std::vector<LogSumExpIneq> lse_ineqs;
  std::vector<EntropyIneq> entropy_ineqs;
  std::vector<int> positive_vars;
  Eigen::VectorXd initial_point;

  int atom_count() const {
    return static_cast<int>(affine_ineqs.size() + lse_ineqs.size() +
                            entropy_ineqs.size());
  }
};

/// Log-barrier method with damped Newton inner iterations (infeasible start
/// on the equalities), barrier parameter divided by 10 per outer stage, and
/// Armijo backtracking (factor 0.5, slope 1e-4) that also enforces domain
/// positivity. A strictly feasible start is found by a phase-I subproblem
/// minimizing a single slack added to all inequalities.
///
/// status == optimal guarantees stationarity, primal feasibility and the
/// duality-gap surrogate are all <= tol.
SolverSolution solve_convex(const ConvexProgram& cp, double tol = kDefaultTol,
                            const Deadline& deadline = {});

}  // namespace sonc
