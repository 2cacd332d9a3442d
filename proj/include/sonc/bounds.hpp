#pragma once

#include <Eigen/Dense>
#include <vector>

#include "sonc/circuits.hpp"
#include "sonc/common.hpp"
#include "sonc/polynomial.hpp"
#include "sonc/solver/solution.hpp"

namespace sonc {

enum class BoundMethod { sonc, sage };

/// Solved circuit weights X_{beta,alpha}, aligned with the circuit's outer
/// indices.
struct CircuitCertificate {
  int inner_index = -1;
  std::vector<int> outer_indices;
  std::vector<double> x;
};

struct BoundResult {
  BoundMethod method = BoundMethod::sonc;
  double lower_bound = -kInf;  // -inf on covering/solver failure
  SolveStatus solver_status = SolveStatus::numerical_failure;
  double wall_time_s = 0.0;
  std::vector<CircuitCertificate> sonc_certificate;
  Eigen::MatrixXd sage_x;       // t x t, filled when SAGE reports optimal
  Eigen::MatrixXd sage_lambda;  // t x t
};

/// Lower bound for p over R^n via the SONC geometric program, solved in log
/// space. p is relaxed internally; a failed covering or solve yields
/// lower_bound = -inf with the status recorded, never an exception.
BoundResult sonc_bound(const Polynomial& p,
                       CoveringStrategy strategy = CoveringStrategy::simple,
                       double tol = kDefaultTol, const Deadline& deadline = {});

/// Lower bound for p over R^n via the SAGE relative-entropy program on the
/// relaxation, viewed as a signomial on the positive orthant.
BoundResult sage_bound(const Polynomial& p, double tol = kDefaultTol,
                       const Deadline& deadline = {});

/// As sonc_bound, but q is taken as already relaxed (every possibly-negative
/// term carries a negative coefficient) and the bound is over the closed
/// positive orthant. Sign-cone restrictions are applied by the caller.
BoundResult sonc_bound_relaxed(const Polynomial& q,
                               CoveringStrategy strategy =
                                   CoveringStrategy::simple,
                               double tol = kDefaultTol,
                               const Deadline& deadline = {});

BoundResult sage_bound_relaxed(const Polynomial& q, double tol = kDefaultTol,
                               const Deadline& deadline = {});

}  // namespace sonc
