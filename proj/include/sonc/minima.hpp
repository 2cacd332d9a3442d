#pragma once

#include <span>
#include <vector>

#include "sonc/circuits.hpp"
#include "sonc/orthants.hpp"
#include "sonc/polynomial.hpp"

namespace sonc {

struct DescentResult {
  std::vector<double> point;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;  // gradient tolerance reached (vs iteration cap)
};

/// BFGS with Armijo backtracking. When a cone is given, iterates are
/// clamped onto it (fixed-sign coordinates cut at 0) and convergence is
/// measured on the projected gradient. Accepted iterates never increase the
/// objective.
DescentResult local_min(const Polynomial& p, std::span<const double> start,
                        double tol = 1e-8, int max_iter = 500,
                        const SignVector* cone = nullptr);

struct MinimaResult {
  std::vector<double> candidate;
  double value = 0.0;
  std::vector<double> relaxed_candidate;
  double relaxed_value = 0.0;
  std::vector<std::vector<double>> circuit_minimizers;
  int iterations = 0;
  bool converged = false;
};

/// Minimum heuristic: the circuit minimizers of the relaxation's covering,
/// their barycenter as a descent start on the relaxation, then a final
/// descent on p itself (skipped when p equals its relaxation). Falls back
/// to a seeded 8-point multistart when there is no usable covering.
MinimaResult sonc_min(const Polynomial& p,
                      CoveringStrategy strategy = CoveringStrategy::simple);

/// Sign-cone variant: runs on the cone's relaxation, flips the negative
/// coordinates of the reached point, and finishes with a descent on p
/// restricted to the cone.
MinimaResult sonc_min_signed(const Polynomial& p, const SignVector& s,
                             CoveringStrategy strategy =
                                 CoveringStrategy::simple);

}  // namespace sonc
