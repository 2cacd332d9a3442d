#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "sonc/solver/lp.hpp"

using namespace sonc;

namespace {

// Covering-style LP: write beta as a convex combination of the given points.
LinearProgram covering_lp(const std::vector<std::vector<double>>& points,
                          const std::vector<double>& beta) {
  const int n = static_cast<int>(beta.size());
  const int m = static_cast<int>(points.size());
  LinearProgram lp;
  lp.c = Eigen::VectorXd::Zero(m);
  lp.eq_lhs.resize(n + 1, m);
  lp.eq_rhs.resize(n + 1);
  for (int k = 0; k < m; ++k) {
    for (int i = 0; i < n; ++i) lp.eq_lhs(i, k) = points[k][i];
    lp.eq_lhs(n, k) = 1.0;
  }
  for (int i = 0; i < n; ++i) lp.eq_rhs[i] = beta[i];
  lp.eq_rhs[n] = 1.0;
  return lp;
}

}  // namespace

TEST_SUITE_BEGIN("solver_lp");

TEST_CASE("Motzkin covering weights are equal by symmetry") {
  LinearProgram lp = covering_lp({{0, 0}, {4, 2}, {2, 4}}, {2, 2});
  SolverSolution sol = solve_lp(lp);
  REQUIRE(sol.status == SolveStatus::optimal);
  for (int k = 0; k < 3; ++k)
    CHECK(sol.x[k] == doctest::Approx(1.0 / 3).epsilon(1e-9));
}

TEST_CASE("unique convex combination is recovered") {
  // beta=(1,1) over {(0,0),(2,0),(0,2)}: lambda = (0, 1/2, 1/2) by solving
  // the 3x3 system by hand
  LinearProgram lp = covering_lp({{0, 0}, {2, 0}, {0, 2}}, {1, 1});
  SolverSolution sol = solve_lp(lp);
  REQUIRE(sol.status == SolveStatus::optimal);
  CHECK(sol.x[0] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(sol.x[1] == doctest::Approx(0.5));
  CHECK(sol.x[2] == doctest::Approx(0.5));
}

TEST_CASE("point outside the hull is infeasible") {
  LinearProgram lp = covering_lp({{0, 0}, {2, 0}, {0, 2}}, {4, 4});
  CHECK(solve_lp(lp).status == SolveStatus::infeasible);
}

TEST_CASE("unbounded detection") {
  // min -x1 s.t. x1 - x2 = 0: ray x1 = x2 -> infinity
  LinearProgram lp;
  lp.c = Eigen::VectorXd(2);
  lp.c << -1, 0;
  lp.eq_lhs.resize(1, 2);
  lp.eq_lhs << 1, -1;
  lp.eq_rhs = Eigen::VectorXd::Zero(1);
  CHECK(solve_lp(lp).status == SolveStatus::unbounded);
}

TEST_CASE("dependent and inconsistent rows") {
  LinearProgram lp;
  lp.c = Eigen::VectorXd::Ones(2);
  lp.eq_lhs.resize(2, 2);
  lp.eq_lhs << 1, 1, 2, 2;
  lp.eq_rhs.resize(2);
  lp.eq_rhs << 1, 2;  // consistent duplicate
  SolverSolution sol = solve_lp(lp);
  REQUIRE(sol.status == SolveStatus::optimal);
  CHECK(sol.objective == doctest::Approx(1.0));

  lp.eq_rhs << 1, 3;  // now inconsistent
  CHECK(solve_lp(lp).status == SolveStatus::infeasible);
}

TEST_CASE("optimum matches basis enumeration on random instances") {
  std::mt19937 gen(99);
  std::uniform_int_distribution<int> entry(-4, 4);
  std::uniform_int_distribution<int> dims(1, 3);
  int solved = 0;
  for (int rep = 0; rep < 60; ++rep) {
    int m = dims(gen) + 1;           // rows
    int nv = m + dims(gen);          // vars, <= 8
    LinearProgram lp;
    lp.c.resize(nv);
    lp.eq_lhs.resize(m, nv);
    lp.eq_rhs.resize(m);
    for (int j = 0; j < nv; ++j) lp.c[j] = entry(gen);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < nv; ++j) lp.eq_lhs(i, j) = entry(gen);
    // rhs reachable from a nonnegative point, so feasibility is guaranteed
    Eigen::VectorXd x0(nv);
    for (int j = 0; j < nv; ++j)
      x0[j] = std::uniform_int_distribution<int>(0, 3)(gen);
    lp.eq_rhs = lp.eq_lhs * x0;

    SolverSolution sol = solve_lp(lp);
    double brute = testing::lp_brute_force(lp);
    if (sol.status == SolveStatus::unbounded) {
      continue;  // enumeration has no certificate for unboundedness
    }
    REQUIRE(sol.status == SolveStatus::optimal);
    REQUIRE(std::isfinite(brute));
    CHECK(sol.objective == doctest::Approx(brute).epsilon(1e-8));
    ++solved;
  }
  CHECK(solved >= 30);
}

TEST_CASE("deterministic across repeated solves") {
  LinearProgram lp = covering_lp({{0, 0}, {2, 0}, {0, 2}, {2, 2}}, {1, 1});
  SolverSolution a = solve_lp(lp);
  SolverSolution b = solve_lp(lp);
  REQUIRE(a.status == SolveStatus::optimal);
  CHECK(a.x == b.x);
}

TEST_SUITE_END();
