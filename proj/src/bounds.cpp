#include "sonc/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "sonc/solver/convex.hpp"
#include "sonc/solver/lp.hpp"

namespace sonc {

namespace {

// Support points that can carry positive weight in some balanced nu for the
// AGE row of beta: maximize nu_j over { nu >= 0, sum nu = 1,
// sum nu_k (alpha_k - beta) = 0 } for each j. Points off that face are
// pruned losslessly (a forced nu_j = 0 makes the matching X entry pure
// budget waste), and the pruned row admits a strictly positive nu, which
// the barrier needs. An empty result means beta is not coverable at all.
std::vector<int> age_row_support(const Polynomial& p,
                                 const std::vector<int>& points, int beta) {
  const int n = p.var_count();
  const int m = static_cast<int>(points.size());
  LinearProgram lp;
  lp.eq_lhs.resize(n + 1, m);
  lp.eq_rhs = Eigen::VectorXd::Zero(n + 1);
  for (int k = 0; k < m; ++k) {
    for (int i = 0; i < n; ++i)
      lp.eq_lhs(i, k) = p.exponent(points[k])[i] - p.exponent(beta)[i];
    lp.eq_lhs(n, k) = 1.0;
  }
  lp.eq_rhs[n] = 1.0;
  std::vector<int> keep;
  for (int j = 0; j < m; ++j) {
    lp.c = Eigen::VectorXd::Zero(m);
    lp.c[j] = -1.0;  // maximize nu_j
    SolverSolution sol = solve_lp(lp);
    if (sol.status == SolveStatus::optimal && -sol.objective > 1e-9)
      keep.push_back(j);
  }
  return keep;
}

}  // namespace

BoundResult sonc_bound_relaxed(const Polynomial& q, CoveringStrategy strategy,
                               double tol, const Deadline& deadline) {
  StopWatch watch;
  BoundResult res;
  res.method = BoundMethod::sonc;

  Covering cov;
  try {
    cov = compute_covering(q, strategy);
  } catch (const UnboundedRelaxation&) {
    res.solver_status = SolveStatus::infeasible;
    res.wall_time_s = watch.seconds();
    return res;
  } catch (const CoveringFailure&) {
    res.solver_status = SolveStatus::numerical_failure;
    res.wall_time_s = watch.seconds();
    return res;
  }

  const double b0 = q.coeff(q.origin_index());
  const int origin = q.origin_index();
  if (cov.circuits.empty()) {
    res.lower_bound = b0;
    res.solver_status = SolveStatus::optimal;
    res.wall_time_s = watch.seconds();
    return res;
  }

  // Variable layout: one log-weight y per (circuit, outer) slot, plus the
  // epigraph variable u for the total constant cost when any circuit draws
  // on the origin.
  std::vector<std::vector<int>> var(cov.circuits.size());
  int num = 0;
  bool origin_used = false;
  for (std::size_t ci = 0; ci < cov.circuits.size(); ++ci) {
    var[ci].resize(cov.circuits[ci].outer_indices.size());
    for (std::size_t k = 0; k < var[ci].size(); ++k) var[ci][k] = num++;
    for (int j : cov.circuits[ci].outer_indices)
      if (j == origin) origin_used = true;
  }
  const int u_var = origin_used ? num++ : -1;

  ConvexProgram cp;
  cp.num_vars = num;
  cp.objective = Eigen::VectorXd::Zero(num);
  if (origin_used) cp.objective[u_var] = 1.0;

  // circuit-number equalities: sum_k lambda_k (y_k - log lambda_k) = log|b|
  cp.eq_lhs = Eigen::MatrixXd::Zero(cov.circuits.size(), num);
  cp.eq_rhs.resize(cov.circuits.size());
  for (std::size_t ci = 0; ci < cov.circuits.size(); ++ci) {
    const Circuit& c = cov.circuits[ci];
    double rhs = std::log(std::abs(q.coeff(c.inner_index)));
    for (std::size_t k = 0; k < c.lambdas.size(); ++k) {
      cp.eq_lhs(ci, var[ci][k]) = c.lambdas[k];
      rhs += c.lambdas[k] * std::log(c.lambdas[k]);
    }
    cp.eq_rhs[ci] = rhs;
  }

  // budget constraints per shared positive term: lse over the drawing
  // circuits, shifted by the term's coefficient
  for (const auto& [term, users] : cov.budget_map) {
    if (term == origin) continue;
    LogSumExpIneq lse;
    lse.g = Eigen::MatrixXd::Zero(users.size(), num);
    lse.h.resize(users.size());
    for (std::size_t r = 0; r < users.size(); ++r) {
      const Circuit& c = cov.circuits[users[r]];
      for (std::size_t k = 0; k < c.outer_indices.size(); ++k)
        if (c.outer_indices[k] == term) lse.g(r, var[users[r]][k]) = 1.0;
      lse.h[r] = -std::log(q.coeff(term));
    }
    cp.lse_ineqs.push_back(std::move(lse));
  }
  if (origin_used) {
    const auto& users = cov.budget_map.at(origin);
    LogSumExpIneq lse;
    lse.g = Eigen::MatrixXd::Zero(users.size(), num);
    lse.h = Eigen::VectorXd::Zero(users.size());
    for (std::size_t r = 0; r < users.size(); ++r) {
      const Circuit& c = cov.circuits[users[r]];
      for (std::size_t k = 0; k < c.outer_indices.size(); ++k)
        if (c.outer_indices[k] == origin) lse.g(r, var[users[r]][k]) = 1.0;
      lse.g(r, u_var) = -1.0;
    }
    cp.lse_ineqs.push_back(std::move(lse));
  }

  // start on each circuit's equality plane; circuits holding the origin get
  // their budgeted slots damped and the slack pushed onto the free origin
  // slot, which usually lands strictly inside the budgets
  cp.initial_point = Eigen::VectorXd::Zero(num);
  for (std::size_t ci = 0; ci < cov.circuits.size(); ++ci) {
    const Circuit& c = cov.circuits[ci];
    double logb = std::log(std::abs(q.coeff(c.inner_index)));
    int k_origin = -1;
    for (std::size_t k = 0; k < c.outer_indices.size(); ++k)
      if (c.outer_indices[k] == origin) k_origin = static_cast<int>(k);
    for (std::size_t k = 0; k < c.outer_indices.size(); ++k) {
      if (static_cast<int>(k) == k_origin) continue;
      int term = c.outer_indices[k];
      double cap = 0.45 * q.coeff(term) /
                   static_cast<double>(cov.budget_map.at(term).size());
      double y = std::log(c.lambdas[k]) + logb;
      if (k_origin >= 0) y = std::min(y, std::log(cap));
      cp.initial_point[var[ci][k]] = y;
    }
    if (k_origin >= 0) {
      double acc = 0.0;
      for (std::size_t k = 0; k < c.outer_indices.size(); ++k) {
        if (static_cast<int>(k) == k_origin) continue;
        acc += c.lambdas[k] *
               (cp.initial_point[var[ci][k]] - std::log(c.lambdas[k]));
      }
      cp.initial_point[var[ci][k_origin]] =
          (logb - acc) / c.lambdas[k_origin] +
          std::log(c.lambdas[k_origin]);
    }
  }
  if (origin_used) {
    double zmax = -kInf;
    for (std::size_t ci = 0; ci < cov.circuits.size(); ++ci)
      for (std::size_t k = 0; k < var[ci].size(); ++k)
        if (cov.circuits[ci].outer_indices[k] == origin)
          zmax = std::max(zmax, cp.initial_point[var[ci][k]]);
    double s = 0.0;
    for (std::size_t ci = 0; ci < cov.circuits.size(); ++ci)
      for (std::size_t k = 0; k < var[ci].size(); ++k)
        if (cov.circuits[ci].outer_indices[k] == origin)
          s += std::exp(cp.initial_point[var[ci][k]] - zmax);
    cp.initial_point[u_var] = zmax + std::log(s) + 1.0;
  }

  SolverSolution sol = solve_convex(cp, tol, deadline);
  res.solver_status = sol.status;
  res.wall_time_s = watch.seconds();
  if (sol.status != SolveStatus::optimal) return res;

  res.lower_bound = b0 - (origin_used ? std::exp(sol.x[u_var]) : 0.0);
  for (std::size_t ci = 0; ci < cov.circuits.size(); ++ci) {
    CircuitCertificate cert;
    cert.inner_index = cov.circuits[ci].inner_index;
    cert.outer_indices = cov.circuits[ci].outer_indices;
    for (std::size_t k = 0; k < var[ci].size(); ++k)
      cert.x.push_back(std::exp(sol.x[var[ci][k]]));
    res.sonc_certificate.push_back(std::move(cert));
  }
  return res;
}

BoundResult sage_bound_relaxed(const Polynomial& q, double tol,
                               const Deadline& deadline) {
  StopWatch watch;
  BoundResult res;
  res.method = BoundMethod::sage;

  const int t = q.term_count();
  const int origin = q.origin_index();
  const double b0 = q.coeff(origin);
  std::vector<int> neg;  // AGE rows
  std::vector<int> pos;  // budget side, origin included
  for (int j = 0; j < t; ++j) {
    if (j == origin || q.coeff(j) > 0)
      pos.push_back(j);
    else
      neg.push_back(j);
  }
  if (neg.empty()) {
    res.lower_bound = b0;
    res.solver_status = SolveStatus::optimal;
    res.wall_time_s = watch.seconds();
    return res;
  }

  const int n = q.var_count();
  const int np = static_cast<int>(pos.size());
  const int nn = static_cast<int>(neg.size());

  std::vector<std::vector<int>> sup(nn);  // positions into pos, per AGE row
  for (int i = 0; i < nn; ++i) {
    sup[i] = age_row_support(q, pos, neg[i]);
    if (sup[i].empty()) {
      res.solver_status = SolveStatus::infeasible;
      res.wall_time_s = watch.seconds();
      return res;
    }
  }

  // layout: [C | X entries row by row | nu entries row by row]
  std::vector<std::vector<int>> x_var(nn), nu_var(nn);
  int num = 1;
  for (int i = 0; i < nn; ++i) {
    x_var[i].resize(sup[i].size());
    for (std::size_t k = 0; k < sup[i].size(); ++k) x_var[i][k] = num++;
  }
  for (int i = 0; i < nn; ++i) {
    nu_var[i].resize(sup[i].size());
    for (std::size_t k = 0; k < sup[i].size(); ++k) nu_var[i][k] = num++;
  }

  ConvexProgram cp;
  cp.num_vars = num;
  cp.objective = Eigen::VectorXd::Zero(num);
  cp.objective[0] = -1.0;  // maximize C
  for (int v = 1; v < num; ++v) cp.positive_vars.push_back(v);

  // per AGE row: the nu weights balance around the row's exponent
  cp.eq_lhs = Eigen::MatrixXd::Zero(nn * n, num);
  cp.eq_rhs = Eigen::VectorXd::Zero(nn * n);
  for (int i = 0; i < nn; ++i) {
    for (int d = 0; d < n; ++d) {
      for (std::size_t k = 0; k < sup[i].size(); ++k) {
        cp.eq_lhs(i * n + d, nu_var[i][k]) =
            q.exponent(pos[sup[i][k]])[d] - q.exponent(neg[i])[d];
      }
    }
  }

  // coefficient budgets; the origin row carries the bound variable C
  std::vector<std::vector<std::pair<int, int>>> users(np);  // (row, slot)
  for (int i = 0; i < nn; ++i)
    for (std::size_t k = 0; k < sup[i].size(); ++k)
      users[sup[i][k]].push_back({i, static_cast<int>(k)});
  for (int j = 0; j < np; ++j) {
    if (users[j].empty() && pos[j] != origin) continue;
    AffineIneq budget;
    budget.a = Eigen::VectorXd::Zero(num);
    for (auto [i, k] : users[j]) budget.a[x_var[i][k]] = 1.0;
    if (pos[j] == origin) {
      budget.a[0] = 1.0;
      budget.b = -b0;
    } else {
      budget.b = -q.coeff(pos[j]);
    }
    cp.affine_ineqs.push_back(std::move(budget));
  }

  // entropy condition per AGE row: D(nu, e X) <= b_i (the negative
  // coefficient itself)
  for (int i = 0; i < nn; ++i) {
    EntropyIneq ent;
    for (std::size_t k = 0; k < sup[i].size(); ++k) {
      ent.u.push_back(nu_var[i][k]);
      ent.v.push_back(x_var[i][k]);
    }
    ent.w = Eigen::VectorXd::Zero(num);
    ent.w0 = q.coeff(neg[i]);
    cp.entropy_ineqs.push_back(std::move(ent));
  }

  // interior start: damp budgeted entries, push the needed entropy mass
  // onto the unbudgeted origin slot when the row has one, mirror nu = X
  cp.initial_point = Eigen::VectorXd::Zero(num);
  for (int i = 0; i < nn; ++i) {
    double need = std::abs(q.coeff(neg[i]));
    double acc = 0.0;
    int k_origin = -1;
    for (std::size_t k = 0; k < sup[i].size(); ++k) {
      if (pos[sup[i][k]] == origin) {
        k_origin = static_cast<int>(k);
        continue;
      }
      double v = 0.45 * q.coeff(pos[sup[i][k]]) / nn;
      cp.initial_point[x_var[i][k]] = v;
      acc += v;
    }
    if (k_origin >= 0)
      cp.initial_point[x_var[i][k_origin]] =
          std::max(1.0, need - acc + 1.0);
    for (std::size_t k = 0; k < sup[i].size(); ++k)
      cp.initial_point[nu_var[i][k]] =
          std::max(cp.initial_point[x_var[i][k]], 1e-3);
  }
  {
    double used = 0.0;
    for (int i = 0; i < nn; ++i)
      for (std::size_t k = 0; k < sup[i].size(); ++k)
        if (pos[sup[i][k]] == origin) used += cp.initial_point[x_var[i][k]];
    cp.initial_point[0] = b0 - used - 1.0;
  }

  SolverSolution sol = solve_convex(cp, tol, deadline);
  res.solver_status = sol.status;
  res.wall_time_s = watch.seconds();
  if (sol.status != SolveStatus::optimal) return res;

  res.lower_bound = sol.x[0];
  res.sage_x = Eigen::MatrixXd::Zero(t, t);
  res.sage_lambda = Eigen::MatrixXd::Zero(t, t);
  for (int i = 0; i < nn; ++i) {
    double nu_sum = 0.0;
    for (std::size_t k = 0; k < sup[i].size(); ++k) {
      res.sage_x(pos[sup[i][k]], neg[i]) = sol.x[x_var[i][k]];
      res.sage_lambda(pos[sup[i][k]], neg[i]) = sol.x[nu_var[i][k]];
      nu_sum += sol.x[nu_var[i][k]];
    }
    res.sage_x(neg[i], neg[i]) = q.coeff(neg[i]);
    res.sage_lambda(neg[i], neg[i]) = -nu_sum;
  }
  for (int j = 0; j < np; ++j) {
    double drawn = 0.0;
    for (auto [i, k] : users[j]) drawn += sol.x[x_var[i][k]];
    double own = (pos[j] == origin ? b0 - sol.x[0] : q.coeff(pos[j])) - drawn;
    res.sage_x(pos[j], pos[j]) = std::max(own, 0.0);
  }
  return res;
}

BoundResult sonc_bound(const Polynomial& p, CoveringStrategy strategy,
                       double tol, const Deadline& deadline) {
  return sonc_bound_relaxed(relax(p), strategy, tol, deadline);
}

BoundResult sage_bound(const Polynomial& p, double tol,
                       const Deadline& deadline) {
  return sage_bound_relaxed(relax(p), tol, deadline);
}

}  // namespace sonc
