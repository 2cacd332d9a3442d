#include "sonc/solver/convex.hpp"

#include <algorithm>
#include <cmath>

#ifdef SONC_DEBUG_BARRIER
#include <cstdio>
#define SONC_TRACE(...) std::fprintf(stderr, __VA_ARGS__)
#else
#define SONC_TRACE(...)
#endif

namespace sonc {

double LogSumExpIneq::value(const Eigen::VectorXd& x) const {
  Eigen::VectorXd z = g * x + h;
  double zmax = z.maxCoeff();
  double s = 0.0;
  for (int k = 0; k < z.size(); ++k) s += std::exp(z[k] - zmax);
  return zmax + std::log(s);
}

Eigen::VectorXd LogSumExpIneq::gradient(const Eigen::VectorXd& x) const {
  Eigen::VectorXd z = g * x + h;
  double zmax = z.maxCoeff();
  Eigen::VectorXd e = (z.array() - zmax).exp();
  e /= e.sum();
  return g.transpose() * e;
}

Eigen::MatrixXd LogSumExpIneq::hessian(const Eigen::VectorXd& x) const {
  Eigen::VectorXd z = g * x + h;
  double zmax = z.maxCoeff();
  Eigen::VectorXd e = (z.array() - zmax).exp();
  e /= e.sum();
  Eigen::MatrixXd inner = e.asDiagonal();
  inner -= e * e.transpose();
  return g.transpose() * inner * g;
}

double EntropyIneq::value(const Eigen::VectorXd& x) const {
  double d = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    double uk = x[u[k]], vk = x[v[k]];
    if (uk <= 0 || vk <= 0) return kInf;
    d += uk * std::log(uk / vk) - uk;
  }
  return d - w0 - w.dot(x);
}

Eigen::VectorXd EntropyIneq::gradient(const Eigen::VectorXd& x) const {
  Eigen::VectorXd grad = -w;
  for (std::size_t k = 0; k < u.size(); ++k) {
    double uk = x[u[k]], vk = x[v[k]];
    grad[u[k]] += std::log(uk / vk);
    grad[v[k]] += -uk / vk;
  }
  return grad;
}

Eigen::MatrixXd EntropyIneq::hessian(const Eigen::VectorXd& x) const {
  Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(x.size(), x.size());
  for (std::size_t k = 0; k < u.size(); ++k) {
    int iu = u[k], iv = v[k];
    double uk = x[iu], vk = x[iv];
    hess(iu, iu) += 1.0 / uk;
    hess(iu, iv) += -1.0 / vk;
    hess(iv, iu) += -1.0 / vk;
    hess(iv, iv) += uk / (vk * vk);
  }
  return hess;
}

namespace {

constexpr double kUnboundedObjective = -1e12;

struct Atoms {
  const ConvexProgram* cp;

  int count() const { return cp->atom_count(); }

  double value(int i, const Eigen::VectorXd& x) const {
    int na = static_cast<int>(cp->affine_ineqs.size());
    int nl = static_cast<int>(cp->lse_ineqs.size());
    if (i < na) return cp->affine_ineqs[i].value(x);
    if (i < na + nl) return cp->lse_ineqs[i - na].value(x);
    return cp->entropy_ineqs[i - na - nl].value(x);
  }

  Eigen::VectorXd gradient(int i, const Eigen::VectorXd& x) const {
    int na = static_cast<int>(cp->affine_ineqs.size());
    int nl = static_cast<int>(cp->lse_ineqs.size());
    if (i < na) return cp->affine_ineqs[i].a;
    if (i < na + nl) return cp->lse_ineqs[i - na].gradient(x);
    return cp->entropy_ineqs[i - na - nl].gradient(x);
  }

  Eigen::MatrixXd hessian(int i, const Eigen::VectorXd& x) const {
    int na = static_cast<int>(cp->affine_ineqs.size());
    int nl = static_cast<int>(cp->lse_ineqs.size());
    if (i < na)
      return Eigen::MatrixXd::Zero(cp->num_vars, cp->num_vars);
    if (i < na + nl) return cp->lse_ineqs[i - na].hessian(x);
    return cp->entropy_ineqs[i - na - nl].hessian(x);
  }
};

// Strict interior of the barrier domain: positivity restrictions hold and
// every atom is strictly below zero.
bool domain_ok(const ConvexProgram& cp, const Atoms& atoms,
               const Eigen::VectorXd& x) {
  for (int j : cp.positive_vars)
    if (!(x[j] > 0.0) || !std::isfinite(x[j])) return false;
  for (int i = 0; i < atoms.count(); ++i) {
    double f = atoms.value(i, x);
    if (!std::isfinite(f) || f >= 0.0) return false;
  }
  return true;
}

// Drop linearly dependent equality rows; returns false on an inconsistent
// dependent row.
bool reduce_equalities(Eigen::MatrixXd& a, Eigen::VectorXd& b) {
  const int n = static_cast<int>(a.cols());
  if (a.rows() == 0) return true;
  Eigen::MatrixXd aug(a.rows(), n + 1);
  aug << a, b;
  int rank = 0;
  for (int col = 0; col < n && rank < aug.rows(); ++col) {
    int piv = -1;
    double best = 1e-12;
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
  for (int r = rank; r < aug.rows(); ++r)
    if (std::abs(aug(r, n)) > 1e-9) return false;
  a = aug.topLeftCorner(rank, n);
  b = aug.col(n).head(rank);
  return true;
}

struct BarrierEval {
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
};

BarrierEval barrier_derivatives(const ConvexProgram& cp, const Atoms& atoms,
                                double t, const Eigen::VectorXd& x) {
  const int n = cp.num_vars;
  BarrierEval ev;
  ev.grad = t * cp.objective;
  ev.hess = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < atoms.count(); ++i) {
    double f = atoms.value(i, x);
    Eigen::VectorXd gf = atoms.gradient(i, x);
    ev.grad += gf / (-f);
    ev.hess += atoms.hessian(i, x) / (-f) + (gf * gf.transpose()) / (f * f);
  }
  for (int j : cp.positive_vars) {
    ev.grad[j] += -1.0 / x[j];
    ev.hess(j, j) += 1.0 / (x[j] * x[j]);
  }
  return ev;
}

struct InnerResult {
  bool converged = false;
  bool failed = false;
  bool unbounded = false;
};

// Infeasible-start damped Newton for the equality-constrained barrier
// subproblem at fixed t. Stops once the dual residual is below
// dual_target and the equality residual below pri_target.
InnerResult newton_inner(const ConvexProgram& cp, const Atoms& atoms,
                         const Eigen::MatrixXd& aeq,
                         const Eigen::VectorXd& beq, double t,
                         Eigen::VectorXd& x, Eigen::VectorXd& nu,
                         double dual_target, double pri_target,
                         const Deadline& deadline,
                         const double* early_stop_objective) {
  const int n = cp.num_vars;
  const int p = static_cast<int>(beq.size());
  InnerResult res;
  double best_residual = kInf;
  int no_progress = 0;

  for (int iter = 0; iter < 500; ++iter) {
    if (deadline.expired()) throw TimeoutError();
    BarrierEval ev = barrier_derivatives(cp, atoms, t, x);
    Eigen::VectorXd r_dual = ev.grad;
    if (p > 0) r_dual += aeq.transpose() * nu;
    Eigen::VectorXd r_pri =
        p > 0 ? Eigen::VectorXd(aeq * x - beq) : Eigen::VectorXd(0);
    double rd = r_dual.norm();
    double rp = p > 0 ? r_pri.lpNorm<Eigen::Infinity>() : 0.0;
    if (rd <= dual_target && rp <= pri_target) {
      res.converged = true;
      return res;
    }
    if (early_stop_objective && cp.objective.dot(x) < *early_stop_objective &&
        rp <= pri_target) {
      res.converged = true;
      return res;
    }
    if (cp.objective.dot(x) < kUnboundedObjective) {
      res.unbounded = true;
      return res;
    }

    Eigen::VectorXd rhs(n + p);
    rhs.head(n) = -r_dual;
    if (p > 0) rhs.tail(p) = -r_pri;
    Eigen::VectorXd step;
    for (double reg : {1e-12, 1e-8, 1e-4}) {
      Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n + p, n + p);
      kkt.topLeftCorner(n, n) = ev.hess;
      kkt.topLeftCorner(n, n).diagonal().array() += reg;
      if (p > 0) {
        kkt.topRightCorner(n, p) = aeq.transpose();
        kkt.bottomLeftCorner(p, n) = aeq;
      }
      step = kkt.partialPivLu().solve(rhs);
      if (step.allFinite()) break;
    }
    if (!step.allFinite()) {
      res.failed = true;
      return res;
    }
    Eigen::VectorXd dx = step.head(n);
    Eigen::VectorXd dnu = step.tail(p);

    double r0 = std::sqrt(rd * rd + (p > 0 ? r_pri.squaredNorm() : 0.0));
    double s = 1.0;
    bool accepted = false;
    while (s > 1e-16) {
      Eigen::VectorXd xs = x + s * dx;
      if (domain_ok(cp, atoms, xs)) {
        Eigen::VectorXd nus = nu + s * dnu;
        BarrierEval evs = barrier_derivatives(cp, atoms, t, xs);
        Eigen::VectorXd rds = evs.grad;
        if (p > 0) rds += aeq.transpose() * nus;
        double rs2 = rds.squaredNorm();
        if (p > 0) rs2 += (aeq * xs - beq).squaredNorm();
        if (std::sqrt(rs2) <= (1.0 - 1e-4 * s) * r0) {
          x = xs;
          nu = nus;
          accepted = true;
          break;
        }
      }
      s *= 0.5;
    }
    if (accepted && r0 < best_residual * (1.0 - 1e-12)) {
      best_residual = r0;
      no_progress = 0;
    } else {
      ++no_progress;
    }
    if (!accepted || no_progress >= 50) {
      if (cp.objective.dot(dx) < 0) {
        // probe the Newton direction as a feasible descent ray
        double scale = 1.0;
        for (int k = 0; k < 120; ++k) {
          Eigen::VectorXd cand = x + scale * dx;
          if (!domain_ok(cp, atoms, cand)) break;
          if (cp.objective.dot(cand) < kUnboundedObjective) {
            x = cand;
            res.unbounded = true;
            return res;
          }
          scale *= 4.0;
        }
      }
      res.failed = true;
      return res;
    }
  }
  res.failed = true;
  return res;
}

SolverSolution finish(const ConvexProgram& cp, const Atoms& atoms,
                      const Eigen::MatrixXd& aeq, const Eigen::VectorXd& beq,
                      double t, const Eigen::VectorXd& x,
                      const Eigen::VectorXd& nu, double tol) {
  SolverSolution sol;
  sol.x = x;
  sol.objective = cp.objective.dot(x);
  const int n = cp.num_vars;
  const int m_ineq = atoms.count() + static_cast<int>(cp.positive_vars.size());
  const int p = static_cast<int>(beq.size());

  // certify stationarity with least-squares multipliers (seeded from the
  // barrier values, which a sub-ulp Newton step cannot sharpen further)
  Eigen::MatrixXd g(n, m_ineq + p);
  Eigen::VectorXd slack(m_ineq);
  double viol = 0.0;
  int col = 0;
  for (int i = 0; i < atoms.count(); ++i, ++col) {
    double f = atoms.value(i, x);
    g.col(col) = atoms.gradient(i, x);
    slack[col] = -f;
    viol = std::max(viol, f);
  }
  for (int j : cp.positive_vars) {
    g.col(col) = Eigen::VectorXd::Zero(n);
    g(j, col) = -1.0;
    slack[col] = x[j];
    viol = std::max(viol, -x[j]);
    ++col;
  }
  if (p > 0) {
    g.rightCols(p) = aeq.transpose();
    viol = std::max(viol, (aeq * x - beq).cwiseAbs().maxCoeff());
  }
  sol.primal_feasibility = std::max(0.0, viol);

  // Sign-constrained least-squares multipliers on a column subset:
  // inequality columns whose multiplier comes out negative are dropped and
  // the fit repeats. Returns the (stationarity, complementarity) pair.
  auto fit = [&](const std::vector<int>& cols) {
    Eigen::VectorXd z = Eigen::VectorXd::Zero(m_ineq + p);
    std::vector<int> keep = cols;
    for (int round = 0; round <= m_ineq + 1; ++round) {
      Eigen::MatrixXd ga(n, keep.size());
      for (std::size_t k = 0; k < keep.size(); ++k)
        ga.col(k) = g.col(keep[k]);
      Eigen::VectorXd za = ga.colPivHouseholderQr().solve(-cp.objective);
      int worst = -1;
      for (std::size_t k = 0; k < keep.size(); ++k) {
        if (keep[k] < m_ineq && za[k] < 0 &&
            (worst < 0 || za[k] < za[worst]))
          worst = static_cast<int>(k);
      }
      if (worst < 0) {
        for (std::size_t k = 0; k < keep.size(); ++k) z[keep[k]] = za[k];
        break;
      }
      keep.erase(keep.begin() + worst);
    }
    double stat = (cp.objective + g * z).norm();
    double comp = 0.0;
    for (int i = 0; i < m_ineq; ++i) comp += z[i] * slack[i];
    return std::pair<double, double>(stat, comp);
  };

  // barrier multipliers: complementarity is the classic m/t gap bound
  Eigen::VectorXd zb(m_ineq + p);
  for (int i = 0; i < m_ineq; ++i) zb[i] = 1.0 / (t * slack[i]);
  if (p > 0) zb.tail(p) = nu / t;
  sol.stationarity = (cp.objective + g * zb).norm();
  sol.gap = static_cast<double>(m_ineq) / t;

  // sharper certificates: multipliers fitted on the active set only, then
  // on all columns
  double athresh = std::max(1e-6, 10.0 * std::sqrt(sol.gap));
  std::vector<int> active, all;
  for (int i = 0; i < m_ineq; ++i) {
    all.push_back(i);
    if (slack[i] <= athresh) active.push_back(i);
  }
  for (int j = 0; j < p; ++j) {
    active.push_back(m_ineq + j);
    all.push_back(m_ineq + j);
  }
  for (const auto& cols : {active, all}) {
    auto [stat, comp] = fit(cols);
    if (std::max(stat, comp) < std::max(sol.stationarity, sol.gap)) {
      sol.stationarity = stat;
      sol.gap = comp;
    }
  }

  sol.status = (sol.stationarity <= tol && sol.primal_feasibility <= tol &&
                sol.gap <= tol)
                   ? SolveStatus::optimal
                   : SolveStatus::numerical_failure;
  return sol;
}

ConvexProgram make_phase1(const ConvexProgram& cp, double s0) {
  ConvexProgram p1;
  const int n = cp.num_vars;
  p1.num_vars = n + 1;
  p1.objective = Eigen::VectorXd::Zero(n + 1);
  p1.objective[n] = 1.0;
  if (cp.eq_lhs.rows() > 0) {
    p1.eq_lhs = Eigen::MatrixXd::Zero(cp.eq_lhs.rows(), n + 1);
    p1.eq_lhs.leftCols(n) = cp.eq_lhs;
    p1.eq_rhs = cp.eq_rhs;
  }
  for (const auto& a : cp.affine_ineqs) {
    AffineIneq e;
    e.a = Eigen::VectorXd::Zero(n + 1);
    e.a.head(n) = a.a;
    e.a[n] = -1.0;
    e.b = a.b;
    p1.affine_ineqs.push_back(std::move(e));
  }
  for (const auto& l : cp.lse_ineqs) {
    LogSumExpIneq e;
    e.g = Eigen::MatrixXd::Zero(l.g.rows(), n + 1);
    e.g.leftCols(n) = l.g;
    e.g.col(n).setConstant(-1.0);  // lse(z - s*1) = lse(z) - s
    e.h = l.h;
    p1.lse_ineqs.push_back(std::move(e));
  }
  for (const auto& d : cp.entropy_ineqs) {
    EntropyIneq e = d;
    e.w.conservativeResize(n + 1);
    e.w[n] = 1.0;
    p1.entropy_ineqs.push_back(std::move(e));
  }
  p1.positive_vars = cp.positive_vars;
  p1.initial_point.resize(n + 1);
  p1.initial_point.head(n) = cp.initial_point;
  p1.initial_point[n] = s0;
  return p1;
}

SolverSolution solve_barrier(const ConvexProgram& cp, double tol,
                             const Deadline& deadline,
                             const double* early_stop_objective) {
  Atoms atoms{&cp};
  SolverSolution sol;

  Eigen::MatrixXd aeq = cp.eq_lhs;
  Eigen::VectorXd beq = cp.eq_rhs;
  if (aeq.rows() > 0 && !reduce_equalities(aeq, beq)) {
    sol.status = SolveStatus::infeasible;
    return sol;
  }

  Eigen::VectorXd x = cp.initial_point;
  if (!domain_ok(cp, atoms, x)) {
    sol.status = SolveStatus::numerical_failure;
    return sol;
  }
  Eigen::VectorXd nu = Eigen::VectorXd::Zero(beq.size());

  const int m_bar = atoms.count() + static_cast<int>(cp.positive_vars.size());
  double t = 1.0;
  for (;;) {
    double dual_target = std::max(0.25 * tol * t, 1e-13);
    InnerResult inner =
        newton_inner(cp, atoms, aeq, beq, t, x, nu, dual_target, 0.1 * tol,
                     deadline, early_stop_objective);
    SONC_TRACE("stage t=%.3e conv=%d fail=%d obj=%.9g\n", t,
               (int)inner.converged, (int)inner.failed,
               cp.objective.dot(x));
    if (inner.unbounded) {
      sol.status = SolveStatus::unbounded;
      sol.x = x;
      sol.objective = cp.objective.dot(x);
      return sol;
    }
    if (inner.failed) {
      // keep the point when its residuals already meet the tolerance
      sol = finish(cp, atoms, aeq, beq, t, x, nu, tol);
      if (sol.status != SolveStatus::optimal)
        sol.status = SolveStatus::numerical_failure;
      SONC_TRACE("inner failed: stat=%.3e pf=%.3e gap=%.3e\n",
                 sol.stationarity, sol.primal_feasibility, sol.gap);
      return sol;
    }
    if (early_stop_objective &&
        cp.objective.dot(x) < *early_stop_objective)
      break;
    bool gap_ok = m_bar == 0 || static_cast<double>(m_bar) / t <= 0.25 * tol;
    if (gap_ok) {
      sol = finish(cp, atoms, aeq, beq, t, x, nu, tol);
      if (sol.status == SolveStatus::optimal || t > 1e17) return sol;
      // stationarity still above tol: push the barrier further
    }
    if (t > 1e18) break;
    t *= 10.0;
  }
  return finish(cp, atoms, aeq, beq, t, x, nu, tol);
}

}  // namespace

SolverSolution solve_convex(const ConvexProgram& cp, double tol,
                            const Deadline& deadline) {
  Atoms atoms{&cp};
  SolverSolution sol;
  if (cp.initial_point.size() != cp.num_vars) {
    sol.status = SolveStatus::numerical_failure;
    return sol;
  }
  for (int j : cp.positive_vars) {
    if (!(cp.initial_point[j] > 0.0)) {
      sol.status = SolveStatus::numerical_failure;
      return sol;
    }
  }

  Eigen::VectorXd x0 = cp.initial_point;
  double viol = -kInf;
  for (int i = 0; i < atoms.count(); ++i)
    viol = std::max(viol, atoms.value(i, x0));
  if (atoms.count() > 0 && (!std::isfinite(viol) || viol >= -1e-12)) {
    // Phase I: minimize a single slack added to all inequalities; strictly
    // feasible iff the optimum is negative.
    double s0 = (std::isfinite(viol) ? std::max(viol, 0.0) : 1.0) + 1.0;
    ConvexProgram p1 = make_phase1(cp, s0);
    double stop_below = -std::max(tol, 1e-9);
    SolverSolution p1sol = solve_barrier(p1, tol, deadline, &stop_below);
    bool strict = false;
    if (p1sol.x.size() == cp.num_vars + 1) {
      Eigen::VectorXd cand = p1sol.x.head(cp.num_vars);
      strict = domain_ok(cp, atoms, cand);
      if (strict) x0 = cand;
    }
    if (!strict) {
      sol.status = (p1sol.status == SolveStatus::optimal ||
                    p1sol.status == SolveStatus::numerical_failure) &&
                           p1sol.objective > -tol
                       ? SolveStatus::infeasible
                       : SolveStatus::numerical_failure;
      return sol;
    }
  }

  ConvexProgram cp2 = cp;
  cp2.initial_point = x0;
  return solve_barrier(cp2, tol, deadline, nullptr);
}

}  // namespace sonc
