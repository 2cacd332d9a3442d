#include "sonc/circuits.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "sonc/solver/lp.hpp"

namespace sonc {

namespace {

constexpr double kLambdaZeroTol = 1e-9;
constexpr double kBarycentricTol = 1e-9;

double distance_weight(const Polynomial& p, int outer, int inner) {
  double d2 = 0.0;
  for (int i = 0; i < p.var_count(); ++i) {
    double diff = p.exponent(outer)[i] - p.exponent(inner)[i];
    d2 += diff * diff;
  }
  return std::sqrt(d2);
}

// Points as columns, stacked on a row of ones; the kernel of this matrix is
// the space of affine dependencies.
Eigen::MatrixXd affine_matrix(const Polynomial& p,
                              const std::vector<int>& points) {
  const int n = p.var_count();
  Eigen::MatrixXd m(n + 1, points.size());
  for (std::size_t k = 0; k < points.size(); ++k) {
    for (int i = 0; i < n; ++i) m(i, k) = p.exponent(points[k])[i];
    m(n, k) = 1.0;
  }
  return m;
}

// Barycentric coordinates of the inner exponent over the given points via
// least squares. Returns false when the system is inconsistent beyond tol.
bool solve_barycentric(const Polynomial& p, const std::vector<int>& points,
                       int inner, Eigen::VectorXd& lambda) {
  Eigen::MatrixXd m = affine_matrix(p, points);
  Eigen::VectorXd rhs(p.var_count() + 1);
  for (int i = 0; i < p.var_count(); ++i) rhs[i] = p.exponent(inner)[i];
  rhs[p.var_count()] = 1.0;
  lambda = m.colPivHouseholderQr().solve(rhs);
  return (m * lambda - rhs).cwiseAbs().maxCoeff() <= kBarycentricTol;
}

// Shrinks the support of lambda until the outer points are affinely
// independent, moving along affine dependencies until a coordinate hits
// zero; the direction is chosen to not increase the distance-weighted mass.
void caratheodory_reduce(const Polynomial& p, int inner,
                         std::vector<int>& points, Eigen::VectorXd& lambda) {
  for (;;) {
    // prune numerically-zero coordinates first
    std::vector<int> keep;
    for (std::size_t k = 0; k < points.size(); ++k)
      if (lambda[k] > kLambdaZeroTol) keep.push_back(static_cast<int>(k));
    if (keep.size() != points.size()) {
      std::vector<int> np;
      Eigen::VectorXd nl(keep.size());
      for (std::size_t k = 0; k < keep.size(); ++k) {
        np.push_back(points[keep[k]]);
        nl[k] = lambda[keep[k]];
      }
      points = std::move(np);
      if (!solve_barycentric(p, points, inner, nl))
        throw CoveringFailure(inner);
      lambda = nl;
      continue;
    }
    if (points.size() <= 1) return;
    Eigen::MatrixXd m = affine_matrix(p, points);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
    lu.setThreshold(1e-10);
    if (lu.dimensionOfKernel() == 0) return;
    Eigen::VectorXd mu = lu.kernel().col(0);
    // canonical orientation, then pick the sign that does not increase the
    // distance objective
    int imax = 0;
    for (int k = 1; k < mu.size(); ++k)
      if (std::abs(mu[k]) > std::abs(mu[imax])) imax = k;
    mu /= mu[imax];
    double ddist = 0.0;
    for (std::size_t k = 0; k < points.size(); ++k)
      ddist += mu[k] * distance_weight(p, points[k], inner);
    if (ddist < 0) mu = -mu;
    double t = kInf;
    for (std::size_t k = 0; k < points.size(); ++k)
      if (mu[k] > 1e-14) t = std::min(t, lambda[k] / mu[k]);
    if (!std::isfinite(t)) throw CoveringFailure(inner);
    lambda -= t * mu;
    for (int k = 0; k < lambda.size(); ++k)
      if (lambda[k] < kLambdaZeroTol) lambda[k] = 0.0;
  }
}

Circuit make_circuit(const Polynomial& p, int inner, std::vector<int> points,
                     const Eigen::VectorXd& lambda) {
  std::vector<int> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return points[a] < points[b]; });
  Circuit c;
  c.inner_index = inner;
  for (int k : order) {
    c.outer_indices.push_back(points[k]);
    c.lambdas.push_back(lambda[k]);
    if (points[k] != p.origin_index()) ++c.non_origin_count;
  }
  return c;
}

double circuit_distance_mass(const Polynomial& p, const Circuit& c) {
  double m = 0.0;
  for (std::size_t k = 0; k < c.outer_indices.size(); ++k)
    m += c.lambdas[k] * distance_weight(p, c.outer_indices[k], c.inner_index);
  return m;
}

}  // namespace

Covering compute_covering(const Polynomial& p, CoveringStrategy strategy) {
  const int n = p.var_count();
  std::vector<int> outers;  // positive terms plus the origin
  std::vector<int> inners;
  for (int j = 0; j < p.term_count(); ++j) {
    if (j == p.origin_index() || p.coeff(j) > 0)
      outers.push_back(j);
    else
      inners.push_back(j);
  }

  Covering cov;
  for (int inner : inners) {
    LinearProgram lp;
    const int m = static_cast<int>(outers.size());
    lp.c.resize(m);
    lp.eq_lhs.resize(n + 1, m);
    lp.eq_rhs.resize(n + 1);
    for (int k = 0; k < m; ++k) {
      lp.c[k] = distance_weight(p, outers[k], inner);
      for (int i = 0; i < n; ++i) lp.eq_lhs(i, k) = p.exponent(outers[k])[i];
      lp.eq_lhs(n, k) = 1.0;
    }
    for (int i = 0; i < n; ++i) lp.eq_rhs[i] = p.exponent(inner)[i];
    lp.eq_rhs[n] = 1.0;

    SolverSolution sol = solve_lp(lp);
    if (sol.status == SolveStatus::infeasible)
      throw UnboundedRelaxation(inner);
    if (sol.status != SolveStatus::optimal) throw CoveringFailure(inner);

    std::vector<int> points;
    std::vector<double> raw;
    for (int k = 0; k < m; ++k) {
      if (sol.x[k] > kLambdaZeroTol) {
        points.push_back(outers[k]);
        raw.push_back(sol.x[k]);
      }
    }
    Eigen::VectorXd lambda =
        Eigen::Map<const Eigen::VectorXd>(raw.data(), raw.size());
    caratheodory_reduce(p, inner, points, lambda);
    // re-solve on the final support so the barycentric identity is exact
    if (!solve_barycentric(p, points, inner, lambda))
      throw CoveringFailure(inner);
    for (int k = 0; k < lambda.size(); ++k)
      if (!(lambda[k] > 0)) throw CoveringFailure(inner);
    cov.circuits.push_back(make_circuit(p, inner, points, lambda));
  }

  if (strategy == CoveringStrategy::extended) {
    // scan every other circuit's simplex for a tighter cover
    const std::vector<Circuit> base = cov.circuits;
    for (auto& c : cov.circuits) {
      double best = circuit_distance_mass(p, c);
      for (const auto& other : base) {
        if (other.inner_index == c.inner_index) continue;
        if (other.outer_indices == c.outer_indices) continue;
        Eigen::VectorXd gamma;
        if (!solve_barycentric(p, other.outer_indices, c.inner_index, gamma))
          continue;
        bool interior = true;
        for (int k = 0; k < gamma.size(); ++k)
          if (gamma[k] <= kLambdaZeroTol) interior = false;
        if (!interior) continue;
        Circuit cand =
            make_circuit(p, c.inner_index, other.outer_indices, gamma);
        double mass = circuit_distance_mass(p, cand);
        if (mass < best - 1e-12) {
          best = mass;
          c = std::move(cand);
        }
      }
    }
  }

  for (std::size_t ci = 0; ci < cov.circuits.size(); ++ci)
    for (int j : cov.circuits[ci].outer_indices)
      cov.budget_map[j].push_back(static_cast<int>(ci));
  return cov;
}

double circuit_number(const Circuit& c, std::span<const double> weights) {
  if (weights.size() != c.lambdas.size())
    throw std::invalid_argument("circuit_number: weight count mismatch");
  double log_theta = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (!(weights[k] > 0))
      throw std::domain_error("circuit_number: nonpositive weight");
    log_theta += c.lambdas[k] * (std::log(weights[k]) - std::log(c.lambdas[k]));
  }
  return std::exp(log_theta);
}

bool is_nonnegative_circuit(const Circuit& c, const Polynomial& p) {
  double inner = p.coeff(c.inner_index);
  if (inner > 0 && p.column_even(c.inner_index)) return true;
  double log_theta = 0.0;
  for (std::size_t k = 0; k < c.outer_indices.size(); ++k) {
    double w = p.coeff(c.outer_indices[k]);
    if (!(w > 0)) return false;  // zero budget: Theta degenerates to 0
    log_theta += c.lambdas[k] * (std::log(w) - std::log(c.lambdas[k]));
  }
  return std::log(std::abs(inner)) <= log_theta + 1e-9;
}

std::vector<double> circuit_minimizer(const Circuit& c, const Polynomial& p) {
  const int n = p.var_count();
  double inner = p.coeff(c.inner_index);
  int flip = -1;
  if (inner > 0) {
    if (p.column_even(c.inner_index)) return std::vector<double>(n, 0.0);
    for (int i = 0; i < n; ++i) {
      if (p.exponent(c.inner_index)[i] % 2 != 0) {
        flip = i;
        break;
      }
    }
    inner = -inner;
  }

  std::vector<int> rows;
  for (std::size_t k = 0; k < c.outer_indices.size(); ++k)
    if (c.outer_indices[k] != p.origin_index())
      rows.push_back(static_cast<int>(k));
  if (rows.empty()) return std::vector<double>(n, 0.0);

  const int r = static_cast<int>(rows.size());
  Eigen::MatrixXd m(r, n);
  Eigen::VectorXd rhs(r);
  for (int q = 0; q < r; ++q) {
    int k = rows[q];
    int j = c.outer_indices[k];
    double w = p.coeff(j);
    if (flip >= 0 && p.exponent(j)[flip] % 2 != 0) w = -w;
    if (!(w > 0))
      throw std::domain_error("circuit_minimizer: nonpositive outer term");
    for (int i = 0; i < n; ++i)
      m(q, i) = p.exponent(j)[i] - p.exponent(c.inner_index)[i];
    rhs[q] = std::log(c.lambdas[k] * std::abs(inner) / w);
  }
  // least-norm solution: components orthogonal to the affine span stay 0
  Eigen::MatrixXd gram = m * m.transpose();
  Eigen::VectorXd y = gram.ldlt().solve(rhs);
  if ((gram * y - rhs).cwiseAbs().maxCoeff() > 1e-7)
    throw std::runtime_error(
        "circuit_minimizer: singular stationarity system");
  Eigen::VectorXd s = m.transpose() * y;

  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = std::exp(s[i]);
  if (flip >= 0) out[flip] = -out[flip];
  return out;
}

}  // namespace sonc
