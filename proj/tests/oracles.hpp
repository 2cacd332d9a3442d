// Independent oracles used to freeze expected values: brute-force grid
// minima, derivative bisection, finite differences, LP basis enumeration,
// and the brute-force orthant antichain. Nothing here shares code with the
// implementation paths it checks.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "sonc/polynomial.hpp"
#include "sonc/solver/lp.hpp"

namespace sonc::testing {

// 1-D minimum: coarse grid scan followed by bisection on the derivative's
// sign change around the best cell.
inline std::pair<double, double> grid_min_1d(const Polynomial& p, double lo,
                                             double hi, int steps = 6000) {
  double best_x = lo, best_v = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= steps; ++k) {
    double x = lo + (hi - lo) * k / steps;
    double v = p.evaluate(std::vector<double>{x});
    if (v < best_v) {
      best_v = v;
      best_x = x;
    }
  }
  double h = (hi - lo) / steps;
  double a = best_x - h, b = best_x + h;
  auto deriv = [&](double x) { return p.gradient(std::vector<double>{x})[0]; };
  if (deriv(a) < 0 && deriv(b) > 0) {
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (a + b);
      (deriv(mid) < 0 ? a : b) = mid;
    }
    best_x = 0.5 * (a + b);
    best_v = p.evaluate(std::vector<double>{best_x});
  }
  return {best_x, best_v};
}

// Dense grid minimum over [lo, hi]^n with `points` samples per axis.
inline double dense_grid_min(const Polynomial& p, double lo, double hi,
                             int points) {
  const int n = p.var_count();
  std::vector<double> x(n, lo);
  std::vector<int> idx(n, 0);
  double best = std::numeric_limits<double>::infinity();
  for (;;) {
    for (int i = 0; i < n; ++i) x[i] = lo + (hi - lo) * idx[i] / (points - 1);
    best = std::min(best, p.evaluate(x));
    int i = 0;
    for (; i < n; ++i) {
      if (++idx[i] < points) break;
      idx[i] = 0;
    }
    if (i == n) break;
  }
  return best;
}

inline std::vector<double> fd_gradient(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> x, double h = 1e-6) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double save = x[i];
    x[i] = save + h;
    double up = f(x);
    x[i] = save - h;
    double dn = f(x);
    x[i] = save;
    g[i] = (up - dn) / (2 * h);
  }
  return g;
}

inline Eigen::MatrixXd fd_hessian(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& grad,
    Eigen::VectorXd x, double h = 1e-6) {
  const int n = static_cast<int>(x.size());
  Eigen::MatrixXd hess(n, n);
  for (int i = 0; i < n; ++i) {
    double save = x[i];
    x[i] = save + h;
    Eigen::VectorXd up = grad(x);
    x[i] = save - h;
    Eigen::VectorXd dn = grad(x);
    x[i] = save;
    hess.col(i) = (up - dn) / (2 * h);
  }
  return hess;
}

// Exhaustive basic-solution enumeration for min c'x, Ex = f, x >= 0.
// Returns infinity when infeasible. Only for small m.
inline double lp_brute_force(const LinearProgram& lp) {
  const int n = lp.num_vars();
  Eigen::MatrixXd a = lp.eq_lhs;
  Eigen::VectorXd b = lp.eq_rhs;
  Eigen::FullPivLU<Eigen::MatrixXd> full(a);
  full.setThreshold(1e-10);
  const int rank = static_cast<int>(full.rank());
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> comb(rank);
  std::function<void(int, int)> rec = [&](int start, int k) {
    if (k == rank) {
      Eigen::MatrixXd basis(a.rows(), rank);
      for (int j = 0; j < rank; ++j) basis.col(j) = a.col(comb[j]);
      Eigen::VectorXd xb = basis.colPivHouseholderQr().solve(b);
      if ((basis * xb - b).cwiseAbs().maxCoeff() > 1e-7) return;
      for (int j = 0; j < rank; ++j)
        if (xb[j] < -1e-9) return;
      double obj = 0.0;
      for (int j = 0; j < rank; ++j) obj += lp.c[comb[j]] * xb[j];
      best = std::min(best, obj);
      return;
    }
    for (int j = start; j < n; ++j) {
      comb[k] = j;
      rec(j + 1, k + 1);
    }
  };
  if (rank == 0) {
    bool feasible = b.size() == 0 || b.cwiseAbs().maxCoeff() <= 1e-9;
    return feasible ? 0.0 : best;
  }
  rec(0, 0);
  return best;
}

// Effective-sign vector of every orthant, restricted to non-square columns.
inline std::vector<std::vector<int>> all_effective_signs(const Polynomial& p) {
  const int n = p.var_count();
  auto cls = classify_support(p);
  std::vector<std::vector<int>> out;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    std::vector<int> v;
    for (int j : cls.nosq) {
      int bit = p.coeff(j) < 0 ? 1 : 0;
      for (int i = 0; i < n; ++i)
        if ((mask & (1u << i)) && p.exponent(j)[i] % 2 != 0) bit ^= 1;
      v.push_back(bit);
    }
    out.push_back(std::move(v));
  }
  return out;
}

// Minimal orthants in the effective-coefficient order: a is <= b when a is
// negative everywhere b is (bitwise a >= b). Returns orthant masks.
inline std::vector<unsigned> antichain_brute_force(const Polynomial& p) {
  auto all = all_effective_signs(p);
  auto coeff_le = [](const std::vector<int>& a, const std::vector<int>& b) {
    for (std::size_t j = 0; j < a.size(); ++j)
      if (a[j] < b[j]) return false;
    return true;
  };
  std::vector<unsigned> keep;
  for (unsigned mask = 0; mask < all.size(); ++mask) {
    bool minimal = true;
    for (unsigned other = 0; other < all.size(); ++other) {
      if (other == mask) continue;
      if (coeff_le(all[other], all[mask]) &&
          (all[other] != all[mask] || other < mask)) {
        minimal = false;
        break;
      }
    }
    if (minimal) keep.push_back(mask);
  }
  return keep;
}

}  // namespace sonc::testing
