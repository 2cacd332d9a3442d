#include "sonc/minima.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

namespace sonc {

namespace {

void clamp_to_cone(std::vector<double>& x, const SignVector* cone) {
  if (!cone) return;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if ((*cone)[i] > 0 && x[i] < 0) x[i] = 0;
    if ((*cone)[i] < 0 && x[i] > 0) x[i] = 0;
  }
}

// Gradient components that push against a clamped boundary are zeroed.
Eigen::VectorXd project_gradient(const std::vector<double>& x,
                                 const Eigen::VectorXd& g,
                                 const SignVector* cone) {
  Eigen::VectorXd pg = g;
  if (!cone) return pg;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if ((*cone)[i] > 0 && x[i] <= 0 && g[i] > 0) pg[i] = 0;
    if ((*cone)[i] < 0 && x[i] >= 0 && g[i] < 0) pg[i] = 0;
  }
  return pg;
}

}  // namespace

DescentResult local_min(const Polynomial& p, std::span<const double> start,
                        double tol, int max_iter, const SignVector* cone) {
  const int n = p.var_count();
  DescentResult res;
  std::vector<double> x(start.begin(), start.end());
  clamp_to_cone(x, cone);
  double f = p.evaluate(x);
  res.point = x;
  res.value = f;
  if (!std::isfinite(f)) return res;

  Eigen::VectorXd g = Eigen::Map<const Eigen::VectorXd>(
      p.gradient(x).data(), n);
  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n, n);

  for (int iter = 0; iter < max_iter; ++iter) {
    res.iterations = iter;
    Eigen::VectorXd pg = project_gradient(x, g, cone);
    if (pg.norm() <= tol) {
      res.converged = true;
      break;
    }
    Eigen::VectorXd d = -h * pg;
    if (d.dot(pg) > -1e-14 * d.norm() * pg.norm()) {
      h.setIdentity();
      d = -pg;
    }
    double step = 1.0;
    bool accepted = false;
    std::vector<double> xc(n);
    double fc = 0.0;
    while (step > 1e-16) {
      for (int i = 0; i < n; ++i) xc[i] = x[i] + step * d[i];
      clamp_to_cone(xc, cone);
      fc = p.evaluate(xc);
      if (std::isfinite(fc)) {
        double slope = 0.0;
        for (int i = 0; i < n; ++i) slope += g[i] * (xc[i] - x[i]);
        if (fc <= f + 1e-4 * slope && fc <= f) {
          accepted = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!accepted) break;

    Eigen::VectorXd gn =
        Eigen::Map<const Eigen::VectorXd>(p.gradient(xc).data(), n);
    Eigen::VectorXd sv(n), yv(n);
    for (int i = 0; i < n; ++i) sv[i] = xc[i] - x[i];
    yv = gn - g;
    double sy = sv.dot(yv);
    if (sy > 1e-10 * sv.norm() * yv.norm()) {
      double rho = 1.0 / sy;
      Eigen::MatrixXd vmat =
          Eigen::MatrixXd::Identity(n, n) - rho * sv * yv.transpose();
      h = vmat * h * vmat.transpose() + rho * sv * sv.transpose();
    }
    x = xc;
    f = fc;
    g = gn;
  }
  res.point = x;
  res.value = f;
  if (!res.converged)
    res.converged = project_gradient(x, g, cone).norm() <= tol;
  return res;
}

namespace {

constexpr double kDescentTol = 1e-8;
constexpr int kDescentMaxIter = 500;
constexpr int kMultistartCount = 8;

SignVector positive_cone(int n) {
  SignVector s(n);
  for (int i = 0; i < n; ++i) s[i] = 1;
  return s;
}

MinimaResult sonc_min_impl(const Polynomial& p, const SignVector& s,
                           CoveringStrategy strategy) {
  const int n = p.var_count();
  MinimaResult out;
  Polynomial q = relax_signed(p, s);
  SignVector pos_cone = positive_cone(n);

  bool fallback = false;
  Covering cov;
  try {
    cov = compute_covering(q, strategy);
  } catch (const std::exception&) {
    fallback = true;
  }
  if (!fallback) {
    for (const auto& c : cov.circuits) {
      try {
        out.circuit_minimizers.push_back(circuit_minimizer(c, q));
      } catch (const std::exception&) {
      }
    }
  }

  DescentResult relaxed;
  if (!fallback && !out.circuit_minimizers.empty()) {
    std::vector<double> bary(n, 0.0);
    for (const auto& m : out.circuit_minimizers)
      for (int i = 0; i < n; ++i) bary[i] += m[i];
    for (double& v : bary)
      v /= static_cast<double>(out.circuit_minimizers.size());
    relaxed = local_min(q, bary, kDescentTol, kDescentMaxIter, &pos_cone);
  } else {
    // no usable covering: seeded multistart over the positive orthant
    std::mt19937 gen(0x50c1d);
    std::uniform_real_distribution<double> dist(-1.5, 1.5);
    std::vector<std::vector<double>> starts;
    starts.emplace_back(n, 1.0);
    for (int k = 1; k < kMultistartCount; ++k) {
      std::vector<double> pt(n);
      for (int i = 0; i < n; ++i) pt[i] = std::exp(dist(gen));
      starts.push_back(std::move(pt));
    }
    bool first = true;
    for (const auto& pt : starts) {
      DescentResult r =
          local_min(q, pt, kDescentTol, kDescentMaxIter, &pos_cone);
      if (first || r.value < relaxed.value) relaxed = r;
      first = false;
      out.iterations += r.iterations;
    }
  }
  out.relaxed_candidate = relaxed.point;
  out.relaxed_value = relaxed.value;
  out.iterations += relaxed.iterations;

  bool pure = q == p && s.fixed_count() == 0;
  if (pure) {
    out.candidate = relaxed.point;
    out.value = relaxed.value;
    out.converged = relaxed.converged;
    return out;
  }
  std::vector<double> start = relaxed.point;
  for (int i = 0; i < n; ++i)
    if (s[i] < 0) start[i] = -start[i];
  const SignVector* cone = s.fixed_count() > 0 ? &s : nullptr;
  DescentResult fin = local_min(p, start, kDescentTol, kDescentMaxIter, cone);
  out.candidate = fin.point;
  out.value = fin.value;
  out.iterations += fin.iterations;
  out.converged = fin.converged;
  return out;
}

}  // namespace

MinimaResult sonc_min(const Polynomial& p, CoveringStrategy strategy) {
  return sonc_min_impl(p, SignVector::zero(p.var_count()), strategy);
}

MinimaResult sonc_min_signed(const Polynomial& p, const SignVector& s,
                             CoveringStrategy strategy) {
  if (s.size() != p.var_count())
    throw std::invalid_argument("sonc_min_signed: dimension mismatch");
  return sonc_min_impl(p, s, strategy);
}

}  // namespace sonc
