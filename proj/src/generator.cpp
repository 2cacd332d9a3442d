#include "sonc/generator.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace sonc {

namespace {

bool inside_simplex(const Eigen::MatrixXd& vertices_inv,
                    const std::vector<int>& point) {
  Eigen::VectorXd beta(point.size());
  for (std::size_t i = 0; i < point.size(); ++i) beta[i] = point[i];
  Eigen::VectorXd mu = vertices_inv * beta;
  double sum = 0.0;
  for (int i = 0; i < mu.size(); ++i) {
    if (mu[i] < -1e-9) return false;
    sum += mu[i];
  }
  return sum <= 1.0 + 1e-9;
}

}  // namespace

Polynomial generate_instance(const GeneratorSpec& spec) {
  if (spec.n < 1) throw std::invalid_argument("generator: n must be >= 1");
  if (spec.d < 2 || spec.d % 2 != 0)
    throw std::invalid_argument("generator: d must be even and >= 2");
  if (spec.t < spec.n + 1)
    throw std::invalid_argument("generator: t must be >= n + 1");
  if (!(spec.coeff_lo < 0 && spec.coeff_hi > 0))
    throw std::invalid_argument("generator: coefficient range must straddle 0");
  if (spec.nonsquare_fraction < 0 || spec.nonsquare_fraction > 1)
    throw std::invalid_argument("generator: bad non-square fraction");

  const int n = spec.n;
  std::mt19937 gen(spec.seed);
  std::uniform_int_distribution<int> off_diag(0, spec.d / 4);
  std::uniform_real_distribution<double> pos_coeff(0.5, spec.coeff_hi);
  std::uniform_real_distribution<double> neg_coeff(spec.coeff_lo, -0.5);
  std::uniform_real_distribution<double> any_coeff(spec.coeff_lo,
                                                   spec.coeff_hi);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // vertex points: full degree d on their own axis, small even entries
  // elsewhere; retried until linearly independent
  std::vector<std::vector<int>> vertices;
  Eigen::MatrixXd vmat(n, n);
  for (int attempt = 0; attempt < 200; ++attempt) {
    vertices.clear();
    for (int i = 0; i < n; ++i) {
      std::vector<int> col(n, 0);
      col[i] = spec.d;
      for (int k = 0; k < n; ++k)
        if (k != i) col[k] = 2 * off_diag(gen);
      vertices.push_back(std::move(col));
    }
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) vmat(k, i) = vertices[i][k];
    if (std::abs(vmat.fullPivLu().determinant()) > 0.5) break;
    vertices.clear();
  }
  if (vertices.empty())
    throw std::runtime_error("generator: could not place vertex points");
  Eigen::MatrixXd vinv = vmat.inverse();

  std::set<std::vector<int>> support;
  std::vector<std::vector<int>> exponents;
  std::vector<double> coeffs;
  auto push = [&](std::vector<int> col, double c) {
    support.insert(col);
    exponents.push_back(std::move(col));
    coeffs.push_back(c);
  };
  push(std::vector<int>(n, 0), pos_coeff(gen));
  for (auto& v : vertices) {
    if (support.count(v))
      throw std::runtime_error("generator: duplicate vertex");
    push(v, pos_coeff(gen));
  }

  const int interior_total = spec.t - n - 1;
  const int nonsquare_target = static_cast<int>(
      std::lround(spec.nonsquare_fraction * interior_total));
  int placed = 0;

  // Small supports: enumerate the whole lattice pool so tight (d, t) cells
  // still fill up; the pool order is a seeded shuffle, so output stays
  // deterministic. Large supports keep rejection sampling.
  double pool_size = std::pow(spec.d + 1.0, n);
  if (pool_size <= 1e5) {
    std::vector<std::vector<int>> evens, odds;
    std::vector<int> col(n, 0);
    for (;;) {
      if (!support.count(col) && inside_simplex(vinv, col)) {
        bool even = std::all_of(col.begin(), col.end(),
                                [](int e) { return e % 2 == 0; });
        (even ? evens : odds).push_back(col);
      }
      int i = 0;
      for (; i < n; ++i) {
        if (++col[i] <= spec.d) break;
        col[i] = 0;
      }
      if (i == n) break;
    }
    std::shuffle(evens.begin(), evens.end(), gen);
    std::shuffle(odds.begin(), odds.end(), gen);
    while (placed < interior_total) {
      bool want_square = placed >= nonsquare_target;
      if (want_square && !evens.empty()) {
        push(evens.back(), pos_coeff(gen));
        evens.pop_back();
      } else if (!odds.empty()) {
        double c;
        do {
          c = any_coeff(gen);
        } while (std::abs(c) < 0.5);
        push(odds.back(), c);
        odds.pop_back();
      } else if (!evens.empty()) {
        // no odd points left: place an even point as a forced non-square
        push(evens.back(), neg_coeff(gen));
        evens.pop_back();
      } else {
        break;
      }
      ++placed;
    }
  } else {
    for (int attempt = 0; attempt < 500 * (interior_total + 1); ++attempt) {
      if (placed >= interior_total) break;
      bool want_square = placed >= nonsquare_target;
      // random barycentric mix of the vertices, shrunk toward the origin
      std::vector<double> w(n);
      double wsum = 0.0;
      for (int i = 0; i < n; ++i) {
        w[i] = -std::log(std::max(unit(gen), 1e-12));
        wsum += w[i];
      }
      double scale = 0.15 + 0.7 * unit(gen);
      std::vector<int> col(n, 0);
      for (int k = 0; k < n; ++k) {
        double x = 0.0;
        for (int i = 0; i < n; ++i) x += (w[i] / wsum) * vertices[i][k];
        x *= scale;
        col[k] = want_square ? 2 * static_cast<int>(std::lround(x / 2.0))
                             : static_cast<int>(std::lround(x));
        if (col[k] < 0) col[k] = 0;
      }
      if (support.count(col)) continue;
      if (!inside_simplex(vinv, col)) continue;
      bool even = std::all_of(col.begin(), col.end(),
                              [](int e) { return e % 2 == 0; });
      double c;
      if (want_square) {
        if (!even) continue;
        c = pos_coeff(gen);
      } else if (even) {
        c = neg_coeff(gen);
      } else {
        do {
          c = any_coeff(gen);
        } while (std::abs(c) < 0.5);
      }
      push(std::move(col), c);
      ++placed;
    }
  }
  if (placed < interior_total)
    throw std::runtime_error(
        "generator: could not place enough interior points (d too small "
        "for t)");
  return Polynomial(n, std::move(exponents), std::move(coeffs));
}

std::string instance_id(const GeneratorSpec& spec) {
  return "n" + std::to_string(spec.n) + "_d" + std::to_string(spec.d) + "_t" +
         std::to_string(spec.t) + "_s" + std::to_string(spec.seed);
}

}  // namespace sonc
