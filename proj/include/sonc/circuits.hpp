#pragma once

#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sonc/polynomial.hpp"

namespace sonc {

/// The relaxation admits no SONC bound: some negative term lies outside the
/// convex hull of the positive support, so its covering LP is infeasible.
struct UnboundedRelaxation : std::runtime_error {
  explicit UnboundedRelaxation(int inner)
      : std::runtime_error("no covering: term " + std::to_string(inner) +
                           " lies outside the hull of the positive support"),
        inner_index(inner) {}
  int inner_index;
};

struct CoveringFailure : std::runtime_error {
  explicit CoveringFailure(int inner)
      : std::runtime_error("covering LP failed numerically for term " +
                           std::to_string(inner)),
        inner_index(inner) {}
  int inner_index;
};

/// One simplex of positive outer terms with one covered inner term.
/// lambdas are the positive barycentric coordinates of the inner exponent
/// with respect to the outer exponents (sum 1, identity within 1e-9).
struct Circuit {
  int inner_index = -1;
  std::vector<int> outer_indices;
  std::vector<double> lambdas;
  int non_origin_count = 0;  // r: outer terms other than the constant
};

/// One circuit per negative term, plus the reverse map from each positive
/// term to the circuits drawing on its coefficient budget.
struct Covering {
  std::vector<Circuit> circuits;
  std::map<int, std::vector<int>> budget_map;
};

enum class CoveringStrategy { simple, extended };

/// Covers every negative non-constant term of p by a circuit of positive
/// terms (p must already be relaxed, so classification is by coefficient
/// sign; the origin is always an eligible outer point). Each covering LP
/// minimizes distance-weighted lambda mass, then is Caratheodory-reduced to
/// a circuit. strategy == extended additionally scans, for every negative
/// term, the simplices of the other circuits that contain it and keeps the
/// candidate with the smallest distance weight.
Covering compute_covering(const Polynomial& p,
                          CoveringStrategy strategy = CoveringStrategy::simple);

/// Theta = prod_j (weights_j / lambda_j)^lambda_j, computed in log space.
/// Throws std::domain_error on a nonpositive weight.
double circuit_number(const Circuit& c, std::span<const double> weights);

/// Nonnegativity of the circuit polynomial cut out of p: true iff the inner
/// term is itself a monomial square, or |b_inner| <= Theta of the actual
/// outer coefficients (boundary inclusive).
bool is_nonnegative_circuit(const Circuit& c, const Polynomial& p);

/// Global minimizer of the circuit polynomial cut out of p, from the
/// stationarity system <s, alpha(j) - beta> = log(lambda_j |b_beta| /
/// b_alpha(j)) over the non-origin outer terms; returns e^s (least-norm in s
/// when the circuit spans fewer than n dimensions). A positive inner
/// coefficient with an odd exponent is handled by reflecting that variable;
/// a positive inner monomial square returns the zero vector.
std::vector<double> circuit_minimizer(const Circuit& c, const Polynomial& p);

}  // namespace sonc
