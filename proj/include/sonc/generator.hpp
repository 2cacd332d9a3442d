#pragma once

#include <string>

#include "sonc/polynomial.hpp"

namespace sonc {

/// Random-instance recipe: the origin plus n even vertex points of max-norm
/// degree d (so the Newton polytope is a full simplex and every covering LP
/// is feasible), then t - n - 1 interior lattice points.
struct GeneratorSpec {
  int n = 2;
  int d = 4;  // even
  int t = 6;  // >= n + 1
  unsigned seed = 0;
  double coeff_lo = -10.0;
  double coeff_hi = 10.0;
  double nonsquare_fraction = 0.5;  // of the interior points
};

/// Deterministic for a fixed spec; throws std::invalid_argument on an
/// infeasible spec (t < n + 1, odd d, ...).
Polynomial generate_instance(const GeneratorSpec& spec);

std::string instance_id(const GeneratorSpec& spec);

}  // namespace sonc
