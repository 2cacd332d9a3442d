#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sonc/bounds.hpp"
#include "sonc/polynomial.hpp"

namespace sonc {

/// Element of {-1,0,+1}^n naming a sign cone; the all-zero vector is R^n.
struct SignVector {
  std::vector<std::int8_t> s;

  SignVector() = default;
  explicit SignVector(int n) : s(n, 0) {}
  static SignVector zero(int n) { return SignVector(n); }

  int size() const { return static_cast<int>(s.size()); }
  std::int8_t operator[](int i) const { return s[i]; }
  std::int8_t& operator[](int i) { return s[i]; }
  /// Number of fixed signs; doubles as the tree depth in the search.
  int fixed_count() const {
    int c = 0;
    for (auto v : s) c += v != 0;
    return c;
  }
  bool full() const { return fixed_count() == size(); }
  std::string to_string() const;
  bool operator==(const SignVector&) const = default;
};

/// Effective signs of the terms on one concrete orthant: v_j = 1 iff term j
/// is negative there. orthant uses 0 for + and 1 for -.
struct EffectiveSigns {
  std::vector<std::uint8_t> v;
  std::vector<std::uint8_t> orthant;
};

/// Indices of the terms that are provably nonnegative on the sign cone:
/// sgn(b_j) * prod_i s_i^(A_ij mod 2) = 1 with 0^0 = 1.
std::vector<int> positive_points(const Polynomial& p, const SignVector& s);

/// The sign-cone relaxation: positive points keep magnitude +|b_j|, all
/// other terms are forced to -|b_j|; the result is read over the closed
/// positive orthant.
Polynomial relax_signed(const Polynomial& p, const SignVector& s);

/// Orthants whose effective coefficient vectors are minimal in the
/// elementwise order; bounding these covers every orthant. Comparison is
/// restricted to the non-square columns (the square columns contribute the
/// same bit on every orthant). Enumeration is binary counting over
/// {0,1}^n with bit i flipping variable i, so ties keep the first orthant.
/// Requires n <= 15.
std::vector<std::pair<EffectiveSigns, SignVector>> minimal_orthants(
    const Polynomial& p);

enum class ForkMethod { sonc, sage, both };

/// Bounds p by bounding each minimal orthant's relaxation over the positive
/// orthant and taking the worst; a failure in any single orthant already
/// yields -inf.
BoundResult fork_bound(const Polynomial& p,
                       ForkMethod method = ForkMethod::sonc,
                       CoveringStrategy strategy = CoveringStrategy::simple,
                       double tol = kDefaultTol, const Deadline& deadline = {});

}  // namespace sonc
