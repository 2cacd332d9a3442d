#include "sonc/orthants.hpp"

#include <algorithm>
#include <cmath>

namespace sonc {

std::string SignVector::to_string() const {
  std::string out = "(";
  for (int i = 0; i < size(); ++i) {
    if (i) out += ",";
    out += s[i] > 0 ? "+" : (s[i] < 0 ? "-" : "0");
  }
  return out + ")";
}

std::vector<int> positive_points(const Polynomial& p, const SignVector& s) {
  if (s.size() != p.var_count())
    throw std::invalid_argument("positive_points: dimension mismatch");
  std::vector<int> pos;
  for (int j = 0; j < p.term_count(); ++j) {
    double b = p.coeff(j);
    int prod = b > 0 ? 1 : (b < 0 ? -1 : 0);
    for (int i = 0; i < p.var_count(); ++i)
      if (p.exponent(j)[i] % 2 != 0) prod *= s[i];
    if (prod == 1) pos.push_back(j);
  }
  return pos;
}

Polynomial relax_signed(const Polynomial& p, const SignVector& s) {
  std::vector<int> pos = positive_points(p, s);
  std::vector<char> is_pos(p.term_count(), 0);
  for (int j : pos) is_pos[j] = 1;
  std::vector<double> coeffs(p.term_count());
  for (int j = 0; j < p.term_count(); ++j)
    coeffs[j] = is_pos[j] ? std::abs(p.coeff(j)) : -std::abs(p.coeff(j));
  return p.with_coeffs(std::move(coeffs));
}

std::vector<std::pair<EffectiveSigns, SignVector>> minimal_orthants(
    const Polynomial& p) {
  const int n = p.var_count();
  if (n > 15)
    throw std::invalid_argument("minimal_orthants: n > 15 not supported");
  const int t = p.term_count();
  SupportClassification cls = classify_support(p);
  const std::vector<int>& cmp_cols = cls.nosq;

  // column parities and negativity bits, precomputed
  std::vector<std::vector<std::uint8_t>> parity(t,
                                                std::vector<std::uint8_t>(n));
  std::vector<std::uint8_t> neg(t);
  for (int j = 0; j < t; ++j) {
    for (int i = 0; i < n; ++i) parity[j][i] = p.exponent(j)[i] % 2;
    neg[j] = p.coeff(j) < 0 ? 1 : 0;
  }

  // smaller effective coefficients mean more 1-bits, so the coefficient
  // order on indicator vectors is the reversed elementwise bit order
  auto coeff_le = [&](const std::vector<std::uint8_t>& a,
                      const std::vector<std::uint8_t>& b) {
    for (int j : cmp_cols)
      if (a[j] < b[j]) return false;
    return true;
  };
  auto coeff_lt = [&](const std::vector<std::uint8_t>& a,
                      const std::vector<std::uint8_t>& b) {
    bool strict = false;
    for (int j : cmp_cols) {
      if (a[j] < b[j]) return false;
      if (a[j] > b[j]) strict = true;
    }
    return strict;
  };

  std::vector<std::pair<EffectiveSigns, SignVector>> kept;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    std::vector<std::uint8_t> v(t);
    for (int j = 0; j < t; ++j) {
      std::uint8_t bit = neg[j];
      for (int i = 0; i < n; ++i)
        if (mask & (1u << i)) bit ^= parity[j][i];
      v[j] = bit;
    }
    bool dominated = false;
    for (const auto& [e, s] : kept) {
      if (coeff_le(e.v, v)) {
        dominated = true;
        break;
      }
    }
    if (dominated) continue;
    std::erase_if(kept, [&](const auto& entry) {
      return coeff_lt(v, entry.first.v);
    });
    EffectiveSigns eff;
    eff.v = std::move(v);
    eff.orthant.resize(n);
    SignVector sv(n);
    for (int i = 0; i < n; ++i) {
      bool negvar = mask & (1u << i);
      eff.orthant[i] = negvar ? 1 : 0;
      sv[i] = negvar ? -1 : 1;
    }
    kept.emplace_back(std::move(eff), std::move(sv));
  }
  return kept;
}

BoundResult fork_bound(const Polynomial& p, ForkMethod method,
                       CoveringStrategy strategy, double tol,
                       const Deadline& deadline) {
  StopWatch watch;
  BoundResult out;
  out.method = method == ForkMethod::sonc ? BoundMethod::sonc
                                          : BoundMethod::sage;
  out.lower_bound = kInf;
  out.solver_status = SolveStatus::optimal;

  for (const auto& [eff, sv] : minimal_orthants(p)) {
    if (deadline.expired()) throw TimeoutError();
    Polynomial q = relax_signed(p, sv);
    double orthant_bound = -kInf;
    SolveStatus orthant_status = SolveStatus::numerical_failure;
    if (method == ForkMethod::sonc || method == ForkMethod::both) {
      BoundResult r = sonc_bound_relaxed(q, strategy, tol, deadline);
      if (r.solver_status == SolveStatus::optimal) {
        orthant_bound = std::max(orthant_bound, r.lower_bound);
        orthant_status = SolveStatus::optimal;
      } else if (orthant_status != SolveStatus::optimal) {
        orthant_status = r.solver_status;
      }
    }
    if (method == ForkMethod::sage || method == ForkMethod::both) {
      BoundResult r = sage_bound_relaxed(q, tol, deadline);
      if (r.solver_status == SolveStatus::optimal) {
        orthant_bound = std::max(orthant_bound, r.lower_bound);
        orthant_status = SolveStatus::optimal;
      } else if (orthant_status != SolveStatus::optimal) {
        orthant_status = r.solver_status;
      }
    }
    // one failed orthant already forces the trivial bound
    if (orthant_status != SolveStatus::optimal) {
      out.lower_bound = -kInf;
      out.solver_status = orthant_status;
      out.wall_time_s = watch.seconds();
      return out;
    }
    out.lower_bound = std::min(out.lower_bound, orthant_bound);
  }
  out.wall_time_s = watch.seconds();
  return out;
}

}  // namespace sonc
