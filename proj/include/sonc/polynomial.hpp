#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sonc {

// Parse failure with the byte offset of the offending token.
struct ParseError : std::runtime_error {
  ParseError(const std::string& what, std::size_t pos)
      : std::runtime_error(what + " (at position " + std::to_string(pos) + ")"),
        position(pos) {}
  std::size_t position;
};

/// Sparse multivariate polynomial, stored as an exponent matrix plus a
/// coefficient vector. Term j has exponent column `exponent(j)` (length n)
/// and coefficient `coeff(j)`.
///
/// Construction canonicalizes: like terms are merged, coefficients below
/// 1e-12 are dropped, terms are sorted in descending graded-lex order, and a
/// constant term is inserted when the origin is absent from the support (the
/// only term allowed a zero coefficient). Instances are immutable and safe
/// to share across threads.
class Polynomial {
 public:
  Polynomial(int var_count, std::vector<std::vector<int>> exponents,
             std::vector<double> coeffs);

  int var_count() const { return n_; }
  int term_count() const { return static_cast<int>(coeffs_.size()); }
  const std::vector<int>& exponent(int j) const { return exponents_[j]; }
  double coeff(int j) const { return coeffs_[j]; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  /// Index of the all-zero exponent column; always present.
  int origin_index() const { return origin_; }
  int degree() const;

  bool column_even(int j) const;
  int column_degree(int j) const;

  double evaluate(std::span<const double> x) const;
  std::vector<double> gradient(std::span<const double> x) const;

  /// Same support, new coefficients. Zero coefficients are rejected except
  /// at the origin.
  Polynomial with_coeffs(std::vector<double> coeffs) const;

  std::string to_string() const;
  std::string to_json_string() const;

  bool operator==(const Polynomial& other) const;

 private:
  int n_ = 1;
  std::vector<std::vector<int>> exponents_;  // term-major, each length n
  std::vector<double> coeffs_;
  int origin_ = -1;
};

/// Parses the text grammar
///   poly := term (('+'|'-') term)*
///   term := coeff? ('*'? var)*
///   var  := 'x' index ('^' exponent)?
/// with variables x0..x{n-1} and decimal-float coefficients.
Polynomial parse_polynomial(const std::string& text);

/// Parses the JSON object form {"n": int, "A": [[..] per term], "b": [..]}.
Polynomial polynomial_from_json(const std::string& json_text);

/// Reads a polynomial from either format (JSON when the first non-space
/// character is '{').
Polynomial polynomial_from_any(const std::string& text);

/// Partition of the support into monomial squares (all-even exponents with a
/// positive coefficient) and everything else.
struct SupportClassification {
  std::vector<int> mosq;
  std::vector<int> nosq;
};

SupportClassification classify_support(const Polynomial& p);

/// Forces every non-square coefficient negative: the relaxed polynomial
/// attains its minimum on the nonnegative orthant and lower-bounds p there.
Polynomial relax(const Polynomial& p);

double evaluate(const Polynomial& p, std::span<const double> x);
std::vector<double> gradient(const Polynomial& p, std::span<const double> x);

/// x^e for integer e >= 0 by binary exponentiation (0^0 = 1).
double ipow(double base, int exp);

}  // namespace sonc
