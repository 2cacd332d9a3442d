#include "sonc/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <numeric>

#include "json.hpp"

namespace sonc {

namespace {

constexpr double kMergeDropTol = 1e-12;

// Descending graded-lex: higher total degree first, ties broken by the
// lexicographically larger column.
bool grlex_before(const std::vector<int>& a, const std::vector<int>& b) {
  int da = std::accumulate(a.begin(), a.end(), 0);
  int db = std::accumulate(b.begin(), b.end(), 0);
  if (da != db) return da > db;
  return a > b;
}

std::string format_coeff(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.15g", value);
  if (std::strtod(buf, nullptr) != value) {
    std::snprintf(buf, sizeof(buf), "%.17g", value);
  }
  return buf;
}

}  // namespace

double ipow(double base, int exp) {
  double result = 1.0;
  double b = base;
  for (int e = exp; e > 0; e >>= 1) {
    if (e & 1) result *= b;
    b *= b;
  }
  return result;
}

Polynomial::Polynomial(int var_count, std::vector<std::vector<int>> exponents,
                       std::vector<double> coeffs)
    : n_(var_count) {
  if (n_ < 1) throw std::invalid_argument("polynomial needs n >= 1");
  if (exponents.size() != coeffs.size())
    throw std::invalid_argument("exponent/coefficient count mismatch");
  std::map<std::vector<int>, double> merged;
  for (std::size_t j = 0; j < exponents.size(); ++j) {
    auto& col = exponents[j];
    if (col.size() != static_cast<std::size_t>(n_))
      throw std::invalid_argument("exponent column has wrong length");
    for (int e : col)
      if (e < 0) throw std::invalid_argument("negative exponent");
    merged[col] += coeffs[j];
  }
  for (auto it = merged.begin(); it != merged.end();) {
    if (std::abs(it->second) < kMergeDropTol)
      it = merged.erase(it);
    else
      ++it;
  }
  const std::vector<int> zero(n_, 0);
  if (!merged.count(zero)) merged[zero] = 0.0;

  exponents_.reserve(merged.size());
  coeffs_.reserve(merged.size());
  for (auto& [col, c] : merged) {
    exponents_.push_back(col);
    coeffs_.push_back(c == 0.0 ? 0.0 : c);  // normalize -0
  }
  std::vector<int> order(exponents_.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return grlex_before(exponents_[a], exponents_[b]);
  });
  std::vector<std::vector<int>> ex;
  std::vector<double> co;
  for (int idx : order) {
    ex.push_back(std::move(exponents_[idx]));
    co.push_back(coeffs_[idx]);
  }
  exponents_ = std::move(ex);
  coeffs_ = std::move(co);
  for (int j = 0; j < term_count(); ++j)
    if (exponents_[j] == zero) origin_ = j;
}

int Polynomial::degree() const {
  int d = 0;
  for (int j = 0; j < term_count(); ++j) d = std::max(d, column_degree(j));
  return d;
}

bool Polynomial::column_even(int j) const {
  for (int e : exponents_[j])
    if (e % 2 != 0) return false;
  return true;
}

int Polynomial::column_degree(int j) const {
  return std::accumulate(exponents_[j].begin(), exponents_[j].end(), 0);
}

double Polynomial::evaluate(std::span<const double> x) const {
  if (x.size() != static_cast<std::size_t>(n_))
    throw std::invalid_argument("evaluate: dimension mismatch");
  double sum = 0.0;
  for (int j = 0; j < term_count(); ++j) {
    double term = coeffs_[j];
    for (int i = 0; i < n_; ++i) term *= ipow(x[i], exponents_[j][i]);
    sum += term;
  }
  return sum;
}

std::vector<double> Polynomial::gradient(std::span<const double> x) const {
  if (x.size() != static_cast<std::size_t>(n_))
    throw std::invalid_argument("gradient: dimension mismatch");
  std::vector<double> g(n_, 0.0);
  for (int j = 0; j < term_count(); ++j) {
    for (int i = 0; i < n_; ++i) {
      int e = exponents_[j][i];
      if (e == 0) continue;
      double term = coeffs_[j] * e * ipow(x[i], e - 1);
      for (int k = 0; k < n_; ++k) {
        if (k == i) continue;
        term *= ipow(x[k], exponents_[j][k]);
      }
      g[i] += term;
    }
  }
  return g;
}

Polynomial Polynomial::with_coeffs(std::vector<double> coeffs) const {
  if (coeffs.size() != coeffs_.size())
    throw std::invalid_argument("with_coeffs: size mismatch");
  for (int j = 0; j < term_count(); ++j)
    if (coeffs[j] == 0.0 && j != origin_)
      throw std::invalid_argument("with_coeffs: zero coefficient off origin");
  Polynomial q = *this;
  for (auto& c : coeffs)
    if (c == 0.0) c = 0.0;
  q.coeffs_ = std::move(coeffs);
  return q;
}

bool Polynomial::operator==(const Polynomial& other) const {
  return n_ == other.n_ && exponents_ == other.exponents_ &&
         coeffs_ == other.coeffs_;
}

std::string Polynomial::to_string() const {
  std::string out;
  bool constant_only = term_count() == 1 && origin_ == 0;
  for (int j = 0; j < term_count(); ++j) {
    double c = coeffs_[j];
    if (j == origin_ && c == 0.0 && !constant_only) continue;
    bool first = out.empty();
    double mag = std::abs(c);
    if (first) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    bool has_vars = column_degree(j) > 0;
    if (!has_vars) {
      out += format_coeff(mag);
      continue;
    }
    bool wrote = false;
    if (mag != 1.0) {
      out += format_coeff(mag);
      wrote = true;
    }
    for (int i = 0; i < n_; ++i) {
      int e = exponents_[j][i];
      if (e == 0) continue;
      if (wrote) out += "*";
      out += "x" + std::to_string(i);
      if (e > 1) out += "^" + std::to_string(e);
      wrote = true;
    }
  }
  if (out.empty()) out = "0";
  return out;
}

std::string Polynomial::to_json_string() const {
  nlohmann::json j;
  j["n"] = n_;
  j["A"] = exponents_;
  j["b"] = coeffs_;
  return j.dump();
}

namespace {

class Parser {
 public:
  explicit Parser(const std::string& text) : s_(text) {}

  Polynomial run() {
    skip_ws();
    if (eof()) throw ParseError("empty input", 0);
    std::vector<std::vector<std::pair<int, int>>> term_vars;
    std::vector<double> term_coeffs;
    int max_index = -1;

    double sign = 1.0;
    if (peek() == '+' || peek() == '-') {
      sign = take() == '-' ? -1.0 : 1.0;
      skip_ws();
    }
    for (;;) {
      auto [vars, coeff] = parse_term();
      term_vars.push_back(vars);
      term_coeffs.push_back(sign * coeff);
      for (auto& [idx, _] : vars) max_index = std::max(max_index, idx);
      skip_ws();
      if (eof()) break;
      char op = peek();
      if (op != '+' && op != '-')
        throw ParseError("expected '+' or '-'", pos_);
      take();
      sign = op == '-' ? -1.0 : 1.0;
      skip_ws();
      if (eof()) throw ParseError("trailing operator", pos_);
    }

    int n = std::max(1, max_index + 1);
    std::vector<std::vector<int>> exponents;
    for (auto& vars : term_vars) {
      std::vector<int> col(n, 0);
      for (auto& [idx, e] : vars) col[idx] += e;
      exponents.push_back(std::move(col));
    }
    return Polynomial(n, std::move(exponents), std::move(term_coeffs));
  }

 private:
  std::pair<std::vector<std::pair<int, int>>, double> parse_term() {
    std::vector<std::pair<int, int>> vars;
    double coeff = 1.0;
    bool any = false;
    skip_ws();
    if (!eof() && (std::isdigit(static_cast<unsigned char>(peek())) ||
                   peek() == '.')) {
      coeff = parse_number();
      any = true;
      skip_ws();
      if (!eof() && peek() == '*') {
        take();
        skip_ws();
      }
    }
    while (!eof() && peek() == 'x') {
      vars.push_back(parse_var());
      any = true;
      skip_ws();
      if (!eof() && peek() == '*') {
        take();
        skip_ws();
        if (eof() || peek() != 'x')
          throw ParseError("expected variable after '*'", pos_);
      }
    }
    if (!any) throw ParseError("expected term", pos_);
    return {vars, coeff};
  }

  std::pair<int, int> parse_var() {
    take();  // 'x'
    if (eof() || !std::isdigit(static_cast<unsigned char>(peek())))
      throw ParseError("expected variable index", pos_);
    int idx = parse_int();
    int e = 1;
    if (!eof() && peek() == '^') {
      take();
      skip_ws();
      if (!eof() && peek() == '-')
        throw ParseError("negative exponent", pos_);
      if (eof() || !std::isdigit(static_cast<unsigned char>(peek())))
        throw ParseError("expected exponent", pos_);
      std::size_t before = pos_;
      e = parse_int();
      if (!eof() && peek() == '.')
        throw ParseError("fractional exponent", before);
    }
    return {idx, e};
  }

  int parse_int() {
    long v = 0;
    while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) {
      v = v * 10 + (take() - '0');
      if (v > 1'000'000) throw ParseError("exponent or index too large", pos_);
    }
    return static_cast<int>(v);
  }

  double parse_number() {
    const char* start = s_.c_str() + pos_;
    char* end = nullptr;
    double v = std::strtod(start, &end);
    if (end == start) throw ParseError("expected number", pos_);
    pos_ += static_cast<std::size_t>(end - start);
    return v;
  }

  void skip_ws() {
    while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }
  bool eof() const { return pos_ >= s_.size(); }
  char peek() const { return s_[pos_]; }
  char take() { return s_[pos_++]; }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial parse_polynomial(const std::string& text) {
  return Parser(text).run();
}

Polynomial polynomial_from_json(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  int n = j.at("n").get<int>();
  auto exponents = j.at("A").get<std::vector<std::vector<int>>>();
  auto coeffs = j.at("b").get<std::vector<double>>();
  return Polynomial(n, std::move(exponents), std::move(coeffs));
}

Polynomial polynomial_from_any(const std::string& text) {
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    if (c == '{') return polynomial_from_json(text);
    break;
  }
  return parse_polynomial(text);
}

SupportClassification classify_support(const Polynomial& p) {
  SupportClassification cls;
  for (int j = 0; j < p.term_count(); ++j) {
    if (p.coeff(j) > 0 && p.column_even(j))
      cls.mosq.push_back(j);
    else
      cls.nosq.push_back(j);
  }
  return cls;
}

Polynomial relax(const Polynomial& p) {
  auto cls = classify_support(p);
  std::vector<double> coeffs = p.coeffs();
  for (int j : cls.nosq) coeffs[j] = -std::abs(coeffs[j]);
  return p.with_coeffs(std::move(coeffs));
}

double evaluate(const Polynomial& p, std::span<const double> x) {
  return p.evaluate(x);
}

std::vector<double> gradient(const Polynomial& p, std::span<const double> x) {
  return p.gradient(x);
}

}  // namespace sonc
