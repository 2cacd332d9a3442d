#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "sonc/polynomial.hpp"

using namespace sonc;

namespace {

Polynomial ex31() { return parse_polynomial("x0^4 + x0^3 - x0 + 1"); }

Polynomial motzkin() {
  return parse_polynomial("x0^4*x1^2 + x0^2*x1^4 + 1 - 3*x0^2*x1^2");
}

}  // namespace

TEST_SUITE_BEGIN("polynomial");

TEST_CASE("parse: one-variable quartic") {
  Polynomial p = ex31();
  CHECK(p.var_count() == 1);
  CHECK(p.term_count() == 4);
  // descending graded-lex order: x^4, x^3, x, 1
  CHECK(p.exponent(0)[0] == 4);
  CHECK(p.coeff(0) == 1.0);
  CHECK(p.exponent(2)[0] == 1);
  CHECK(p.coeff(2) == -1.0);
  CHECK(p.origin_index() == 3);
  CHECK(p.degree() == 4);
}

TEST_CASE("parse: like terms merge and cancel") {
  Polynomial p = parse_polynomial("2*x0 - 2*x0 + 1");
  CHECK(p.term_count() == 1);
  CHECK(p.coeff(0) == 1.0);
  CHECK(p.origin_index() == 0);
}

TEST_CASE("parse: multivariate terms") {
  Polynomial p = parse_polynomial("3.932*x1^8 - 1.204*x0*x1*x2^3");
  CHECK(p.var_count() == 3);
  // a synthetic zero constant is added when the origin is absent
  CHECK(p.term_count() == 3);
  REQUIRE(p.origin_index() >= 0);
  CHECK(p.coeff(p.origin_index()) == 0.0);
  bool found_even = false, found_odd = false;
  for (int j = 0; j < p.term_count(); ++j) {
    if (p.exponent(j) == std::vector<int>{0, 8, 0}) {
      CHECK(p.coeff(j) == doctest::Approx(3.932));
      found_even = true;
    }
    if (p.exponent(j) == std::vector<int>{1, 1, 3}) {
      CHECK(p.coeff(j) == doctest::Approx(-1.204));
      found_odd = true;
    }
  }
  CHECK(found_even);
  CHECK(found_odd);
}

TEST_CASE("parse: errors carry positions") {
  CHECK_THROWS_AS(parse_polynomial(""), ParseError);
  CHECK_THROWS_AS(parse_polynomial("   "), ParseError);
  CHECK_THROWS_AS(parse_polynomial("x0^-2"), ParseError);
  CHECK_THROWS_AS(parse_polynomial("x0^1.5"), ParseError);
  CHECK_THROWS_AS(parse_polynomial("x0 + + x1"), ParseError);
  CHECK_THROWS_AS(parse_polynomial("x0 +"), ParseError);
  try {
    parse_polynomial("x0 + $");
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(e.position == 5);
  }
}

TEST_CASE("evaluate: quartic at 1 and at its minimizer") {
  Polynomial p = ex31();
  CHECK(p.evaluate(std::vector<double>{1.0}) == doctest::Approx(2.0));
  // oracle: grid search plus bisection on the derivative
  auto [xstar, vstar] = testing::grid_min_1d(p, -2.0, 2.0);
  CHECK(xstar == doctest::Approx(0.455).epsilon(2e-2));
  CHECK(vstar == doctest::Approx(0.682).epsilon(1e-3));
  CHECK(p.evaluate(std::vector<double>{xstar}) == doctest::Approx(vstar));
}

TEST_CASE("evaluate: Motzkin vanishes at (1,1)") {
  CHECK(motzkin().evaluate(std::vector<double>{1.0, 1.0}) ==
        doctest::Approx(0.0));
  CHECK_THROWS_AS(motzkin().evaluate(std::vector<double>{1.0}),
                  std::invalid_argument);
}

TEST_CASE("gradient: exact cases") {
  auto g = motzkin().gradient(std::vector<double>{1.0, 1.0});
  CHECK(g[0] == doctest::Approx(0.0));
  CHECK(g[1] == doctest::Approx(0.0));

  Polynomial c = parse_polynomial("5");
  CHECK(c.gradient(std::vector<double>{2.0})[0] == 0.0);

  CHECK(ex31().gradient(std::vector<double>{0.0})[0] ==
        doctest::Approx(-1.0));
}

TEST_CASE("gradient matches central finite differences") {
  std::mt19937 gen(7);
  std::uniform_real_distribution<double> dist(0.3, 1.7);
  Polynomial ps[] = {ex31(), motzkin(),
                     parse_polynomial("2*x0^3*x1 - x1^2 + 4*x0*x1*x2 + 1")};
  for (const Polynomial& p : ps) {
    for (int rep = 0; rep < 5; ++rep) {
      std::vector<double> x(p.var_count());
      for (auto& v : x) v = dist(gen);
      auto g = p.gradient(x);
      auto fd = testing::fd_gradient(
          [&](const std::vector<double>& y) { return p.evaluate(y); }, x);
      for (int i = 0; i < p.var_count(); ++i)
        CHECK(g[i] ==
              doctest::Approx(fd[i]).epsilon(1e-5).scale(std::abs(g[i]) + 1));
    }
  }
}

TEST_CASE("classify_support: examples") {
  auto cls = classify_support(ex31());
  CHECK(cls.mosq == std::vector<int>{0, 3});  // x^4 and the constant
  CHECK(cls.nosq == std::vector<int>{1, 2});  // x^3 and -x

  Polynomial sos = parse_polynomial("x0^2 + x1^2 + 1");
  CHECK(classify_support(sos).nosq.empty());

  auto mcls = classify_support(motzkin());
  CHECK(mcls.mosq.size() == 3);
  CHECK(mcls.nosq.size() == 1);
  CHECK(motzkin().coeff(mcls.nosq[0]) == doctest::Approx(-3.0));
}

TEST_CASE("relax: examples and idempotence") {
  Polynomial r = relax(ex31());
  CHECK(r == parse_polynomial("x0^4 - x0^3 - x0 + 1"));
  CHECK(relax(r) == r);

  Polynomial sos = parse_polynomial("x0^2 + 2*x1^4 + 1");
  CHECK(relax(sos) == sos);
  CHECK(relax(motzkin()) == motzkin());
}

TEST_CASE("relax lower-bounds p on the nonnegative orthant") {
  std::mt19937 gen(11);
  std::uniform_real_distribution<double> dist(0.0, 2.0);
  Polynomial ps[] = {ex31(),
                     parse_polynomial("x0^2*x1 - 3*x0*x1^3 + x1^4 + 2")};
  for (const Polynomial& p : ps) {
    Polynomial r = relax(p);
    for (int rep = 0; rep < 200; ++rep) {
      std::vector<double> x(p.var_count());
      for (auto& v : x) v = dist(gen);
      CHECK(r.evaluate(x) <= p.evaluate(x) + 1e-12);
    }
  }
}

TEST_CASE("serialize round-trips") {
  const char* sources[] = {
      "x0^4 + x0^3 - x0 + 1",
      "x0^4*x1^2 + x0^2*x1^4 + 1 - 3*x0^2*x1^2",
      "3.932*x1^8 - 1.204*x0*x1*x2^3",
      "0.25*x0^2 - 7",
      "5",
  };
  for (const char* src : sources) {
    Polynomial p = parse_polynomial(src);
    CHECK(parse_polynomial(p.to_string()) == p);
    CHECK(polynomial_from_json(p.to_json_string()) == p);
    CHECK(polynomial_from_any(p.to_json_string()) == p);
  }
}

TEST_CASE("classification is a partition") {
  std::mt19937 gen(3);
  std::uniform_int_distribution<int> expo(0, 5);
  std::uniform_real_distribution<double> coeff(-5.0, 5.0);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<std::vector<int>> cols;
    std::vector<double> cs;
    for (int j = 0; j < 6; ++j) {
      cols.push_back({expo(gen), expo(gen)});
      double c = coeff(gen);
      cs.push_back(c == 0 ? 1.0 : c);
    }
    Polynomial p(2, cols, cs);
    auto cls = classify_support(p);
    CHECK(static_cast<int>(cls.mosq.size() + cls.nosq.size()) ==
          p.term_count());
    for (int j : cls.mosq) {
      CHECK(p.coeff(j) > 0);
      CHECK(p.column_even(j));
    }
  }
}

TEST_SUITE_END();
