#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "sonc/bounds.hpp"
#include "sonc/minima.hpp"

using namespace sonc;

namespace {

Polynomial ex31() { return parse_polynomial("x0^4 + x0^3 - x0 + 1"); }

Polynomial motzkin() {
  return parse_polynomial("x0^4*x1^2 + x0^2*x1^4 + 1 - 3*x0^2*x1^2");
}

}  // namespace

TEST_SUITE_BEGIN("minima");

TEST_CASE("local_min: parabola from 0") {
  Polynomial p = parse_polynomial("x0^2 - 2*x0 + 1");
  DescentResult r = local_min(p, std::vector<double>{0.0});
  CHECK(r.converged);
  CHECK(r.point[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.value == doctest::Approx(0.0));
}

TEST_CASE("local_min: quartic from 1 lands on the oracle minimum") {
  Polynomial p = ex31();
  auto [xstar, vstar] = testing::grid_min_1d(p, -2.0, 2.0);
  DescentResult r = local_min(p, std::vector<double>{1.0});
  CHECK(r.point[0] == doctest::Approx(xstar).epsilon(1e-4));
  CHECK(r.value == doctest::Approx(vstar).epsilon(1e-6));
  CHECK(r.value == doctest::Approx(0.682).epsilon(1e-3));
}

TEST_CASE("local_min: Motzkin from (2,2) reaches 0") {
  DescentResult r = local_min(motzkin(), std::vector<double>{2.0, 2.0});
  CHECK(r.value == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("local_min never exceeds the start value") {
  Polynomial ps[] = {ex31(), motzkin()};
  for (const Polynomial& p : ps) {
    std::vector<double> start(p.var_count(), 1.3);
    double v0 = p.evaluate(start);
    DescentResult r = local_min(p, start);
    CHECK(r.value <= v0 + 1e-12);
  }
}

TEST_CASE("sonc_min: Motzkin via its single circuit") {
  MinimaResult m = sonc_min(motzkin());
  REQUIRE(m.circuit_minimizers.size() == 1);
  CHECK(m.circuit_minimizers[0][0] == doctest::Approx(1.0));
  CHECK(m.circuit_minimizers[0][1] == doctest::Approx(1.0));
  CHECK(m.value == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(m.candidate[0] == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(m.candidate[1] == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("sonc_min: quartic finds the paper-grade minimum") {
  MinimaResult m = sonc_min(ex31());
  CHECK(m.value == doctest::Approx(0.682).epsilon(1e-3));
  // the relaxation descent first reaches the relaxed minimum 0 at x=1
  CHECK(m.relaxed_value == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(m.relaxed_candidate[0] == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("sonc_min: pure squares fall back to multistart") {
  Polynomial p = parse_polynomial("x0^2 + x1^2 + 5");
  MinimaResult m = sonc_min(p);
  CHECK(m.circuit_minimizers.empty());
  CHECK(m.value == doctest::Approx(5.0).epsilon(1e-8));
  CHECK(std::abs(m.candidate[0]) <= 1e-4);
  CHECK(std::abs(m.candidate[1]) <= 1e-4);
}

TEST_CASE("sonc_min_signed: quartic on both half-lines") {
  Polynomial p = ex31();
  SignVector plus(1);
  plus[0] = 1;
  MinimaResult mp = sonc_min_signed(p, plus);
  CHECK(mp.value == doctest::Approx(0.682).epsilon(1e-3));
  CHECK(mp.candidate[0] >= 0.0);

  // oracle: on (-inf, 0] the infimum is 1, attained at the boundary 0
  SignVector minus(1);
  minus[0] = -1;
  double scan = kInf;
  for (int k = 0; k <= 4000; ++k)
    scan = std::min(scan, p.evaluate(std::vector<double>{-3.0 * k / 4000}));
  CHECK(scan == doctest::Approx(1.0));
  MinimaResult mm = sonc_min_signed(p, minus);
  CHECK(mm.value == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(mm.candidate[0] == doctest::Approx(0.0));
}

TEST_CASE("sonc_min_signed: even polynomials are mirror symmetric") {
  Polynomial p = motzkin();
  SignVector neg(2);
  neg[0] = neg[1] = -1;
  MinimaResult m = sonc_min_signed(p, neg);
  MinimaResult base = sonc_min(p);
  CHECK(m.value == doctest::Approx(base.value).epsilon(1e-9).scale(1.0));
}

TEST_CASE("sign-flip equivariance") {
  Polynomial p = parse_polynomial("x0^4 + x0^3 - x0 + 1");
  // q(x) = p(-x)
  Polynomial q = parse_polynomial("x0^4 - x0^3 + x0 + 1");
  SignVector plus(1), minus(1);
  plus[0] = 1;
  minus[0] = -1;
  MinimaResult a = sonc_min_signed(p, plus);
  MinimaResult b = sonc_min_signed(q, minus);
  CHECK(a.value == doctest::Approx(b.value).epsilon(1e-9).scale(1.0));
}

TEST_CASE("heuristic value sits above every certified bound") {
  Polynomial ps[] = {ex31(), motzkin(),
                     parse_polynomial("x0^2*x1^2 - 3*x0*x1 + 2")};
  for (const Polynomial& p : ps) {
    MinimaResult m = sonc_min(p);
    BoundResult s = sonc_bound(p);
    if (s.solver_status == SolveStatus::optimal)
      CHECK(m.value >= s.lower_bound - 1e-6);
    BoundResult g = sage_bound(p);
    if (g.solver_status == SolveStatus::optimal)
      CHECK(m.value >= g.lower_bound - 1e-6);
  }
}

TEST_SUITE_END();
