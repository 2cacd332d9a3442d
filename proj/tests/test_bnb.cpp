#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "sonc/bnb.hpp"

using namespace sonc;

namespace {

Polynomial ex31() { return parse_polynomial("x0^4 + x0^3 - x0 + 1"); }

Polynomial ex41() {
  return parse_polynomial(
      "2.723 + 3.932*x2^8 + 6.054*x1^2 + 1.963*x1^4*x2^2"
      " - 1.204*x0*x1*x2^3 + 1.462*x0*x1^2*x2 + 1.766*x0*x1^2*x2^2"
      " + 0.841*x0*x1^2*x2^4 - 0.329*x0^2*x1*x2^2 + 7.57*x0^2*x1^2*x2^4"
      " + 2.428*x0^4*x2^2");
}

double min_leaf_bound(const BnbResult& r) {
  double m = kInf;
  for (const auto& node : r.tree)
    if (node.is_leaf()) m = std::min(m, node.lower_bound);
  return m;
}

}  // namespace

TEST_SUITE_BEGIN("bnb");

TEST_CASE("cut rule: the three spec cases") {
  // worst node already matches the incumbent up to eps
  CHECK(cut_criteria(5.0, false, false, BnbStrategy::worst_first, 4.9, 0.2,
                     kInf) == CutDecision::stop_gap_closed);
  // a full-sign leaf at 1.0 cuts a node at 2.0
  CHECK(cut_criteria(2.0, false, false, BnbStrategy::worst_first, 10.0, 1e-9,
                     1.0) == CutDecision::cut);
  // -inf is the worst bound and is never cut
  CHECK(cut_criteria(-kInf, false, false, BnbStrategy::worst_first, 4.9, 0.2,
                     kInf) == CutDecision::proceed);
  // under dfs the eps test prunes instead of stopping everything
  CHECK(cut_criteria(5.0, false, false, BnbStrategy::dfs, 4.9, 0.2, kInf) ==
        CutDecision::cut);
  // a full-sign selection under worst_first ends the search
  CHECK(cut_criteria(0.5, true, false, BnbStrategy::worst_first, 4.9, 0.2,
                     kInf) == CutDecision::stop_leaf);
  // a pending SAGE pass shields the node from everything but the eps stop
  CHECK(cut_criteria(0.5, true, true, BnbStrategy::worst_first, 4.9, 0.2,
                     kInf) == CutDecision::proceed);
}

TEST_CASE("sum of squares closes at the root") {
  Polynomial p = parse_polynomial("x0^2 + x1^2 + 2.5");
  BnbResult r = branch_and_bound(p);
  CHECK(r.stop_reason == StopReason::gap_closed);
  CHECK(r.nodes_expanded == 1);
  CHECK(r.lower_bound == doctest::Approx(2.5));
  CHECK(r.best_value <= 2.5 + kDefaultTol);
}

TEST_CASE("quartic: branching recovers the true minimum") {
  BnbOptions opt;
  opt.eps = 1e-3;
  opt.record_trace = true;
  BnbResult r = branch_and_bound(ex31(), opt);
  auto [xstar, vstar] = testing::grid_min_1d(ex31(), -3.0, 3.0);
  CHECK(vstar == doctest::Approx(0.682).epsilon(1e-3));
  CHECK(r.lower_bound >= vstar - 1e-3);
  CHECK(r.lower_bound <= vstar + 1e-6);
  CHECK(r.best_value == doctest::Approx(vstar).epsilon(1e-6));

  // every iteration: reported bound == min over current leaf bounds
  for (const auto& entry : r.trace) {
    double m = kInf;
    for (double b : entry.leaf_bounds) m = std::min(m, b);
    CHECK(entry.tree_bound == m);  // exact float equality
  }
  CHECK(r.lower_bound == min_leaf_bound(r));

  // children never fall below their parent
  for (std::size_t id = 0; id < r.tree.size(); ++id)
    for (int child : r.tree[id].children)
      CHECK(r.tree[child].lower_bound >=
            r.tree[id].lower_bound - 1e-9);
}

TEST_CASE("sage deferral: root selected twice, branched once") {
  BnbOptions opt;
  opt.record_trace = true;
  opt.eps = 1e-12;  // don't close at the root
  BnbResult r = branch_and_bound(ex31(), opt);
  REQUIRE(r.trace.size() >= 2);
  CHECK(r.trace[0].selected == 0);
  CHECK(r.trace[1].selected == 0);
  REQUIRE(!r.tree.empty());
  CHECK(r.tree[0].sage_done);
  CHECK(r.tree[0].children.size() == 2);
}

TEST_CASE("sparse tree leaves are exactly the minimal orthants") {
  BnbOptions opt;
  opt.sparse = true;
  opt.exhaustive = true;
  opt.use_sage = false;
  BnbResult r = branch_and_bound(ex41(), opt);
  std::set<std::vector<int>> leaves;
  for (const auto& node : r.tree) {
    if (!node.is_leaf()) continue;
    CHECK(node.sign.full());
    std::vector<int> o;
    for (int i = 0; i < node.sign.size(); ++i) o.push_back(node.sign[i]);
    leaves.insert(o);
  }
  std::set<std::vector<int>> want;
  for (const auto& [eff, sv] : minimal_orthants(ex41())) {
    std::vector<int> o;
    for (int i = 0; i < sv.size(); ++i) o.push_back(sv[i]);
    want.insert(o);
  }
  CHECK(leaves == want);
  CHECK(leaves.size() == 3);
}

TEST_CASE("sparse and standard agree when both exhaust without failures") {
  for (const Polynomial& p :
       {ex31(), ex41(), parse_polynomial("x0^2*x1^2 - 3*x0*x1 + 2")}) {
    BnbOptions opt;
    opt.exhaustive = true;
    opt.use_sage = true;
    opt.sage_deferral = false;
    BnbResult standard = branch_and_bound(p, opt);
    opt.sparse = true;
    BnbResult sparse = branch_and_bound(p, opt);
    if (standard.solver_failure || sparse.solver_failure) continue;
    REQUIRE(standard.stop_reason == StopReason::tree_exhausted);
    REQUIRE(sparse.stop_reason == StopReason::tree_exhausted);
    CHECK(std::abs(standard.lower_bound - sparse.lower_bound) <= 1e-4);
  }
}

TEST_CASE("bound dominates the one-shot SONC bound") {
  Polynomial p = ex31();
  BnbResult r = branch_and_bound(p);
  BoundResult s = sonc_bound(p);
  REQUIRE(s.solver_status == SolveStatus::optimal);
  CHECK(r.lower_bound >= s.lower_bound - 1e-6);
}

TEST_CASE("dfs stays sound and terminates") {
  BnbOptions opt;
  opt.strategy = BnbStrategy::dfs;
  BnbResult r = branch_and_bound(ex31(), opt);
  auto [xstar, vstar] = testing::grid_min_1d(ex31(), -3.0, 3.0);
  CHECK(r.lower_bound <= vstar + 1e-6);
  CHECK(r.best_value >= r.lower_bound - 1e-9);
}

TEST_CASE("node budget is honored and reported") {
  BnbOptions opt;
  opt.node_budget = 1;
  opt.eps = 1e-15;
  BnbResult r = branch_and_bound(ex41(), opt);
  CHECK(r.stop_reason == StopReason::node_budget);
  CHECK(r.nodes_expanded <= 1);
}

TEST_SUITE_END();
