#pragma once

#include <string>
#include <vector>

#include "sonc/bounds.hpp"
#include "sonc/minima.hpp"
#include "sonc/orthants.hpp"

namespace sonc {

enum class BnbStrategy { worst_first, dfs };

enum class StopReason {
  gap_closed,
  leaf_criterion,
  tree_exhausted,
  node_budget,
  timeout
};

std::string to_string(StopReason r);

struct BnbOptions {
  BnbStrategy strategy = BnbStrategy::worst_first;
  bool sparse = false;
  bool use_sage = true;
  /// Compute a node's SAGE bound on its first selection instead of at
  /// creation; the node goes back to the active set and only branches on
  /// its second selection.
  bool sage_deferral = true;
  /// Disable the early stops and cut criteria: expand the whole tree.
  bool exhaustive = false;
  double eps = kDefaultTol;
  /// Selection budget; 0 picks the default 4 * 2^n.
  long node_budget = 0;
  CoveringStrategy covering = CoveringStrategy::simple;
  double tol = kDefaultTol;
  bool record_trace = false;
  Deadline deadline;
};

struct BnbNodeView {
  SignVector sign;
  double lower_bound = -kInf;
  double best_value = kInf;
  bool active = false;
  bool sage_done = false;
  int parent = -1;
  std::vector<int> children;
  bool is_leaf() const { return children.empty(); }
};

struct BnbTraceEntry {
  int selected = -1;
  double tree_bound = -kInf;         // reported bound at this iteration
  std::vector<double> leaf_bounds;   // bounds of the current leaves
};

struct BnbResult {
  double lower_bound = -kInf;  // min over leaf bounds of the final tree
  double best_value = kInf;
  std::vector<double> minimizer;
  long nodes_expanded = 0;  // selections processed
  bool leaf_reached = false;
  bool solver_failure = false;  // some node's bound solve was not optimal
  StopReason stop_reason = StopReason::tree_exhausted;
  std::vector<BnbNodeView> tree;
  std::vector<BnbTraceEntry> trace;
};

/// Branch-and-bound over variable signs. Nodes carry sign-cone relaxation
/// bounds (SONC, optionally improved by SAGE) and heuristic minima; children
/// inherit their parent's certificate, so bounds never degrade down a path,
/// and the reported bound is always the minimum over current leaf bounds.
/// sparse mode precomputes the minimal orthants, branches variables in index
/// order, and descends through single-child prefixes without solving them.
BnbResult branch_and_bound(const Polynomial& p, const BnbOptions& opt = {});

enum class CutDecision { proceed, cut, stop_gap_closed, stop_leaf };

/// Pure cut rule for one selected node. The eps-relaxed incumbent test cuts
/// (or, under worst_first, stops the whole search: the worst node already
/// matches the incumbent). A node with its SAGE pass still pending survives
/// the remaining rules, so the deferred bound can improve it first. After
/// that, a full-sign node cannot improve and stops the search under
/// worst_first, and a known full-sign leaf with a bound at or below the
/// node's cuts it.
CutDecision cut_criteria(double node_bound, bool node_full_sign,
                         bool sage_pending, BnbStrategy strategy,
                         double best_value, double eps,
                         double min_full_leaf_bound);

}  // namespace sonc
