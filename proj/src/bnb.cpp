#include "sonc/bnb.hpp"

#include <algorithm>
#include <cmath>

namespace sonc {

std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::gap_closed: return "gap_closed";
    case StopReason::leaf_criterion: return "leaf_criterion";
    case StopReason::tree_exhausted: return "tree_exhausted";
    case StopReason::node_budget: return "node_budget";
    case StopReason::timeout: return "timeout";
  }
  return "unknown";
}

CutDecision cut_criteria(double node_bound, bool node_full_sign,
                         bool sage_pending, BnbStrategy strategy,
                         double best_value, double eps,
                         double min_full_leaf_bound) {
  if (node_bound >= best_value - eps) {
    return strategy == BnbStrategy::worst_first ? CutDecision::stop_gap_closed
                                                : CutDecision::cut;
  }
  if (sage_pending) return CutDecision::proceed;
  if (node_full_sign) {
    return strategy == BnbStrategy::worst_first ? CutDecision::stop_leaf
                                                : CutDecision::cut;
  }
  if (min_full_leaf_bound <= node_bound) return CutDecision::cut;
  return CutDecision::proceed;
}

namespace {

struct Node {
  SignVector sign;
  double lower_bound = -kInf;
  double best_value = kInf;
  bool active = false;
  bool sage_done = false;
  int parent = -1;
  std::vector<int> children;
  long created = 0;
};

struct Search {
  const Polynomial& p;
  const BnbOptions& opt;
  std::vector<Node> nodes;
  std::vector<int> full_sign_nodes;
  std::vector<double> odd_mass;  // branch-variable weights
  std::vector<SignVector> orthants;  // sparse leaf set
  BnbResult result;
  long created_counter = 0;

  explicit Search(const Polynomial& poly, const BnbOptions& options)
      : p(poly), opt(options) {
    const int n = p.var_count();
    odd_mass.assign(n, 0.0);
    for (int j = 0; j < p.term_count(); ++j)
      for (int i = 0; i < n; ++i)
        if (p.exponent(j)[i] % 2 != 0) odd_mass[i] += std::abs(p.coeff(j));
  }

  // Undetermined variable carrying the most coefficient mass on odd
  // exponents; fixing it reclassifies the most weight.
  int pick_branch_var(const SignVector& s) const {
    int best = -1;
    for (int i = 0; i < s.size(); ++i) {
      if (s[i] != 0) continue;
      if (best < 0 || odd_mass[i] > odd_mass[best]) best = i;
    }
    return best;
  }

  bool orthant_matches(const SignVector& o, const SignVector& prefix) const {
    for (int i = 0; i < prefix.size(); ++i)
      if (prefix[i] != 0 && o[i] != prefix[i]) return false;
    return true;
  }

  // Sparse mode: extend the prefix in index order while only one side keeps
  // any minimal orthant; the skipped single-child prefixes are never solved.
  SignVector descend(SignVector s) const {
    for (;;) {
      int k = -1;
      for (int i = 0; i < s.size(); ++i) {
        if (s[i] == 0) {
          k = i;
          break;
        }
      }
      if (k < 0) return s;
      int plus = 0, minus = 0;
      SignVector probe = s;
      probe[k] = 1;
      for (const auto& o : orthants) plus += orthant_matches(o, probe);
      probe[k] = -1;
      for (const auto& o : orthants) minus += orthant_matches(o, probe);
      if (plus > 0 && minus > 0) return s;
      s[k] = plus > 0 ? 1 : -1;
    }
  }

  double solve_bound(const SignVector& s, bool with_sage) {
    Polynomial q = relax_signed(p, s);
    BoundResult r = sonc_bound_relaxed(q, opt.covering, opt.tol, opt.deadline);
    double bound = -kInf;
    if (r.solver_status == SolveStatus::optimal)
      bound = r.lower_bound;
    else
      result.solver_failure = true;
    if (with_sage) {
      BoundResult r2 = sage_bound_relaxed(q, opt.tol, opt.deadline);
      if (r2.solver_status == SolveStatus::optimal)
        bound = std::max(bound, r2.lower_bound);
      else
        result.solver_failure = true;
    }
    return bound;
  }

  void run_minima(int id) {
    Node& node = nodes[id];
    MinimaResult m = node.sign.fixed_count() == 0
                         ? sonc_min(p, opt.covering)
                         : sonc_min_signed(p, node.sign, opt.covering);
    node.best_value = m.value;
    if (m.value < result.best_value) {
      result.best_value = m.value;
      result.minimizer = m.candidate;
    }
  }

  int make_node(SignVector s, int parent) {
    if (opt.sparse) s = descend(std::move(s));
    Node node;
    node.sign = std::move(s);
    node.parent = parent;
    node.created = created_counter++;
    bool sage_now = opt.use_sage && !opt.sage_deferral;
    node.lower_bound = solve_bound(node.sign, sage_now);
    node.sage_done = !opt.use_sage || sage_now;
    if (parent >= 0)
      node.lower_bound = std::max(node.lower_bound,
                                  nodes[parent].lower_bound);
    node.active = true;
    nodes.push_back(std::move(node));
    int id = static_cast<int>(nodes.size()) - 1;
    if (parent >= 0) nodes[parent].children.push_back(id);
    run_minima(id);
    if (nodes[id].sign.full()) {
      full_sign_nodes.push_back(id);
      result.leaf_reached = true;
    }
    return id;
  }

  // Lemma-style upward pass: a parent may adopt the minimum of its
  // children's bounds; stored bounds never weaken.
  void propagate_up(int id) {
    for (int cur = id; cur >= 0; cur = nodes[cur].parent) {
      if (nodes[cur].children.empty()) continue;
      double child_min = kInf;
      for (int c : nodes[cur].children)
        child_min = std::min(child_min, nodes[c].lower_bound);
      nodes[cur].lower_bound = std::max(nodes[cur].lower_bound, child_min);
    }
  }

  double min_full_leaf_bound() const {
    double m = kInf;
    for (int id : full_sign_nodes) m = std::min(m, nodes[id].lower_bound);
    return m;
  }

  double tree_bound(std::vector<double>* leaf_bounds = nullptr) const {
    double m = kInf;
    for (const auto& node : nodes) {
      if (!node.children.empty()) continue;
      if (leaf_bounds) leaf_bounds->push_back(node.lower_bound);
      m = std::min(m, node.lower_bound);
    }
    return m;
  }

  int select() const {
    int pick = -1;
    if (opt.strategy == BnbStrategy::dfs) {
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (!nodes[i].active) continue;
        if (pick < 0 || nodes[i].created > nodes[pick].created)
          pick = static_cast<int>(i);
      }
      return pick;
    }
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const Node& node = nodes[i];
      if (!node.active) continue;
      if (pick < 0) {
        pick = static_cast<int>(i);
        continue;
      }
      const Node& cur = nodes[pick];
      if (node.lower_bound < cur.lower_bound ||
          (node.lower_bound == cur.lower_bound &&
           (node.sign.fixed_count() < cur.sign.fixed_count() ||
            (node.sign.fixed_count() == cur.sign.fixed_count() &&
             node.created < cur.created))))
        pick = static_cast<int>(i);
    }
    return pick;
  }

  void record_trace(int selected) {
    if (!opt.record_trace) return;
    BnbTraceEntry entry;
    entry.selected = selected;
    entry.tree_bound = tree_bound(&entry.leaf_bounds);
    result.trace.push_back(entry);
  }

  void snapshot() {
    result.tree.clear();
    for (const auto& node : nodes) {
      BnbNodeView view;
      view.sign = node.sign;
      view.lower_bound = node.lower_bound;
      view.best_value = node.best_value;
      view.active = node.active;
      view.sage_done = node.sage_done;
      view.parent = node.parent;
      view.children = node.children;
      result.tree.push_back(std::move(view));
    }
  }

  BnbResult run() {
    const int n = p.var_count();
    if (opt.sparse) {
      for (auto& [eff, sv] : minimal_orthants(p)) orthants.push_back(sv);
    }
    long budget = opt.node_budget > 0 ? opt.node_budget
                                      : 4L * (1L << std::min(n, 30));
    make_node(SignVector::zero(n), -1);

    for (;;) {
      if (opt.deadline.expired()) {
        result.stop_reason = StopReason::timeout;
        break;
      }
      int id = select();
      if (id < 0) {
        result.stop_reason = StopReason::tree_exhausted;
        break;
      }
      if (result.nodes_expanded >= budget) {
        result.stop_reason = StopReason::node_budget;
        break;
      }
      ++result.nodes_expanded;
      record_trace(id);
      nodes[id].active = false;

      bool sage_pending =
          opt.use_sage && opt.sage_deferral && !nodes[id].sage_done;
      if (!opt.exhaustive) {
        CutDecision decision = cut_criteria(
            nodes[id].lower_bound, nodes[id].sign.full(), sage_pending,
            opt.strategy, result.best_value, opt.eps, min_full_leaf_bound());
        if (decision == CutDecision::stop_gap_closed) {
          result.stop_reason = StopReason::gap_closed;
          break;
        }
        if (decision == CutDecision::stop_leaf) {
          result.stop_reason = StopReason::leaf_criterion;
          break;
        }
        if (decision == CutDecision::cut) continue;
      }

      if (sage_pending) {
        // first selection: improve by SAGE and return to the active set
        Polynomial q = relax_signed(p, nodes[id].sign);
        BoundResult r = sage_bound_relaxed(q, opt.tol, opt.deadline);
        if (r.solver_status == SolveStatus::optimal)
          nodes[id].lower_bound =
              std::max(nodes[id].lower_bound, r.lower_bound);
        else
          result.solver_failure = true;
        nodes[id].sage_done = true;
        nodes[id].active = true;
        propagate_up(nodes[id].parent);
        continue;
      }

      if (nodes[id].sign.full()) continue;  // nothing left to branch

      SignVector base = nodes[id].sign;
      int var = -1;
      if (opt.sparse) {
        // sparse trees branch the variables in index order
        for (int i = 0; i < base.size(); ++i) {
          if (base[i] == 0) {
            var = i;
            break;
          }
        }
      } else {
        var = pick_branch_var(base);
      }
      if (var < 0) continue;
      SignVector plus = base, minus = base;
      plus[var] = 1;
      minus[var] = -1;
      make_node(plus, id);
      make_node(minus, id);
      propagate_up(id);
    }

    result.lower_bound = tree_bound();
    snapshot();
    return result;
  }
};

}  // namespace

BnbResult branch_and_bound(const Polynomial& p, const BnbOptions& opt) {
  Search search(p, opt);
  return search.run();
}

}  // namespace sonc
