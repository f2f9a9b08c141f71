#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "potflow/cuts.hpp"
#include "potflow/flow.hpp"
#include "potflow/instance.hpp"
#include "potflow/lp.hpp"
#include "potflow/separation.hpp"

namespace potflow {

enum class SolveStatus { Optimal, Infeasible, LimitReached };

struct SolverConfig {
  bool cuts_enabled = true;
  int k_max = 0;    // 0: up to |V| - 1
  int fixed_k = 0;  // 0: search all chain lengths
  double cut_tolerance = 1e-6;
  long node_limit = 0;      // 0: none
  double time_limit = 0.0;  // seconds; 0: none
  int max_separation_rounds = 50;  // cut rounds per node
  int threads = 1;
  bool strengthen_no_goods = true;  // only used on monotone instances
  std::ostream* log = nullptr;
};

struct SolveStats {
  long nodes = 0;  // nodes processed beyond the root
  long lp_solves = 0;
  long separation_calls = 0;
  long cuts_added = 0;
  long no_goods_added = 0;
  long feasibility_checks = 0;
  double time_seconds = 0.0;
};

struct SolveOutcome {
  SolveStatus status = SolveStatus::Infeasible;
  bool has_incumbent = false;
  std::vector<double> best_x;
  double best_cost = std::numeric_limits<double>::infinity();
  double dual_bound = -std::numeric_limits<double>::infinity();
  SolveStats stats;
  std::vector<ValidInequality> cut_pool;

  // Relative optimality gap; zero when proven optimal, infinity with no
  // incumbent.
  double gap() const {
    if (!has_incumbent) return std::numeric_limits<double>::infinity();
    if (!(dual_bound > -std::numeric_limits<double>::infinity()))
      return std::numeric_limits<double>::infinity();
    return (best_cost - dual_bound) / std::max(1e-9, std::abs(best_cost));
  }
};

// Exhaustive reference solver: tries every 0/1 design, cheapest first kept.
// Exact companion for the branch-and-cut solver on instances with at most 20
// candidate arcs.
inline SolveOutcome solve_bruteforce(const Instance& inst) {
  const int m = inst.network.graph.num_arcs();
  if (m > 20) throw Error("solve_bruteforce: more than 20 candidate arcs");
  const auto start = std::chrono::steady_clock::now();

  SolveOutcome out;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    double cost = 0.0;
    for (int a = 0; a < m; ++a)
      if (mask & (1u << a)) cost += inst.cost[static_cast<std::size_t>(a)];
    if (cost >= out.best_cost) continue;
    std::vector<double> x(static_cast<std::size_t>(m), 0.0);
    for (int a = 0; a < m; ++a)
      if (mask & (1u << a)) x[static_cast<std::size_t>(a)] = 1.0;
    ++out.stats.feasibility_checks;
    if (!check_feasibility(inst, x).feasible) continue;
    out.best_cost = cost;
    out.best_x = std::move(x);
    out.has_incumbent = true;
  }
  out.status = out.has_incumbent ? SolveStatus::Optimal : SolveStatus::Infeasible;
  if (out.has_incumbent) out.dual_bound = out.best_cost;
  out.stats.time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

namespace detail {

// Feasibility is monotone in the design exactly when one entry serves one
// exit under a uniform potential window: building more can only lower the
// effective resistance and thus the required spread.  With several terminals
// or individual windows an extra arc can reroute flow and raise the spread.
inline bool monotone_feasibility(const Instance& inst) {
  return inst.entries.size() == 1 && inst.exits.size() == 1 && !inst.has_individual_bounds();
}

struct NoGoodRow {
  std::vector<std::pair<int, double>> terms;
  double rhs = 1.0;
};

struct BranchNode {
  std::vector<std::int8_t> fixed;  // -1 free, 0 or 1 fixed
  double bound = -std::numeric_limits<double>::infinity();
  long id = 0;
};

struct NodeOrder {
  bool operator()(const BranchNode& a, const BranchNode& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;  // min-bound first
    return a.id > b.id;                                // then FIFO
  }
};

}  // namespace detail

// Cutting-plane branch-and-bound for minimum-cost feasible designs.
//
// Each node relaxes the binary design to [0,1] under the node's fixings plus
// a global pool of disjoint-cut inequalities and no-good rows.  Integral LP
// optima are checked against the exact potential-flow physics; infeasible
// ones are cut off by separation when possible and by no-goods otherwise.
// Fractional optima are separated, then branched on the most fractional
// variable (ties: larger cost, then smaller index).  Nodes are processed
// best-bound first.
inline SolveOutcome solve_branch_and_cut(const Instance& inst, const SolverConfig& cfg = {}) {
  const int m = inst.network.graph.num_arcs();
  const auto start = std::chrono::steady_clock::now();
  const auto elapsed = [&start]() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  SolveOutcome out;
  std::set<std::string> pool_keys;
  std::vector<detail::NoGoodRow> no_goods;
  const bool monotone = detail::monotone_feasibility(inst);

  SeparationOptions sep_opt;
  sep_opt.k_max = cfg.k_max;
  sep_opt.fixed_k = cfg.fixed_k;
  sep_opt.tolerance = cfg.cut_tolerance;
  sep_opt.threads = cfg.threads;

  const auto solve_node_lp = [&](const std::vector<std::int8_t>& fixed) {
    LinearProgram lp;
    for (int a = 0; a < m; ++a) {
      const double lo = fixed[static_cast<std::size_t>(a)] == 1 ? 1.0 : 0.0;
      const double hi = fixed[static_cast<std::size_t>(a)] == 0 ? 0.0 : 1.0;
      lp.add_variable(lo, hi, inst.cost[static_cast<std::size_t>(a)]);
    }
    for (const ValidInequality& cut : out.cut_pool) {
      std::vector<std::pair<int, double>> terms;
      for (int a = 0; a < m; ++a)
        if (cut.coeff[static_cast<std::size_t>(a)] != 0.0)
          terms.push_back({a, cut.coeff[static_cast<std::size_t>(a)]});
      lp.add_constraint(std::move(terms), Relation::GreaterEq, cut.rhs);
    }
    for (const detail::NoGoodRow& row : no_goods)
      lp.add_constraint(row.terms, Relation::GreaterEq, row.rhs);
    ++out.stats.lp_solves;
    return solve_lp(lp);
  };

  const auto check_binary = [&](const std::vector<double>& x) {
    ++out.stats.feasibility_checks;
    return check_feasibility(inst, x).feasible;
  };

  // Exclude an infeasible binary point.  On monotone instances the whole
  // down-set of its support is infeasible too, so the row only charges arcs
  // outside the (optionally maximized) support; otherwise only the exact
  // point is excluded.
  const auto add_no_good = [&](const std::vector<double>& x01) {
    detail::NoGoodRow row;
    if (monotone) {
      std::vector<bool> support(static_cast<std::size_t>(m));
      for (int a = 0; a < m; ++a) support[static_cast<std::size_t>(a)] = x01[static_cast<std::size_t>(a)] > 0.5;
      if (cfg.strengthen_no_goods) {
        std::vector<double> probe = x01;
        for (int a = 0; a < m; ++a) {
          if (support[static_cast<std::size_t>(a)]) continue;
          probe[static_cast<std::size_t>(a)] = 1.0;
          if (check_binary(probe)) {
            probe[static_cast<std::size_t>(a)] = 0.0;
          } else {
            support[static_cast<std::size_t>(a)] = true;  // still infeasible: grow
          }
        }
      }
      for (int a = 0; a < m; ++a)
        if (!support[static_cast<std::size_t>(a)]) row.terms.push_back({a, 1.0});
    } else {
      // Exact point exclusion: sum over zero-arcs of y + sum over one-arcs
      // of (1 - y) >= 1, i.e. terms . y >= 1 - (number of one-arcs).
      double ones = 0.0;
      for (int a = 0; a < m; ++a) {
        if (x01[static_cast<std::size_t>(a)] > 0.5) {
          row.terms.push_back({a, -1.0});
          ones += 1.0;
        } else {
          row.terms.push_back({a, 1.0});
        }
      }
      row.rhs = 1.0 - ones;
    }
    no_goods.push_back(std::move(row));
    ++out.stats.no_goods_added;
  };

  const auto add_cuts = [&](const std::vector<ValidInequality>& cuts) {
    long added = 0;
    for (const ValidInequality& cut : cuts) {
      if (pool_keys.insert(normalized_cut_key(cut)).second) {
        out.cut_pool.push_back(cut);
        ++added;
      }
    }
    out.stats.cuts_added += added;
    return added;
  };

  std::priority_queue<detail::BranchNode, std::vector<detail::BranchNode>, detail::NodeOrder> open;
  long next_id = 0;
  open.push({std::vector<std::int8_t>(static_cast<std::size_t>(m), -1),
             -std::numeric_limits<double>::infinity(), next_id++});

  long pops = 0;
  bool limit_hit = false;

  while (!open.empty()) {
    if (cfg.time_limit > 0.0 && elapsed() > cfg.time_limit) {
      limit_hit = true;
      break;
    }
    if (cfg.node_limit > 0 && pops - 1 >= cfg.node_limit) {
      limit_hit = true;
      break;
    }
    detail::BranchNode node = open.top();
    open.pop();
    ++pops;
    if (out.has_incumbent && node.bound >= out.best_cost - 1e-9 * std::max(1.0, std::abs(out.best_cost)))
      continue;  // cannot improve

    int cut_rounds = 0;
    long guard = 0;
    while (true) {
      if (++guard > 100000)
        throw NumericalError("branch and cut: node refinement failed to converge");
      if (cfg.time_limit > 0.0 && elapsed() > cfg.time_limit) {
        open.push(node);  // keep the node open so the dual bound stays honest
        limit_hit = true;
        break;
      }
      const LpSolution sol = solve_node_lp(node.fixed);
      if (sol.status == LpStatus::Infeasible) break;
      if (sol.status != LpStatus::Optimal)
        throw NumericalError("branch and cut: unexpected LP status at node");
      node.bound = sol.objective;
      if (out.has_incumbent &&
          sol.objective >= out.best_cost - 1e-9 * std::max(1.0, std::abs(out.best_cost)))
        break;  // bound prune

      int branch_var = -1;
      double best_score = 1e-6;  // integrality tolerance
      for (int a = 0; a < m; ++a) {
        const double xa = sol.primal[static_cast<std::size_t>(a)];
        const double score = std::min(xa, 1.0 - xa);
        const bool better =
            score > best_score + 1e-12 ||
            (score > best_score - 1e-12 && branch_var >= 0 &&
             (inst.cost[static_cast<std::size_t>(a)] > inst.cost[static_cast<std::size_t>(branch_var)]));
        if (better) {
          best_score = score;
          branch_var = a;
        }
      }

      if (branch_var < 0) {
        // Integral point: test the exact physics.
        std::vector<double> x01(static_cast<std::size_t>(m));
        for (int a = 0; a < m; ++a)
          x01[static_cast<std::size_t>(a)] = sol.primal[static_cast<std::size_t>(a)] > 0.5 ? 1.0 : 0.0;
        if (check_binary(x01)) {
          // Soundness: a physically feasible design satisfies every cut.
          for (const ValidInequality& cut : out.cut_pool)
            if (evaluate_violation(cut, x01) < -1e-6)
              throw NumericalError("branch and cut: feasible design violates a pooled cut");
          double cost = 0.0;
          for (int a = 0; a < m; ++a)
            if (x01[static_cast<std::size_t>(a)] > 0.5) cost += inst.cost[static_cast<std::size_t>(a)];
          if (!out.has_incumbent || cost < out.best_cost) {
            out.best_cost = cost;
            out.best_x = x01;
            out.has_incumbent = true;
            if (cfg.log)
              (*cfg.log) << "incumbent cost " << cost << " after " << pops << " nodes\n";
          }
          break;
        }
        // Infeasible integral point: cut it off.
        long added = 0;
        if (cfg.cuts_enabled && cut_rounds < cfg.max_separation_rounds) {
          ++cut_rounds;
          ++out.stats.separation_calls;
          const SeparationResult sep = separate(inst, x01, sep_opt);
          if (sep.violated) added = add_cuts(sep.violated_cuts);
        }
        if (added == 0) add_no_good(x01);
        continue;
      }

      // Fractional: try cuts first, then branch.
      if (cfg.cuts_enabled && cut_rounds < cfg.max_separation_rounds) {
        ++cut_rounds;
        ++out.stats.separation_calls;
        const SeparationResult sep = separate(inst, sol.primal, sep_opt);
        if (sep.violated && add_cuts(sep.violated_cuts) > 0) continue;
      }
      detail::BranchNode down = node;
      down.fixed[static_cast<std::size_t>(branch_var)] = 0;
      down.id = next_id++;
      detail::BranchNode up = node;
      up.fixed[static_cast<std::size_t>(branch_var)] = 1;
      up.id = next_id++;
      open.push(std::move(down));
      open.push(std::move(up));
      break;
    }
    if (limit_hit) break;
  }

  out.stats.nodes = std::max(0L, pops - 1);
  out.stats.time_seconds = elapsed();
  if (limit_hit) {
    out.status = SolveStatus::LimitReached;
    double lb = out.has_incumbent ? out.best_cost : std::numeric_limits<double>::infinity();
    // The dual bound is the weakest bound still open.
    std::priority_queue<detail::BranchNode, std::vector<detail::BranchNode>, detail::NodeOrder>
        rest = std::move(open);
    bool any_open = false;
    double open_min = std::numeric_limits<double>::infinity();
    while (!rest.empty()) {
      open_min = std::min(open_min, rest.top().bound);
      any_open = true;
      rest.pop();
    }
    out.dual_bound = any_open ? open_min : lb;
    if (!any_open && out.has_incumbent) out.dual_bound = out.best_cost;
  } else if (out.has_incumbent) {
    out.status = SolveStatus::Optimal;
    out.dual_bound = out.best_cost;
  } else {
    out.status = SolveStatus::Infeasible;
    out.dual_bound = std::numeric_limits<double>::infinity();
  }
  if (cfg.log)
    (*cfg.log) << "status " << static_cast<int>(out.status) << " nodes " << out.stats.nodes
               << " cuts " << out.stats.cuts_added << " no-goods " << out.stats.no_goods_added
               << "\n";
  return out;
}

}  // namespace potflow
