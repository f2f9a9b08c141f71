#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <limits>
#include <string>
#include <vector>

#include "potflow/cuts.hpp"
#include "potflow/graph.hpp"
#include "potflow/instance.hpp"
#include "potflow/lp.hpp"

namespace potflow {

// Terminal-contracted graph used by the disjoint-cut subproblem: the entries
// of X merge into a source, the exits outside X into a sink, and parallel
// contracted arcs merge with summed weight.  Arcs with both endpoints on the
// same side disappear (they can never cross a separating cut); zero-weight
// arcs stay, because they still constrain how many disjoint cuts fit.
struct WeightedCutGraph {
  int num_nodes = 0;
  NodeId source = 0;
  NodeId sink = 1;
  std::vector<Arc> edges;        // contracted endpoints, orientation irrelevant
  std::vector<double> weight;    // merged weight per edge
  std::vector<NodeId> node_map;  // original node -> contracted node
};

inline WeightedCutGraph make_cut_graph(const Instance& inst, const NodeSet& x_set,
                                       const std::vector<double>& w) {
  const MultiGraph& g = inst.network.graph;
  const int n = g.num_nodes();
  if (w.size() != static_cast<std::size_t>(g.num_arcs()))
    throw Error("make_cut_graph: weight vector size mismatch");
  const NodeSet side_a = set_intersection(x_set, inst.entries);
  const NodeSet side_b = set_difference(inst.exits, x_set);
  if (side_a.empty() || side_b.empty())
    throw Error("make_cut_graph: degenerate terminal subset has no separating cuts");

  WeightedCutGraph out;
  out.node_map.assign(static_cast<std::size_t>(n), -1);
  for (NodeId v : side_a) out.node_map[static_cast<std::size_t>(v)] = 0;
  for (NodeId v : side_b) out.node_map[static_cast<std::size_t>(v)] = 1;
  int next = 2;
  for (NodeId v = 0; v < n; ++v)
    if (out.node_map[static_cast<std::size_t>(v)] < 0)
      out.node_map[static_cast<std::size_t>(v)] = next++;
  out.num_nodes = next;

  // Merge parallel contracted arcs: same unordered endpoint pair.
  std::vector<std::vector<std::pair<NodeId, int>>> seen(static_cast<std::size_t>(next));
  for (ArcId a = 0; a < g.num_arcs(); ++a) {
    NodeId u = out.node_map[static_cast<std::size_t>(g.arc(a).tail)];
    NodeId v = out.node_map[static_cast<std::size_t>(g.arc(a).head)];
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    int edge = -1;
    for (const auto& [other, idx] : seen[static_cast<std::size_t>(u)])
      if (other == v) {
        edge = idx;
        break;
      }
    if (edge < 0) {
      edge = static_cast<int>(out.edges.size());
      out.edges.push_back({u, v});
      out.weight.push_back(0.0);
      seen[static_cast<std::size_t>(u)].push_back({v, edge});
    }
    out.weight[static_cast<std::size_t>(edge)] += w[static_cast<std::size_t>(a)];
  }
  return out;
}

// Node-potential formulation of the minimum-weight k-disjoint-cut problem.
//
// Each node gets a level p in [0, k]; the source is fixed at k, the sink at 0,
// and the i-th cut is the level set {v : p_v >= k + 1 - i}, so the sets are
// nested by construction.  An edge crosses |p_u - p_v| of the cuts, and the
// disjointness requirement is exactly |p_u - p_v| <= 1.  To keep every
// constraint row a difference of two variables (which makes the matrix an
// arc-node incidence matrix, totally unimodular, hence integral vertices),
// each edge {u, u'} gets two auxiliary variables q1, q2 tied by
//   0 <= u - q1 <= 1,  0 <= u' - q1 <= 1,  0 <= u - q2 <= 1,  0 <= u' - q2 <= 1
// with objective weight w on (u - q1) and on (u' - q2).  At an optimum both
// auxiliaries rise to min(p_u, p_u'), so the edge contributes
// w * |p_u - p_u'|, and feasibility of the q rows enforces |p_u - p_u'| <= 1.
struct KCutLp {
  LinearProgram lp;
  std::vector<int> node_var;  // contracted node -> variable index
  int k = 0;
};

inline KCutLp build_k_cut_lp(const WeightedCutGraph& cg, int k) {
  if (k < 1) throw Error("build_k_cut_lp: k must be positive");
  const double inf = std::numeric_limits<double>::infinity();
  KCutLp out;
  out.k = k;
  out.lp.sense = LpSense::Minimize;
  out.node_var.reserve(static_cast<std::size_t>(cg.num_nodes));
  std::vector<double> obj;
  for (NodeId v = 0; v < cg.num_nodes; ++v) {
    double lo = -inf, hi = inf;
    if (v == cg.source) lo = hi = static_cast<double>(k);
    if (v == cg.sink) lo = hi = 0.0;
    out.node_var.push_back(out.lp.add_variable(lo, hi, 0.0, "p" + std::to_string(v)));
    obj.push_back(0.0);
  }
  for (std::size_t e = 0; e < cg.edges.size(); ++e) {
    const int u = out.node_var[static_cast<std::size_t>(cg.edges[e].tail)];
    const int v = out.node_var[static_cast<std::size_t>(cg.edges[e].head)];
    const double w = cg.weight[e];
    const int q1 = out.lp.add_variable(-inf, inf, 0.0, "q" + std::to_string(e) + "a");
    const int q2 = out.lp.add_variable(-inf, inf, 0.0, "q" + std::to_string(e) + "b");
    obj.resize(static_cast<std::size_t>(q2) + 1, 0.0);
    obj[static_cast<std::size_t>(u)] += w;
    obj[static_cast<std::size_t>(q1)] -= w;
    obj[static_cast<std::size_t>(v)] += w;
    obj[static_cast<std::size_t>(q2)] -= w;
    const auto range_row = [&out](int hi_var, int lo_var) {
      out.lp.add_constraint({{hi_var, 1.0}, {lo_var, -1.0}}, Relation::GreaterEq, 0.0);
      out.lp.add_constraint({{hi_var, 1.0}, {lo_var, -1.0}}, Relation::LessEq, 1.0);
    };
    range_row(u, q1);
    range_row(v, q1);
    range_row(u, q2);
    range_row(v, q2);
  }
  for (std::size_t j = 0; j < obj.size(); ++j) out.lp.vars[j].obj = obj[j];
  return out;
}

struct KCutResult {
  bool exists = false;    // false: fewer than k disjoint cuts fit
  double total_weight = 0.0;
  CutChain chain;         // nested sets in original node ids
};

// Exact minimum-weight family of k disjoint cuts separating the entries of X
// from the exits outside X.  Total unimodularity makes the LP optimum
// integral; the chain is read off the node levels and re-verified.
inline KCutResult solve_k_disjoint_cut(const Instance& inst, const NodeSet& x_set,
                                       const std::vector<double>& w, int k) {
  const WeightedCutGraph cg = make_cut_graph(inst, x_set, w);
  if (k > cg.num_nodes - 1) return {};  // a chain needs k distinct level steps
  const KCutLp model = build_k_cut_lp(cg, k);
  const LpSolution sol = solve_lp(model.lp);
  if (sol.status == LpStatus::Infeasible) return {};
  if (sol.status != LpStatus::Optimal)
    throw NumericalError("k-disjoint-cut subproblem: unexpected LP status");

  KCutResult out;
  out.exists = true;
  out.total_weight = sol.objective;

  std::vector<int> level(static_cast<std::size_t>(cg.num_nodes));
  for (NodeId v = 0; v < cg.num_nodes; ++v) {
    const double p = sol.primal[static_cast<std::size_t>(model.node_var[static_cast<std::size_t>(v)])];
    const double rounded = std::round(p);
    if (std::abs(p - rounded) > 1e-6)
      throw NumericalError("k-disjoint-cut subproblem: fractional node level " +
                           std::to_string(p));
    level[static_cast<std::size_t>(v)] = static_cast<int>(rounded);
  }

  const int n = inst.network.graph.num_nodes();
  for (int i = 1; i <= k; ++i) {
    const int threshold = k + 1 - i;
    std::vector<NodeId> members;
    for (NodeId v = 0; v < n; ++v)
      if (level[static_cast<std::size_t>(cg.node_map[static_cast<std::size_t>(v)])] >= threshold)
        members.push_back(v);
    out.chain.sets.push_back(make_node_set(std::move(members)));
  }

  double recomputed = 0.0;
  for (const NodeSet& s : out.chain.sets)
    for (ArcId a : crossing_arcs(inst.network.graph, s)) recomputed += w[static_cast<std::size_t>(a)];
  if (std::abs(recomputed - out.total_weight) > 1e-6 * (1.0 + std::abs(out.total_weight)))
    throw NumericalError("k-disjoint-cut subproblem: chain weight disagrees with LP objective");
  out.total_weight = recomputed;
  return out;
}

// sigma_k(X): minimum scaled cut-family weight.  Degenerate subsets (no
// active entry, or no exit left outside) admit zero-weight families of any
// length; subsets outside the k-family get +infinity.
inline double sigma_k(const Instance& inst, const NodeSet& x_set, const std::vector<double>& w,
                      int k) {
  detail::require_terminal_subset(inst, x_set);
  if (set_intersection(x_set, inst.entries).empty() ||
      set_difference(inst.exits, x_set).empty())
    return 0.0;
  const KCutResult res = solve_k_disjoint_cut(inst, x_set, w, k);
  if (!res.exists) return std::numeric_limits<double>::infinity();
  const double kk = static_cast<double>(k);
  return res.total_weight / (kk * std::pow(kk, 1.0 / inst.network.degree_r));
}

struct SeparationOptions {
  int k_max = 0;            // 0: up to |V| - 1
  int fixed_k = 0;          // >0: evaluate only this chain length
  double tolerance = 1e-6;  // violation threshold on g
  int threads = 1;
};

// One evaluated (X, k) pair; g < 0 means the inequality is violated at x.
struct SeparationCandidate {
  NodeSet x_set;
  int k = 0;
  double sigma = 0.0;
  double g = 0.0;
  CutChain chain;  // empty for degenerate subsets
};

struct SeparationResult {
  bool violated = false;
  double best_g = std::numeric_limits<double>::infinity();
  NodeSet best_x;
  int best_k = 0;
  // Most-violated first; per terminal subset only its strongest k is kept.
  std::vector<ValidInequality> violated_cuts;
  std::vector<SeparationCandidate> candidates;
};

namespace detail {

struct SubsetEvaluation {
  std::vector<SeparationCandidate> rows;
};

inline SubsetEvaluation evaluate_terminal_subset(const Instance& inst, const NodeSet& x_set,
                                                 const std::vector<double>& w, double rhs_scale,
                                                 int k_max, int fixed_k) {
  SubsetEvaluation out;
  const double rhs = balance_of_subset(inst, x_set) / rhs_scale;
  const bool degenerate = set_intersection(x_set, inst.entries).empty() ||
                          set_difference(inst.exits, x_set).empty();
  if (degenerate) {
    SeparationCandidate row;
    row.x_set = x_set;
    row.k = fixed_k > 0 ? fixed_k : 1;
    row.sigma = 0.0;
    row.g = -rhs;
    out.rows.push_back(std::move(row));
    return out;
  }
  const WeightedCutGraph cg = make_cut_graph(inst, x_set, w);
  const int limit = std::min(k_max, cg.num_nodes - 1);
  const int k_lo = fixed_k > 0 ? fixed_k : 1;
  const int k_hi = fixed_k > 0 ? fixed_k : limit;
  for (int k = k_lo; k <= k_hi; ++k) {
    if (k > cg.num_nodes - 1) break;
    const KCutResult res = solve_k_disjoint_cut(inst, x_set, w, k);
    if (!res.exists) break;  // the k-family only shrinks as k grows
    SeparationCandidate row;
    row.x_set = x_set;
    row.k = k;
    const double kk = static_cast<double>(k);
    row.sigma = res.total_weight / (kk * std::pow(kk, 1.0 / inst.network.degree_r));
    row.g = row.sigma - rhs;
    row.chain = res.chain;
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace detail

// Exact separation over every terminal subset and every chain length: find
// the (X, k) whose disjoint-cut inequality is most violated at x.  Ties
// prefer smaller k, then lexicographically smaller X.  Exhaustive in the
// number of terminals, exact for each subset via the cut LP.
inline SeparationResult separate(const Instance& inst, const std::vector<double>& x,
                                 const SeparationOptions& opt = {}) {
  const int m = inst.network.graph.num_arcs();
  if (x.size() != static_cast<std::size_t>(m)) throw Error("separate: design vector size mismatch");
  const NodeSet terminals = inst.terminals();
  if (terminals.size() > 16) throw Error("separate: more than 16 terminals");
  const double pibar = inst.global_pressure_bound();
  if (!(pibar > 0.0)) throw Error("separate: nonpositive pressure bound");
  const double r = inst.network.degree_r;
  const double rhs_scale = std::pow(pibar, 1.0 / r);
  const int k_cap = inst.network.graph.num_nodes() - 1;
  const int k_max = std::min(opt.k_max > 0 ? opt.k_max : k_cap, k_cap);
  if (opt.fixed_k > k_cap) throw Error("separate: fixed k exceeds node count - 1");

  std::vector<double> w(static_cast<std::size_t>(m));
  for (int a = 0; a < m; ++a) {
    const double xa = std::min(std::max(x[static_cast<std::size_t>(a)], 0.0), 1.0);
    w[static_cast<std::size_t>(a)] = inst.network.conductance(a) * xa;
  }

  std::vector<NodeSet> subsets;
  const std::uint32_t tcount = static_cast<std::uint32_t>(terminals.size());
  for (std::uint32_t pick = 0; pick < (1u << tcount); ++pick) {
    std::vector<NodeId> xs;
    for (std::uint32_t i = 0; i < tcount; ++i)
      if (pick & (1u << i)) xs.push_back(terminals[i]);
    subsets.push_back(make_node_set(std::move(xs)));
  }

  std::vector<detail::SubsetEvaluation> evals(subsets.size());
  const int threads = std::max(1, opt.threads);
  if (threads == 1 || subsets.size() < 2) {
    for (std::size_t i = 0; i < subsets.size(); ++i)
      evals[i] = detail::evaluate_terminal_subset(inst, subsets[i], w, rhs_scale, k_max, opt.fixed_k);
  } else {
    const std::size_t chunk = (subsets.size() + static_cast<std::size_t>(threads) - 1) /
                              static_cast<std::size_t>(threads);
    std::vector<std::future<void>> futures;
    for (int t = 0; t < threads; ++t) {
      const std::size_t lo = static_cast<std::size_t>(t) * chunk;
      const std::size_t hi = std::min(lo + chunk, subsets.size());
      if (lo >= hi) break;
      futures.push_back(std::async(std::launch::async, [&, lo, hi]() {
        for (std::size_t i = lo; i < hi; ++i)
          evals[i] = detail::evaluate_terminal_subset(inst, subsets[i], w, rhs_scale, k_max,
                                                      opt.fixed_k);
      }));
    }
    for (auto& f : futures) f.get();
  }

  SeparationResult out;
  std::vector<std::size_t> best_row_per_subset(subsets.size(), SIZE_MAX);
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    for (const SeparationCandidate& row : evals[i].rows) {
      const std::size_t at = out.candidates.size();
      out.candidates.push_back(row);
      if (best_row_per_subset[i] == SIZE_MAX ||
          row.g < out.candidates[best_row_per_subset[i]].g - 1e-12)
        best_row_per_subset[i] = at;
      const bool better =
          out.best_k == 0 || row.g < out.best_g - 1e-12 ||
          (row.g < out.best_g + 1e-12 &&
           (row.k < out.best_k || (row.k == out.best_k && lex_less(row.x_set, out.best_x))));
      if (better) {
        out.best_g = row.g;
        out.best_x = row.x_set;
        out.best_k = row.k;
      }
    }
  }

  std::vector<std::size_t> violated_rows;
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    if (best_row_per_subset[i] == SIZE_MAX) continue;
    const SeparationCandidate& row = out.candidates[best_row_per_subset[i]];
    if (row.g < -opt.tolerance && !row.chain.sets.empty())
      violated_rows.push_back(best_row_per_subset[i]);
  }
  std::sort(violated_rows.begin(), violated_rows.end(), [&out](std::size_t a, std::size_t b) {
    const SeparationCandidate& ra = out.candidates[a];
    const SeparationCandidate& rb = out.candidates[b];
    if (ra.g != rb.g) return ra.g < rb.g;
    if (ra.k != rb.k) return ra.k < rb.k;
    return lex_less(ra.x_set, rb.x_set);
  });
  for (std::size_t idx : violated_rows) {
    const SeparationCandidate& row = out.candidates[idx];
    out.violated_cuts.push_back(build_inequality(inst, row.x_set, row.chain));
  }
  out.violated = !out.violated_cuts.empty();
  return out;
}

}  // namespace potflow
