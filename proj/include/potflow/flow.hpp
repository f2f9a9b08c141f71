#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "potflow/detail/linalg.hpp"
#include "potflow/graph.hpp"
#include "potflow/instance.hpp"

namespace potflow {

struct FlowState {
  std::vector<double> flow;       // per arc
  std::vector<double> potential;  // per node
};

struct TransshipmentOptions {
  double tolerance = 1e-9;        // residual tolerance, scaled by max(1, |b|_inf)
  int max_iterations = 200;
  // Regularizes |drop|^(1/r - 1) near zero. Must stay small enough that an
  // arc pinned at the floor carries less than the tolerance: flow there is
  // mu * floor^(1/r), so 1e-24 keeps zero-flow arcs below 1e-9 up to r = 2.
  double derivative_floor = 1e-24;
};

namespace detail {

// One weakly connected piece of a network, in local indices.
struct ComponentSystem {
  std::vector<NodeId> nodes;   // original node ids
  std::vector<ArcId> arc_ids;  // original arc ids
  std::vector<int> tail;       // local endpoint indices
  std::vector<int> head;
  std::vector<double> mu;
};

struct ComponentSolution {
  std::vector<double> potential;  // local, min shifted to 0
  std::vector<double> flow;       // local
  int iterations = 0;
  double residual = 0.0;
};

inline ComponentSystem make_component_system(const Network& net, const NodeSet& nodes,
                                             const std::vector<double>& mu) {
  ComponentSystem sys;
  sys.nodes = nodes;
  std::vector<int> local(static_cast<std::size_t>(net.graph.num_nodes()), -1);
  for (std::size_t i = 0; i < nodes.size(); ++i)
    local[static_cast<std::size_t>(nodes[i])] = static_cast<int>(i);
  for (ArcId a = 0; a < net.graph.num_arcs(); ++a) {
    const Arc& arc = net.graph.arcs()[static_cast<std::size_t>(a)];
    const int lt = local[static_cast<std::size_t>(arc.tail)];
    const int lh = local[static_cast<std::size_t>(arc.head)];
    if (lt < 0 || lh < 0) continue;
    sys.arc_ids.push_back(a);
    sys.tail.push_back(lt);
    sys.head.push_back(lh);
    sys.mu.push_back(mu[static_cast<std::size_t>(a)]);
  }
  return sys;
}

// Minimizes the convex flow energy over node potentials with a damped Newton
// iteration. The gradient is the node balance residual and the Hessian is a
// weighted Laplacian, so each step solves one SPD system with one node pinned.
inline ComponentSolution solve_potential_component(const ComponentSystem& sys,
                                                   const std::vector<double>& b, double degree_r,
                                                   const TransshipmentOptions& opt) {
  const int n = static_cast<int>(sys.nodes.size());
  const int m = static_cast<int>(sys.arc_ids.size());
  const double p = 1.0 / degree_r;

  ComponentSolution sol;
  sol.potential.assign(static_cast<std::size_t>(n), 0.0);
  sol.flow.assign(static_cast<std::size_t>(m), 0.0);
  if (n <= 1) return sol;

  double scale = 1.0;
  for (double bv : b) scale = std::max(scale, std::abs(bv));
  const double tol = opt.tolerance * scale;

  std::vector<double>& pi = sol.potential;
  std::vector<double> f(static_cast<std::size_t>(m));
  std::vector<double> g(static_cast<std::size_t>(n));
  std::vector<double> w(static_cast<std::size_t>(m));
  std::vector<double> lap;
  std::vector<double> rhs;
  std::vector<double> step(static_cast<std::size_t>(n));
  std::vector<double> trial(static_cast<std::size_t>(n));

  const auto flows_at = [&](const std::vector<double>& pot, std::vector<double>& out) {
    for (int a = 0; a < m; ++a) {
      const double drop = pot[static_cast<std::size_t>(sys.tail[static_cast<std::size_t>(a)])] -
                          pot[static_cast<std::size_t>(sys.head[static_cast<std::size_t>(a)])];
      const double mag = sys.mu[static_cast<std::size_t>(a)] * std::pow(std::abs(drop), p);
      out[static_cast<std::size_t>(a)] = drop >= 0.0 ? mag : -mag;
    }
  };
  const auto energy_at = [&](const std::vector<double>& pot) {
    double e = 0.0;
    for (int a = 0; a < m; ++a) {
      const double drop = pot[static_cast<std::size_t>(sys.tail[static_cast<std::size_t>(a)])] -
                          pot[static_cast<std::size_t>(sys.head[static_cast<std::size_t>(a)])];
      e += sys.mu[static_cast<std::size_t>(a)] * std::pow(std::abs(drop), 1.0 + p) / (1.0 + p);
    }
    for (int v = 0; v < n; ++v) e -= b[static_cast<std::size_t>(v)] * pot[static_cast<std::size_t>(v)];
    return e;
  };

  for (int iter = 0; iter <= opt.max_iterations; ++iter) {
    flows_at(pi, f);
    for (int v = 0; v < n; ++v) g[static_cast<std::size_t>(v)] = -b[static_cast<std::size_t>(v)];
    for (int a = 0; a < m; ++a) {
      g[static_cast<std::size_t>(sys.tail[static_cast<std::size_t>(a)])] += f[static_cast<std::size_t>(a)];
      g[static_cast<std::size_t>(sys.head[static_cast<std::size_t>(a)])] -= f[static_cast<std::size_t>(a)];
    }
    double res = 0.0;
    for (double gv : g) res = std::max(res, std::abs(gv));
    sol.residual = res;
    sol.iterations = iter;
    if (res <= tol) {
      double lo = pi[0];
      for (double v : pi) lo = std::min(lo, v);
      for (double& v : pi) v -= lo;
      flows_at(pi, f);
      sol.flow = f;
      return sol;
    }
    if (iter == opt.max_iterations) break;

    // For degree > 1 the secant slope mu * |drop|^(p-1) replaces the tangent
    // mu * p * |drop|^(p-1): the tangent step overshoots arcs whose flow must
    // vanish (it maps drop to -drop/p and oscillates), while the secant step
    // lands on zero. For degree <= 1 the tangent is the steeper one and safe.
    const double slope_factor = std::max(p, 1.0);
    for (int a = 0; a < m; ++a) {
      const double drop = pi[static_cast<std::size_t>(sys.tail[static_cast<std::size_t>(a)])] -
                          pi[static_cast<std::size_t>(sys.head[static_cast<std::size_t>(a)])];
      const double base = std::max(std::abs(drop), opt.derivative_floor);
      const double mu = sys.mu[static_cast<std::size_t>(a)];
      double wa = mu * slope_factor * std::pow(base, p - 1.0);
      wa = std::min(std::max(wa, 1e-14 * mu), 1e14 * mu);
      w[static_cast<std::size_t>(a)] = wa;
    }

    // Node 0 is pinned; assemble the reduced Laplacian.
    const int nr = n - 1;
    lap.assign(static_cast<std::size_t>(nr) * static_cast<std::size_t>(nr), 0.0);
    rhs.assign(static_cast<std::size_t>(nr), 0.0);
    const auto lat = [&](int i, int j) -> double& {
      return lap[static_cast<std::size_t>(i) * static_cast<std::size_t>(nr) + static_cast<std::size_t>(j)];
    };
    for (int a = 0; a < m; ++a) {
      const int u = sys.tail[static_cast<std::size_t>(a)];
      const int v = sys.head[static_cast<std::size_t>(a)];
      const double wa = w[static_cast<std::size_t>(a)];
      if (u > 0) lat(u - 1, u - 1) += wa;
      if (v > 0) lat(v - 1, v - 1) += wa;
      if (u > 0 && v > 0) {
        lat(u - 1, v - 1) -= wa;
        lat(v - 1, u - 1) -= wa;
      }
    }
    for (int v = 1; v < n; ++v) rhs[static_cast<std::size_t>(v - 1)] = -g[static_cast<std::size_t>(v)];

    bool solved = false;
    for (int attempt = 0; attempt < 3 && !solved; ++attempt) {
      std::vector<double> lap_try = lap;
      std::vector<double> rhs_try = rhs;
      if (attempt > 0) {
        double diag_max = 0.0;
        for (int i = 0; i < nr; ++i) diag_max = std::max(diag_max, lat(i, i));
        const double jitter = diag_max * std::pow(1e-12, 1.0 / attempt);
        for (int i = 0; i < nr; ++i)
          lap_try[static_cast<std::size_t>(i) * static_cast<std::size_t>(nr) +
                  static_cast<std::size_t>(i)] += jitter;
      }
      if (solve_spd(lap_try, rhs_try, nr)) {
        step[0] = 0.0;
        for (int v = 1; v < n; ++v) step[static_cast<std::size_t>(v)] = rhs_try[static_cast<std::size_t>(v - 1)];
        solved = true;
      }
    }
    if (!solved) throw NumericalError("potential solve: singular Newton system");

    double slope = 0.0;
    for (int v = 0; v < n; ++v) slope += g[static_cast<std::size_t>(v)] * step[static_cast<std::size_t>(v)];
    const double e0 = energy_at(pi);
    // The allowance keeps the test meaningful once the true decrease falls
    // below the rounding noise of the energy itself.
    const double noise = 1e-14 * (1.0 + std::abs(e0));
    double t = 1.0;
    bool accepted = false;
    while (t >= 1e-14) {
      for (int v = 0; v < n; ++v)
        trial[static_cast<std::size_t>(v)] =
            pi[static_cast<std::size_t>(v)] + t * step[static_cast<std::size_t>(v)];
      if (energy_at(trial) <= e0 + 1e-4 * t * slope + noise) {
        pi = trial;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted)
      throw NumericalError("potential solve: line search failed at residual " + std::to_string(res));
  }
  throw NumericalError("potential solve: no convergence after " +
                       std::to_string(opt.max_iterations) +
                       " iterations, residual " + std::to_string(sol.residual));
}

}  // namespace detail

// Potentials and arc flows of the unique balanced flow for supply vector b.
// Requires a weakly connected network and sum(b) = 0. Potentials are shifted
// so that the minimum is 0.
inline FlowState solve_transshipment(const Network& net, const std::vector<double>& b,
                                     const TransshipmentOptions& opt = {}) {
  const int n = net.graph.num_nodes();
  if (static_cast<int>(b.size()) != n) throw Error("solve_transshipment: balance size mismatch");
  if (static_cast<int>(net.beta.size()) != net.graph.num_arcs())
    throw Error("solve_transshipment: beta size mismatch");
  double sum = 0.0;
  double scale = 1.0;
  for (double bv : b) {
    sum += bv;
    scale = std::max(scale, std::abs(bv));
  }
  if (std::abs(sum) > 1e-9 * scale)
    throw Error("solve_transshipment: balances sum to " + std::to_string(sum));
  if (!net.graph.is_weakly_connected())
    throw Error("solve_transshipment: network is not weakly connected");

  NodeSet all(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) all[static_cast<std::size_t>(v)] = v;
  const detail::ComponentSystem sys = detail::make_component_system(net, all, net.conductances());
  const detail::ComponentSolution sol = detail::solve_potential_component(sys, b, net.degree_r, opt);

  FlowState state;
  state.potential = sol.potential;
  state.flow.assign(static_cast<std::size_t>(net.graph.num_arcs()), 0.0);
  for (std::size_t i = 0; i < sys.arc_ids.size(); ++i)
    state.flow[static_cast<std::size_t>(sys.arc_ids[i])] = sol.flow[i];
  return state;
}

// Potential difference induced between s and t by a unit flow from s to t.
inline double effective_resistance(const Network& net, NodeId s, NodeId t,
                                   const TransshipmentOptions& opt = {}) {
  const int n = net.graph.num_nodes();
  if (s < 0 || s >= n || t < 0 || t >= n) throw Error("effective_resistance: unknown node");
  if (s == t) throw Error("effective_resistance: source equals sink");
  std::vector<double> b(static_cast<std::size_t>(n), 0.0);
  b[static_cast<std::size_t>(s)] = 1.0;
  b[static_cast<std::size_t>(t)] = -1.0;
  const FlowState state = solve_transshipment(net, b, opt);
  return state.potential[static_cast<std::size_t>(s)] - state.potential[static_cast<std::size_t>(t)];
}

inline double effective_conductance(const Network& net, NodeId s, NodeId t,
                                    const TransshipmentOptions& opt = {}) {
  return std::pow(effective_resistance(net, s, t, opt), -1.0 / net.degree_r);
}

// Effective conductance of a chain of segments with per-segment conductances
// u_i: (sum_i u_i^(-r))^(-1/r).
inline double multipath_conductance(const std::vector<double>& u, double degree_r) {
  if (u.empty()) throw Error("multipath_conductance: no segments");
  if (!(degree_r > 0.0)) throw Error("multipath_conductance: degree must be positive");
  double acc = 0.0;
  for (double ui : u) {
    if (!(ui > 0.0)) throw Error("multipath_conductance: nonpositive segment conductance");
    acc += std::pow(ui, -degree_r);
  }
  return std::pow(acc, -1.0 / degree_r);
}

struct InducedNetwork {
  Network network;
  std::vector<ArcId> arc_ids;  // induced arc -> original arc
};

// Network realized by a design vector x in [0,1]: arcs with x = 0 vanish,
// the rest keep resistance beta / x (conductance x^(1/r) * mu).
inline InducedNetwork induced_network(const Network& net, const std::vector<double>& x) {
  if (x.size() != net.beta.size()) throw Error("induced_network: design vector size mismatch");
  InducedNetwork out;
  out.network.degree_r = net.degree_r;
  std::vector<Arc> arcs;
  for (ArcId a = 0; a < net.graph.num_arcs(); ++a) {
    const double xa = x[static_cast<std::size_t>(a)];
    if (!(xa >= -1e-9 && xa <= 1.0 + 1e-9))
      throw Error("induced_network: x[" + std::to_string(a) + "] out of [0,1]");
    if (xa <= 0.0) continue;
    arcs.push_back(net.graph.arcs()[static_cast<std::size_t>(a)]);
    out.network.beta.push_back(net.beta[static_cast<std::size_t>(a)] / std::min(xa, 1.0));
    out.arc_ids.push_back(a);
  }
  out.network.graph = MultiGraph(net.graph.num_nodes(), std::move(arcs));
  return out;
}

struct ComponentReport {
  NodeSet nodes;
  double spread = 0.0;
  bool balanced = true;
  bool within_bounds = true;
};

struct FeasibilityReport {
  bool feasible = false;
  std::string reason;  // empty when feasible
  std::vector<ComponentReport> components;
  FlowState state;  // potentials min-shifted to 0 per component; flows on built arcs
};

// Decides whether the network realized by x routes all balances within the
// potential bounds. Each weak component must have cancelling balances; its
// unique flow must admit a potential shift into every node window.
inline FeasibilityReport check_feasibility(const Instance& inst, const std::vector<double>& x,
                                           const TransshipmentOptions& opt = {}) {
  const int n = inst.network.graph.num_nodes();
  const int m = inst.network.graph.num_arcs();
  if (static_cast<int>(x.size()) != m) throw Error("check_feasibility: design vector size mismatch");

  FeasibilityReport report;
  report.feasible = true;
  report.state.potential.assign(static_cast<std::size_t>(n), 0.0);
  report.state.flow.assign(static_cast<std::size_t>(m), 0.0);

  const InducedNetwork ind = induced_network(inst.network, x);
  const std::vector<double> mu = ind.network.conductances();
  const double bound_scale = std::max(1.0, inst.global_pressure_bound());

  for (const NodeSet& comp : ind.network.graph.weak_components()) {
    ComponentReport cr;
    cr.nodes = comp;

    double bsum = 0.0;
    double bscale = 1.0;
    bool any_balance = false;
    for (NodeId v : comp) {
      const double bv = inst.balance[static_cast<std::size_t>(v)];
      bsum += bv;
      bscale = std::max(bscale, std::abs(bv));
      if (bv != 0.0) any_balance = true;
    }
    if (std::abs(bsum) > 1e-9 * bscale) {
      cr.balanced = false;
      report.feasible = false;
      if (report.reason.empty())
        report.reason = "component containing node " + std::to_string(comp.front()) +
                        " has net balance " + std::to_string(bsum);
      report.components.push_back(std::move(cr));
      continue;
    }

    std::vector<double> pi(comp.size(), 0.0);
    if (any_balance) {
      const detail::ComponentSystem sys = detail::make_component_system(ind.network, comp, mu);
      std::vector<double> b(comp.size());
      for (std::size_t i = 0; i < comp.size(); ++i)
        b[i] = inst.balance[static_cast<std::size_t>(comp[i])];
      const detail::ComponentSolution sol =
          detail::solve_potential_component(sys, b, ind.network.degree_r, opt);
      pi = sol.potential;
      for (std::size_t i = 0; i < sys.arc_ids.size(); ++i)
        report.state.flow[static_cast<std::size_t>(
            ind.arc_ids[static_cast<std::size_t>(sys.arc_ids[i])])] = sol.flow[i];
    }
    for (std::size_t i = 0; i < comp.size(); ++i)
      report.state.potential[static_cast<std::size_t>(comp[i])] = pi[i];

    double spread = 0.0;
    for (double v : pi) spread = std::max(spread, v);
    cr.spread = spread;

    // Feasible iff some common shift places every node in its window.
    double shift_lo = -std::numeric_limits<double>::infinity();
    double shift_hi = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < comp.size(); ++i) {
      shift_lo = std::max(shift_lo, inst.node_potential_lo(comp[i]) - pi[i]);
      shift_hi = std::min(shift_hi, inst.node_potential_hi(comp[i]) - pi[i]);
    }
    if (shift_lo > shift_hi + 1e-9 * bound_scale) {
      cr.within_bounds = false;
      report.feasible = false;
      if (report.reason.empty()) {
        if (inst.has_individual_bounds())
          report.reason = "no potential shift fits the node windows in component of node " +
                          std::to_string(comp.front());
        else
          report.reason = "potential spread " + std::to_string(spread) + " exceeds bound " +
                          std::to_string(inst.pressure_bound) + " in component of node " +
                          std::to_string(comp.front());
      }
    }
    report.components.push_back(std::move(cr));
  }
  return report;
}

// Removes one arc; everything else is unchanged.
inline Network delete_arc(const Network& net, ArcId a) {
  if (a < 0 || a >= net.graph.num_arcs()) throw Error("delete_arc: unknown arc id");
  Network out;
  out.degree_r = net.degree_r;
  std::vector<Arc> arcs;
  for (ArcId i = 0; i < net.graph.num_arcs(); ++i) {
    if (i == a) continue;
    arcs.push_back(net.graph.arcs()[static_cast<std::size_t>(i)]);
    out.beta.push_back(net.beta[static_cast<std::size_t>(i)]);
  }
  out.graph = MultiGraph(net.graph.num_nodes(), std::move(arcs));
  return out;
}

struct ContractionResult {
  Network network;
  std::vector<NodeId> node_map;  // old node id -> new node id
};

// Merges node v into node u; arcs between them become loops and are dropped.
inline ContractionResult contract_nodes(const Network& net, NodeId u, NodeId v) {
  const int n = net.graph.num_nodes();
  if (u < 0 || u >= n || v < 0 || v >= n) throw Error("contract_nodes: unknown node");
  if (u == v) throw Error("contract_nodes: nodes coincide");
  ContractionResult out;
  out.node_map.assign(static_cast<std::size_t>(n), 0);
  int next = 0;
  for (NodeId w = 0; w < n; ++w) {
    if (w == v) continue;
    out.node_map[static_cast<std::size_t>(w)] = next++;
  }
  out.node_map[static_cast<std::size_t>(v)] = out.node_map[static_cast<std::size_t>(u)];
  std::vector<Arc> arcs;
  for (ArcId a = 0; a < net.graph.num_arcs(); ++a) {
    const Arc& arc = net.graph.arcs()[static_cast<std::size_t>(a)];
    const NodeId nt = out.node_map[static_cast<std::size_t>(arc.tail)];
    const NodeId nh = out.node_map[static_cast<std::size_t>(arc.head)];
    if (nt == nh) continue;
    arcs.push_back({nt, nh});
    out.network.beta.push_back(net.beta[static_cast<std::size_t>(a)]);
  }
  out.network.degree_r = net.degree_r;
  out.network.graph = MultiGraph(n - 1, std::move(arcs));
  return out;
}

// Single-arc network with identical terminal behaviour between s and t.
inline Network two_terminal_equivalent(const Network& net, NodeId s, NodeId t,
                                       const TransshipmentOptions& opt = {}) {
  Network out;
  out.degree_r = net.degree_r;
  out.graph = MultiGraph(2, {{0, 1}});
  out.beta = {effective_resistance(net, s, t, opt)};
  return out;
}

}  // namespace potflow
