#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "potflow/graph.hpp"

namespace potflow {

// Potential-flow network: along each arc the potential drop equals
// beta * sign(f) * |f|^degree_r. Conductance mu = beta^(-1/degree_r) is the
// flow carried per unit potential drop raised to 1/degree_r.
struct Network {
  MultiGraph graph;
  std::vector<double> beta;
  double degree_r = 2.0;

  double conductance(ArcId a) const {
    if (a < 0 || a >= graph.num_arcs())
      throw Error("network: unknown arc id " + std::to_string(a));
    return std::pow(beta[static_cast<std::size_t>(a)], -1.0 / degree_r);
  }

  std::vector<double> conductances() const {
    std::vector<double> mu(beta.size());
    for (std::size_t a = 0; a < beta.size(); ++a)
      mu[a] = std::pow(beta[a], -1.0 / degree_r);
    return mu;
  }
};

// Design instance: candidate arcs with build costs, terminal balances, and
// potential bounds. Entries supply (balance > 0), exits consume.
struct Instance {
  Network network;
  NodeSet entries;
  NodeSet exits;
  std::vector<double> balance;
  double pressure_bound = 0.0;
  std::vector<double> cost;
  // Optional per-node potential windows; empty means [0, pressure_bound]
  // everywhere. When present both vectors have one entry per node.
  std::vector<double> potential_lo;
  std::vector<double> potential_hi;
  std::vector<std::string> node_names;
  std::vector<std::string> arc_names;
  // Optional physical metadata carried by the file format; empty or one entry
  // per arc. Not used by the algorithms (beta already encodes them).
  std::vector<double> arc_diameter;
  std::vector<double> arc_length;

  bool has_individual_bounds() const { return !potential_lo.empty(); }

  double node_potential_lo(NodeId v) const {
    return has_individual_bounds() ? potential_lo[static_cast<std::size_t>(v)] : 0.0;
  }

  double node_potential_hi(NodeId v) const {
    return has_individual_bounds() ? potential_hi[static_cast<std::size_t>(v)] : pressure_bound;
  }

  // Widest potential spread any feasible assignment may use. Cut generation
  // always works with this global bound.
  double global_pressure_bound() const {
    if (!has_individual_bounds()) return pressure_bound;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t v = 0; v < potential_lo.size(); ++v) {
      lo = std::min(lo, potential_lo[v]);
      hi = std::max(hi, potential_hi[v]);
    }
    return hi - lo;
  }

  NodeSet terminals() const { return set_union(entries, exits); }
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

namespace detail {

inline bool finite_positive(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace detail

// Structural checks on an instance. Violations are collected, not thrown;
// callers that need a hard failure test report.ok().
inline ValidationReport validate_instance(const Instance& inst, bool allow_disconnected = false) {
  ValidationReport report;
  auto fail = [&report](std::string msg) { report.violations.push_back(std::move(msg)); };

  const MultiGraph& g = inst.network.graph;
  const int n = g.num_nodes();
  const int m = g.num_arcs();

  if (n == 0) fail("instance has no nodes");
  for (ArcId a = 0; a < m; ++a) {
    const Arc& arc = g.arcs()[static_cast<std::size_t>(a)];
    if (arc.tail == arc.head)
      fail("arc " + std::to_string(a) + " is a loop at node " + std::to_string(arc.tail));
  }
  if (!allow_disconnected && !g.is_weakly_connected()) fail("graph is not weakly connected");

  if (!detail::finite_positive(inst.network.degree_r))
    fail("degree must be positive, got " + std::to_string(inst.network.degree_r));

  if (static_cast<int>(inst.network.beta.size()) != m)
    fail("beta count " + std::to_string(inst.network.beta.size()) + " does not match arc count " +
         std::to_string(m));
  else
    for (ArcId a = 0; a < m; ++a)
      if (!detail::finite_positive(inst.network.beta[static_cast<std::size_t>(a)]))
        fail("arc " + std::to_string(a) + " has nonpositive resistance coefficient");

  if (static_cast<int>(inst.cost.size()) != m)
    fail("cost count " + std::to_string(inst.cost.size()) + " does not match arc count " +
         std::to_string(m));
  else
    for (ArcId a = 0; a < m; ++a)
      if (!detail::finite_positive(inst.cost[static_cast<std::size_t>(a)]))
        fail("arc " + std::to_string(a) + " has nonpositive cost");

  for (NodeId v : inst.entries)
    if (v < 0 || v >= n) fail("entry node " + std::to_string(v) + " does not exist");
  for (NodeId v : inst.exits)
    if (v < 0 || v >= n) fail("exit node " + std::to_string(v) + " does not exist");
  if (!set_intersection(inst.entries, inst.exits).empty())
    fail("entry and exit sets overlap");

  if (static_cast<int>(inst.balance.size()) != n) {
    fail("balance count " + std::to_string(inst.balance.size()) + " does not match node count " +
         std::to_string(n));
  } else {
    double sum = 0.0;
    double scale = 1.0;
    for (NodeId v = 0; v < n; ++v) {
      const double b = inst.balance[static_cast<std::size_t>(v)];
      if (!std::isfinite(b)) {
        fail("balance at node " + std::to_string(v) + " is not finite");
        continue;
      }
      sum += b;
      scale = std::max(scale, std::abs(b));
      const bool entry = set_contains(inst.entries, v);
      const bool exit = set_contains(inst.exits, v);
      if (entry && b < 0.0) fail("entry node " + std::to_string(v) + " has negative balance");
      if (exit && b > 0.0) fail("exit node " + std::to_string(v) + " has positive balance");
      if (!entry && !exit && b != 0.0)
        fail("non-terminal node " + std::to_string(v) + " has nonzero balance");
    }
    if (std::abs(sum) > 1e-9 * scale)
      fail("balances sum to " + std::to_string(sum) + ", expected 0");
  }

  if (inst.has_individual_bounds()) {
    if (static_cast<int>(inst.potential_lo.size()) != n ||
        static_cast<int>(inst.potential_hi.size()) != n) {
      fail("potential bound count does not match node count");
    } else {
      for (NodeId v = 0; v < n; ++v) {
        const double lo = inst.potential_lo[static_cast<std::size_t>(v)];
        const double hi = inst.potential_hi[static_cast<std::size_t>(v)];
        if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi)
          fail("node " + std::to_string(v) + " has an empty potential window");
      }
    }
  } else if (!detail::finite_positive(inst.pressure_bound)) {
    fail("pressure bound must be positive, got " + std::to_string(inst.pressure_bound));
  }

  if (!inst.node_names.empty() && static_cast<int>(inst.node_names.size()) != n)
    fail("node name count does not match node count");
  if (!inst.arc_names.empty() && static_cast<int>(inst.arc_names.size()) != m)
    fail("arc name count does not match arc count");
  // Metadata entries are positive when present; 0 marks "not recorded".
  for (const auto* extra : {&inst.arc_diameter, &inst.arc_length}) {
    if (extra->empty()) continue;
    if (static_cast<int>(extra->size()) != m) {
      fail("arc metadata count does not match arc count");
      continue;
    }
    for (double v : *extra)
      if (!(v == 0.0 || detail::finite_positive(v))) fail("arc metadata must be positive and finite");
  }

  return report;
}

// Net balance of a terminal subset. X must consist of terminals.
inline double balance_of_subset(const Instance& inst, const NodeSet& x) {
  const NodeSet t = inst.terminals();
  double sum = 0.0;
  for (NodeId v : x) {
    if (!set_contains(t, v))
      throw Error("balance_of_subset: node " + std::to_string(v) + " is not a terminal");
    sum += inst.balance[static_cast<std::size_t>(v)];
  }
  return sum;
}

}  // namespace potflow
