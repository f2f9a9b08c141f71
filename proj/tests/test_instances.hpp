#pragma once

// Shared instance builders for the test suites.

#include <algorithm>
#include <random>
#include <vector>

#include "potflow/flow.hpp"
#include "potflow/instance.hpp"

namespace potflow_test {

// Entry -> relay -> exit path with two candidate pipes.
inline potflow::Instance path_instance(double beta0, double beta1, double r, double demand,
                                       double pibar) {
  potflow::Instance inst;
  inst.network.graph = potflow::MultiGraph(3, {{0, 1}, {1, 2}});
  inst.network.beta = {beta0, beta1};
  inst.network.degree_r = r;
  inst.entries = {0};
  inst.exits = {2};
  inst.balance = {demand, 0.0, -demand};
  inst.pressure_bound = pibar;
  inst.cost = {1.0, 1.0};
  return inst;
}

// Two bundles of parallel unit-resistance pipes in series: three from the
// entry to the midpoint, two from the midpoint to the exit.  With degree 2
// and unit pressure bound the full design carries at most 6/sqrt(13), while
// the strongest cut certificate is the pair of cuts at 5/(2 sqrt 2).
inline potflow::Instance bottleneck_instance(double demand, double r = 2.0, double pibar = 1.0) {
  potflow::Instance inst;
  inst.network.graph = potflow::MultiGraph(3, {{0, 1}, {0, 1}, {0, 1}, {1, 2}, {1, 2}});
  inst.network.beta = {1.0, 1.0, 1.0, 1.0, 1.0};
  inst.network.degree_r = r;
  inst.entries = {0};
  inst.exits = {2};
  inst.balance = {demand, 0.0, -demand};
  inst.pressure_bound = pibar;
  inst.cost = {1.0, 1.0, 1.0, 1.0, 1.0};
  return inst;
}

// Two entries feeding one exit: one through a relay, one directly.  The
// scaled cut-family weight sigma is not submodular on this network.
inline potflow::Instance confluence_instance(double r = 2.0, double pibar = 1.0) {
  potflow::Instance inst;
  // nodes: 0 = first entry, 1 = second entry, 2 = relay, 3 = exit
  inst.network.graph = potflow::MultiGraph(4, {{0, 2}, {2, 3}, {1, 3}});
  inst.network.beta = {1.0, 1.0, 1.0};
  inst.network.degree_r = r;
  inst.entries = {0, 1};
  inst.exits = {3};
  inst.balance = {1.0, 1.0, 0.0, -2.0};
  inst.pressure_bound = pibar;
  inst.cost = {1.0, 1.0, 1.0};
  return inst;
}

// Small random connected design instance with 2-3 terminals, mixed flow
// degrees, and a pressure bound scaled off the full design's spread.
inline potflow::Instance random_design_instance(std::mt19937_64& rng) {
  using potflow::Arc;
  using potflow::FeasibilityReport;
  using potflow::Instance;
  auto uniform = [&rng](double lo, double hi) {
    const double u01 = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u01;
  };
  const int n = 4 + static_cast<int>(rng() % 2);  // 4..5 nodes
  const int extra = 1 + static_cast<int>(rng() % 3);
  std::vector<Arc> arcs;
  for (int v = 1; v < n; ++v)
    arcs.push_back({static_cast<int>(rng() % static_cast<unsigned long long>(v)), v});
  for (int i = 0; i < extra; ++i) {
    int u = static_cast<int>(rng() % static_cast<unsigned long long>(n));
    int w = static_cast<int>(rng() % static_cast<unsigned long long>(n));
    if (u == w) w = (w + 1) % n;
    arcs.push_back({u, w});
  }
  Instance inst;
  inst.network.degree_r = (rng() % 3 == 0) ? 1.0 : ((rng() % 2 == 0) ? 1.852 : 2.0);
  inst.network.graph = potflow::MultiGraph(n, std::move(arcs));
  const int m = inst.network.graph.num_arcs();
  for (int a = 0; a < m; ++a) {
    inst.network.beta.push_back(uniform(0.5, 2.0));
    inst.cost.push_back(uniform(1.0, 3.0));
  }
  // Two or three terminals with balanced supply and demand.
  const bool three = (rng() % 2 == 0) && n >= 4;
  inst.balance.assign(static_cast<std::size_t>(n), 0.0);
  if (three && rng() % 2 == 0) {
    inst.entries = {0, 1};
    inst.exits = {n - 1};
    const double d = uniform(0.5, 1.5);
    inst.balance[0] = d;
    inst.balance[1] = 0.7 * d;
    inst.balance[static_cast<std::size_t>(n - 1)] = -(d + 0.7 * d);
  } else if (three) {
    inst.entries = {0};
    inst.exits = {1, n - 1};
    const double d = uniform(0.5, 1.5);
    inst.balance[1] = -d;
    inst.balance[static_cast<std::size_t>(n - 1)] = -0.7 * d;
    inst.balance[0] = d + 0.7 * d;
  } else {
    inst.entries = {0};
    inst.exits = {n - 1};
    const double d = uniform(0.5, 1.5);
    inst.balance[0] = d;
    inst.balance[static_cast<std::size_t>(n - 1)] = -d;
  }
  // Pressure bound: sometimes generous, sometimes tight, relative to the
  // spread of the full design.
  std::vector<double> full(static_cast<std::size_t>(m), 1.0);
  Instance probe_inst = inst;
  probe_inst.pressure_bound = 1e100;
  const FeasibilityReport probe = potflow::check_feasibility(probe_inst, full);
  double spread = 0.0;
  for (double p : probe.state.potential) spread = std::max(spread, p);
  const double factor[] = {1.2, 2.0, 4.0};
  inst.pressure_bound = std::max(spread, 1e-6) * factor[rng() % 3];
  return inst;
}

}  // namespace potflow_test
