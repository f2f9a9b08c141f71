// Acceptance suite: one [PASS]/[FAIL] line per criterion; the exit code is
// the number of failed criteria.  Each criterion is self-contained and states
// its sample sizes, tolerances, and runtime budget inline.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "potflow/potflow.hpp"
#include "test_instances.hpp"

using namespace potflow;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Stopwatch {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

// Random connected design instance: spanning tree plus extras, up to
// `max_arcs` arcs, 2-4 terminals, exactly cancelling balances, and a pressure
// bound scaled off the full design's spread (occasionally tight).
Instance random_family_instance(std::mt19937_64& rng, int max_arcs, bool r_one_or_two) {
  const int n = 4 + static_cast<int>(rng() % 5);  // 4..8
  std::vector<Arc> arcs;
  for (int v = 1; v < n; ++v)
    arcs.push_back({static_cast<int>(rng() % static_cast<std::uint64_t>(v)), v});
  const int max_extra = std::min(5, max_arcs - (n - 1));
  const int extra = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(std::max(1, max_extra)));
  for (int i = 0; i < extra && static_cast<int>(arcs.size()) < max_arcs; ++i) {
    int u = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
    int w = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
    if (u == w) w = (w + 1) % n;
    arcs.push_back({u, w});
  }

  Instance inst;
  if (r_one_or_two) {
    inst.network.degree_r = (rng() % 2 == 0) ? 1.0 : 2.0;
  } else {
    const double choices[] = {1.0, 1.852, 2.0};
    inst.network.degree_r = choices[rng() % 3];
  }
  inst.network.graph = MultiGraph(n, std::move(arcs));
  const int m = inst.network.graph.num_arcs();
  for (int a = 0; a < m; ++a) {
    inst.network.beta.push_back(uniform(rng, 0.5, 2.0));
    inst.cost.push_back(uniform(rng, 1.0, 3.0));
  }

  // Terminal pattern: (entries, exits) in {1,2} x {1,2}, nodes disjoint.
  const int pattern = static_cast<int>(rng() % 4);
  const bool two_in = (pattern == 1 || pattern == 3);
  const bool two_out = (pattern == 2 || pattern == 3);
  inst.entries = two_in ? NodeSet{0, 1} : NodeSet{0};
  inst.exits = two_out ? NodeSet{n - 2, n - 1} : NodeSet{n - 1};
  inst.balance.assign(static_cast<std::size_t>(n), 0.0);
  double total = 0.0;
  for (NodeId v : inst.entries) {
    const double d = uniform(rng, 0.4, 1.2);
    inst.balance[static_cast<std::size_t>(v)] = d;
    total += d;
  }
  if (two_out) {
    const double w1 = 0.5 * total;
    inst.balance[static_cast<std::size_t>(n - 2)] = -w1;
    inst.balance[static_cast<std::size_t>(n - 1)] = -(total - w1);
  } else {
    inst.balance[static_cast<std::size_t>(n - 1)] = -total;
  }

  Instance probe = inst;
  probe.pressure_bound = 1e100;
  const std::vector<double> full(static_cast<std::size_t>(m), 1.0);
  const FeasibilityReport rep = check_feasibility(probe, full);
  double spread = 0.0;
  for (double p : rep.state.potential) spread = std::max(spread, p);
  const double factors[] = {0.6, 1.2, 2.0, 3.5};
  inst.pressure_bound = std::max(spread, 1e-6) * factors[rng() % 4];
  return inst;
}

// ---------------------------------------------------------------------------
// Fast exhaustive chain enumeration for the validity sweep: per (instance, X)
// the candidate sets and nesting/disjointness transitions are combinatorial,
// so they are precomputed once and reused for every design vector.

struct XContext {
  NodeSet x_set;
  double rhs = 0.0;                       // b(X) / pibar^(1/r)
  std::vector<std::uint32_t> cands;       // candidate set bitmasks
  std::vector<std::uint64_t> cross;       // crossing arc bitmask per candidate
  std::vector<std::vector<int>> preds;    // i may precede j in a nested chain
};

std::vector<XContext> build_chain_contexts(const Instance& inst) {
  const int n = inst.network.graph.num_nodes();
  const int m = inst.network.graph.num_arcs();
  const NodeSet terminals = inst.terminals();
  const double pibar = inst.global_pressure_bound();
  const double expo = 1.0 / inst.network.degree_r;

  std::vector<XContext> out;
  for (std::uint32_t pick = 0; pick < (1u << terminals.size()); ++pick) {
    std::vector<NodeId> xs;
    for (std::size_t i = 0; i < terminals.size(); ++i)
      if (pick & (1u << i)) xs.push_back(terminals[i]);
    const NodeSet x_set = make_node_set(std::move(xs));
    const NodeSet side_a = set_intersection(x_set, inst.entries);
    const NodeSet side_b = set_difference(inst.exits, x_set);
    if (side_a.empty() || side_b.empty()) continue;  // sigma = 0, b(X) <= 0
    const double rhs = balance_of_subset(inst, x_set) / std::pow(pibar, expo);
    if (rhs <= 0.0) continue;  // slack can never go negative

    XContext ctx;
    ctx.x_set = x_set;
    ctx.rhs = rhs;
    std::uint32_t required = 0, forbidden = 0;
    for (NodeId v : side_a) required |= (1u << v);
    for (NodeId v : side_b) forbidden |= (1u << v);
    std::vector<int> free_nodes;
    for (int v = 0; v < n; ++v)
      if (!((required >> v) & 1u) && !((forbidden >> v) & 1u)) free_nodes.push_back(v);

    for (std::uint32_t sub = 0; sub < (1u << free_nodes.size()); ++sub) {
      std::uint32_t mask = required;
      for (std::size_t i = 0; i < free_nodes.size(); ++i)
        if (sub & (1u << i)) mask |= (1u << free_nodes[i]);
      std::uint64_t cr = 0;
      for (int a = 0; a < m; ++a) {
        const Arc& arc = inst.network.graph.arc(a);
        if (((mask >> arc.tail) & 1u) != ((mask >> arc.head) & 1u)) cr |= (1ull << a);
      }
      ctx.cands.push_back(mask);
      ctx.cross.push_back(cr);
    }
    ctx.preds.resize(ctx.cands.size());
    for (std::size_t j = 0; j < ctx.cands.size(); ++j)
      for (std::size_t i = 0; i < ctx.cands.size(); ++i)
        if ((ctx.cands[i] & ~ctx.cands[j]) == 0 && (ctx.cross[i] & ctx.cross[j]) == 0)
          ctx.preds[j].push_back(static_cast<int>(i));
    out.push_back(std::move(ctx));
  }
  return out;
}

// Minimum scaled chain weight for every length k at once; returns the most
// negative slack sigma_k - rhs over all k with an existing chain.
double min_slack_all_k(const XContext& ctx, const std::vector<double>& arc_weight, double degree_r,
                       int kcap) {
  const std::size_t c = ctx.cands.size();
  std::vector<double> w(c), cur(c), next(c);
  for (std::size_t j = 0; j < c; ++j) {
    double acc = 0.0;
    std::uint64_t bits = ctx.cross[j];
    while (bits) {
      const int a = __builtin_ctzll(bits);
      bits &= bits - 1;
      acc += arc_weight[static_cast<std::size_t>(a)];
    }
    w[j] = acc;
  }
  double worst = kInf;
  cur = w;
  for (int k = 1; k <= kcap; ++k) {
    double best = kInf;
    for (std::size_t j = 0; j < c; ++j) best = std::min(best, cur[j]);
    if (best == kInf) break;
    const double kk = static_cast<double>(k);
    const double sigma = best / (kk * std::pow(kk, 1.0 / degree_r));
    worst = std::min(worst, sigma - ctx.rhs);
    for (std::size_t j = 0; j < c; ++j) {
      double in = kInf;
      for (int i : ctx.preds[j]) in = std::min(in, cur[static_cast<std::size_t>(i)]);
      next[j] = in == kInf ? kInf : in + w[j];
    }
    cur.swap(next);
  }
  return worst;
}

// ---------------------------------------------------------------------------

bool criterion1(std::string& note) {
  Stopwatch timer;
  std::mt19937_64 rng(101);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int segments = 1 + static_cast<int>(rng() % 10);
    const double degrees[] = {1.0, 1.852, 2.0};
    const double r = degrees[trial % 3];
    std::vector<double> u;
    Network net;
    net.degree_r = r;
    std::vector<Arc> arcs;
    for (int i = 0; i < segments; ++i) {
      const double ui = uniform(rng, 0.1, 10.0);
      u.push_back(ui);
      // Split the segment into parallel arcs whose conductances sum to u_i,
      // exercising the parallel reduction as well as the series formula.
      const int parts = 1 + static_cast<int>(rng() % 3);
      std::vector<double> shares(static_cast<std::size_t>(parts));
      double sum = 0.0;
      for (double& s : shares) {
        s = uniform(rng, 0.2, 1.0);
        sum += s;
      }
      for (double s : shares) {
        arcs.push_back({i, i + 1});
        net.beta.push_back(std::pow(ui * s / sum, -r));
      }
    }
    net.graph = MultiGraph(segments + 1, std::move(arcs));
    const double closed = multipath_conductance(u, r);
    const double solved = effective_conductance(net, 0, segments);
    worst = std::max(worst, std::abs(solved - closed) / closed);
  }
  const double elapsed = timer.seconds();
  char buf[160];
  std::snprintf(buf, sizeof buf, "200 multi-paths, max rel err %.2e, %.1fs", worst, elapsed);
  note = buf;
  return worst <= 1e-7 && elapsed < 10.0;
}

bool criterion2(std::string& note) {
  const double exact_cap = 6.0 / std::sqrt(13.0);     // max throughput
  const double bound = 5.0 / (2.0 * std::sqrt(2.0));  // two-cut bound

  const Instance probe = potflow_test::bottleneck_instance(1.0);
  const double cap = effective_conductance(probe.network, 0, 2) *
                     std::pow(probe.pressure_bound, 1.0 / probe.network.degree_r);
  bool ok = std::abs(cap - exact_cap) <= 1e-7 * exact_cap;

  const std::vector<double> full(5, 1.0);
  ok = ok && check_feasibility(potflow_test::bottleneck_instance(1.66), full).feasible;
  ok = ok && !check_feasibility(potflow_test::bottleneck_instance(1.70), full).feasible;

  const auto slack_at = [&](double demand) {
    const Instance inst = potflow_test::bottleneck_instance(demand);
    const CutChain chain{{NodeSet{0}, NodeSet{0, 1}}};
    const ValidInequality cut = build_inequality(inst, NodeSet{0}, chain);
    return evaluate_violation(cut, full);
  };
  const double slack17 = slack_at(1.70);
  const double slack18 = slack_at(1.80);
  ok = ok && std::abs(slack17 - (bound - 1.70)) <= 1e-9;
  ok = ok && std::abs(slack18 - (bound - 1.80)) <= 1e-9;
  ok = ok && slack17 > 1e-6 && slack18 < -1e-6;

  char buf[200];
  std::snprintf(buf, sizeof buf,
                "throughput %.6f (6/sqrt13 %.6f), two-cut bound %.6f, slack %+0.4f at 1.70 / %+0.4f at 1.80",
                cap, exact_cap, bound, slack17, slack18);
  note = buf;
  return ok;
}

bool criterion3(std::string& note) {
  const Instance inst = potflow_test::confluence_instance();
  const int kcap = inst.network.graph.num_nodes() - 1;
  const std::vector<double> w = inst.network.conductances();  // x = 1, unit weights

  const auto sigma_min = [&](const NodeSet& x_set) {
    double best = kInf;
    for (int k = 1; k <= kcap; ++k) best = std::min(best, sigma_k(inst, x_set, w, k));
    return best;
  };
  const double s1 = sigma_min({0});
  const double s2 = sigma_min({1});
  const double s12 = sigma_min({0, 1});
  const double s0 = sigma_min({});
  const bool ok = std::abs(s1 - 1.0 / std::sqrt(2.0)) <= 1e-9 && std::abs(s2 - 1.0) <= 1e-9 &&
                  std::abs(s12 - 2.0) <= 1e-9 && std::abs(s0) <= 1e-9 && s1 + s2 < s12 + s0 - 1e-9;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "sigma: {s1} %.9f, {s2} %.9f, {s1,s2} %.9f, {} %.9f; %.4f < %.4f", s1, s2, s12, s0,
                s1 + s2, s12 + s0);
  note = buf;
  return ok;
}

std::vector<Instance> make_family(int count, int max_arcs, bool r_one_or_two,
                                  std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Instance> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out.push_back(random_family_instance(rng, max_arcs, r_one_or_two));
  return out;
}

bool criterion4(const std::vector<Instance>& family, std::string& note) {
  Stopwatch timer;
  double worst_slack = kInf;
  long feasible_designs = 0;
  long oracle_checks = 0;
  bool oracle_agrees = true;

  for (std::size_t idx = 0; idx < family.size(); ++idx) {
    const Instance& inst = family[idx];
    const int n = inst.network.graph.num_nodes();
    const int m = inst.network.graph.num_arcs();
    const std::vector<XContext> contexts = build_chain_contexts(inst);
    const std::vector<double> mu = inst.network.conductances();

    bool oracle_sampled = false;
    std::vector<double> x(static_cast<std::size_t>(m)), wgt(static_cast<std::size_t>(m));
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
      for (int a = 0; a < m; ++a) x[static_cast<std::size_t>(a)] = (mask >> a) & 1u ? 1.0 : 0.0;
      if (!check_feasibility(inst, x).feasible) continue;
      ++feasible_designs;
      for (int a = 0; a < m; ++a)
        wgt[static_cast<std::size_t>(a)] = mu[static_cast<std::size_t>(a)] * x[static_cast<std::size_t>(a)];
      for (const XContext& ctx : contexts) {
        const double slack = min_slack_all_k(ctx, wgt, inst.network.degree_r, n - 1);
        worst_slack = std::min(worst_slack, slack);
        // Tie the fast sweeper to the reference chain oracle on a sample.
        if (idx < 3 && !oracle_sampled) {
          for (int k = 1; k <= std::min(3, n - 1); ++k) {
            const double fast = [&] {
              const auto res = potflow_test::min_weight_chain(inst, wgt, ctx.x_set, k);
              return res.exists ? res.weight / (k * std::pow(double(k), 1.0 / inst.network.degree_r))
                                : kInf;
            }();
            const double ref = potflow_test::oracle_sigma(inst, x, ctx.x_set, k);
            ++oracle_checks;
            if (!(fast == kInf && ref == kInf) && std::abs(fast - ref) > 1e-9)
              oracle_agrees = false;
          }
        }
      }
      oracle_sampled = oracle_sampled || !contexts.empty();
    }
  }
  const double elapsed = timer.seconds();
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "%zu instances, %ld feasible designs, min slack %+.3e, %ld oracle ties, %.1fs",
                family.size(), feasible_designs, worst_slack == kInf ? 0.0 : worst_slack,
                oracle_checks, elapsed);
  note = buf;
  return worst_slack >= -1e-6 && oracle_agrees && feasible_designs > 1000 && elapsed < 300.0;
}

bool criterion5(const std::vector<Instance>& family, std::string& note) {
  Stopwatch timer;
  std::mt19937_64 rng(505);
  double worst_gap = 0.0;
  long verdict_mismatches = 0;
  long violated_seen = 0;

  for (const Instance& inst : family) {
    const int n = inst.network.graph.num_nodes();
    const int m = inst.network.graph.num_arcs();
    std::vector<double> x(static_cast<std::size_t>(m));
    for (int trial = 0; trial < 50; ++trial) {
      for (double& v : x) v = uniform01(rng);
      SeparationOptions opt;
      opt.threads = 4;
      const SeparationResult res = separate(inst, x, opt);
      const potflow_test::OracleSeparation ref = potflow_test::oracle_separate(inst, x, n - 1);
      const bool ref_violated = ref.best_g < -opt.tolerance;
      if (res.violated != ref_violated) ++verdict_mismatches;
      worst_gap = std::max(worst_gap, std::abs(res.best_g - ref.best_g));
      if (res.violated) ++violated_seen;
    }
  }
  const double elapsed = timer.seconds();
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "%zu x 50 vectors, verdict mismatches %ld, max |best-g diff| %.2e, %ld violated, %.1fs",
                family.size(), verdict_mismatches, worst_gap, violated_seen, elapsed);
  note = buf;
  return verdict_mismatches == 0 && worst_gap <= 1e-7 && violated_seen > 100;
}

bool criterion6(const std::vector<Instance>& family, std::string& note) {
  Stopwatch timer;
  std::mt19937_64 rng(606);
  long accepted = 0, closure_failures = 0;
  double worst_violation = 0.0;
  long attempts = 0;

  while (accepted < 1000 && attempts < 200000) {
    ++attempts;
    const Instance& inst = family[static_cast<std::size_t>(rng() % family.size())];
    const int n = inst.network.graph.num_nodes();
    const int m = inst.network.graph.num_arcs();
    std::vector<double> w(static_cast<std::size_t>(m));
    for (int a = 0; a < m; ++a) w[static_cast<std::size_t>(a)] = inst.network.conductance(a) * uniform01(rng);
    const NodeSet terminals = inst.terminals();
    const auto random_subset = [&] {
      std::vector<NodeId> xs;
      for (NodeId v : terminals)
        if (rng() % 2) xs.push_back(v);
      return make_node_set(std::move(xs));
    };
    const NodeSet xset = random_subset();
    const NodeSet yset = random_subset();
    const int k = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(n - 1));
    const double sx = sigma_k(inst, xset, w, k);
    const double sy = sigma_k(inst, yset, w, k);
    if (sx == kInf || sy == kInf) continue;  // outside the admissible family
    ++accepted;
    const double su = sigma_k(inst, set_union(xset, yset), w, k);
    const double si = sigma_k(inst, set_intersection(xset, yset), w, k);
    if (su == kInf || si == kInf) {
      ++closure_failures;
      continue;
    }
    worst_violation = std::max(worst_violation, (su + si) - (sx + sy));
  }
  const double elapsed = timer.seconds();
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "%ld triples (of %ld sampled), closure failures %ld, max submodularity violation %.2e, %.1fs",
                accepted, attempts, closure_failures, worst_violation, elapsed);
  note = buf;
  return accepted >= 1000 && closure_failures == 0 && worst_violation <= 1e-9;
}

bool criterion7(std::string& note) {
  Stopwatch timer;
  std::mt19937_64 rng(707);
  long status_mismatches = 0, cost_mismatches = 0, optimal_seen = 0, infeasible_seen = 0;

  for (int trial = 0; trial < 100; ++trial) {
    Instance inst = random_family_instance(rng, 14, false);
    if (trial % 3 == 2) inst.pressure_bound *= 0.4;  // force some infeasible instances
    const SolveOutcome brute = solve_bruteforce(inst);
    SolverConfig cfg;
    cfg.threads = 2;
    const SolveOutcome bnc = solve_branch_and_cut(inst, cfg);
    if (brute.status != bnc.status) {
      ++status_mismatches;
      continue;
    }
    if (brute.status == SolveStatus::Optimal) {
      ++optimal_seen;
      const double scale = std::max(1.0, std::abs(brute.best_cost));
      if (std::abs(brute.best_cost - bnc.best_cost) > 1e-6 * scale) ++cost_mismatches;
      if (!check_feasibility(inst, bnc.best_x).feasible) ++cost_mismatches;
    } else {
      ++infeasible_seen;
    }
  }
  const double elapsed = timer.seconds();
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "100 instances (%ld optimal, %ld infeasible), status mismatches %ld, cost mismatches %ld, %.1fs",
                optimal_seen, infeasible_seen, status_mismatches, cost_mismatches, elapsed);
  note = buf;
  return status_mismatches == 0 && cost_mismatches == 0 && optimal_seen > 30 &&
         infeasible_seen > 5 && elapsed < 600.0;
}

bool criterion8(std::string& note) {
  Stopwatch timer;
  long cuts_root_closed = 0, nocuts_branched = 0, agreements = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    GeneratorSpec spec;
    spec.seed = seed;
    const Instance inst = generate_multipath(spec);

    SolverConfig with_cuts;
    with_cuts.k_max = 8;
    with_cuts.threads = 2;
    const SolveOutcome a = solve_branch_and_cut(inst, with_cuts);

    SolverConfig no_cuts;
    no_cuts.cuts_enabled = false;
    no_cuts.threads = 2;
    const SolveOutcome b = solve_branch_and_cut(inst, no_cuts);

    if (a.status == SolveStatus::Optimal && a.stats.nodes == 0) ++cuts_root_closed;
    if (b.status == SolveStatus::Optimal && b.stats.nodes >= 1) ++nocuts_branched;
    if (a.status == SolveStatus::Optimal && b.status == SolveStatus::Optimal &&
        std::abs(a.best_cost - b.best_cost) <= 1e-6 * std::max(1.0, std::abs(a.best_cost)))
      ++agreements;
  }
  const double elapsed = timer.seconds();
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "20 seeds: %ld root-closed with cuts (k=8), %ld branched without, %ld cost agreements, %.1fs",
                cuts_root_closed, nocuts_branched, agreements, elapsed);
  note = buf;
  return cuts_root_closed == 20 && nocuts_branched == 20 && agreements == 20;
}

bool criterion9(std::string& note) {
  Stopwatch timer;
  std::mt19937_64 rng(909);
  long scaling_violations = 0, extremal_violations = 0, monotonicity_violations = 0;
  long deletion_checks = 0;

  for (int trial = 0; trial < 200; ++trial) {
    const Instance inst = random_family_instance(rng, 12, false);
    const Network& net = inst.network;
    const int n = net.graph.num_nodes();
    const double r = net.degree_r;

    const FlowState base = solve_transshipment(net, inst.balance);
    double spread = 0.0;
    for (double p : base.potential) spread = std::max(spread, p);

    for (const double lambda : {0.5, 2.0, 10.0}) {
      std::vector<double> scaled_b(inst.balance);
      for (double& b : scaled_b) b *= lambda;
      const FlowState scaled = solve_transshipment(net, scaled_b);
      const double factor = std::pow(lambda, r);
      const double tol = 1e-7 * std::max(factor * spread, 1e-9);
      for (int v = 0; v < n; ++v)
        if (std::abs(scaled.potential[static_cast<std::size_t>(v)] -
                     factor * base.potential[static_cast<std::size_t>(v)]) > tol)
          ++scaling_violations;
    }

    double max_pi = -kInf, min_pi = kInf, max_entry = -kInf, min_exit = kInf;
    for (int v = 0; v < n; ++v) {
      const double p = base.potential[static_cast<std::size_t>(v)];
      max_pi = std::max(max_pi, p);
      min_pi = std::min(min_pi, p);
      if (inst.balance[static_cast<std::size_t>(v)] > 0.0) max_entry = std::max(max_entry, p);
      if (inst.balance[static_cast<std::size_t>(v)] < 0.0) min_exit = std::min(min_exit, p);
    }
    const double tol = 1e-9 * (1.0 + spread);
    if (std::abs(max_pi - max_entry) > tol || std::abs(min_pi - min_exit) > tol)
      ++extremal_violations;

    // Two-terminal resistance between any fixed node pair can only grow when
    // an arc is removed, independent of the instance's full terminal set.
    const NodeId s = inst.entries.front(), t = inst.exits.front();
    const double base_r = effective_resistance(net, s, t);
    for (ArcId a = 0; a < net.graph.num_arcs(); ++a) {
      ++deletion_checks;
      try {
        const double reduced = effective_resistance(delete_arc(net, a), s, t);
        if (reduced < base_r * (1.0 - 1e-9) - 1e-12) ++monotonicity_violations;
      } catch (const Error&) {
        // Deletion disconnected the terminals: resistance is infinite.
      }
    }
  }
  const double elapsed = timer.seconds();
  char buf[220];
  std::snprintf(buf, sizeof buf,
                "200 networks: scaling violations %ld, extremal violations %ld, deletion violations %ld (%ld checks), %.1fs",
                scaling_violations, extremal_violations, monotonicity_violations, deletion_checks,
                elapsed);
  note = buf;
  return scaling_violations == 0 && extremal_violations == 0 && monotonicity_violations == 0 &&
         deletion_checks > 500;
}

bool criterion10(std::string& note) {
  Stopwatch timer;
  std::mt19937_64 rng(1010);
  long solved = 0, fractional = 0, gap_failures = 0, attempts = 0;
  double worst_frac = 0.0, worst_gap = 0.0;

  while (solved < 500 && attempts < 20000) {
    ++attempts;
    const Instance inst = random_family_instance(rng, 12, true);
    const int m = inst.network.graph.num_arcs();
    std::vector<double> w(static_cast<std::size_t>(m));
    for (double& v : w) v = (rng() % 4 == 0) ? 0.0 : uniform01(rng);

    const NodeSet terminals = inst.terminals();
    std::vector<NodeId> xs;
    for (NodeId v : terminals)
      if (rng() % 2) xs.push_back(v);
    const NodeSet x_set = make_node_set(std::move(xs));
    if (set_intersection(x_set, inst.entries).empty() ||
        set_difference(inst.exits, x_set).empty())
      continue;

    const WeightedCutGraph cg = make_cut_graph(inst, x_set, w);
    const int k = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(cg.num_nodes));
    const KCutLp kcut = build_k_cut_lp(cg, k);
    const LpSolution sol = solve_lp(kcut.lp);
    if (sol.status != LpStatus::Optimal) continue;
    ++solved;
    for (double v : sol.primal) {
      const double frac = std::abs(v - std::round(v));
      worst_frac = std::max(worst_frac, frac);
      if (frac > 1e-7) ++fractional;
    }
    const double gap_tol = 1e-7 * (1.0 + std::abs(sol.objective));
    worst_gap = std::max(worst_gap, sol.duality_gap);
    if (sol.duality_gap > gap_tol) ++gap_failures;
  }
  const double elapsed = timer.seconds();
  char buf[220];
  std::snprintf(buf, sizeof buf,
                "%ld LPs solved (of %ld tries): max fractionality %.2e, fractional vars %ld, max duality gap %.2e, failures %ld, %.1fs",
                solved, attempts, worst_frac, fractional, worst_gap, gap_failures, elapsed);
  note = buf;
  return solved >= 500 && fractional == 0 && gap_failures == 0;
}

}  // namespace

int main() {
  struct Criterion {
    const char* title;
    bool passed;
    std::string note;
  };
  std::vector<Criterion> results;

  const std::vector<Instance> family = make_family(100, 12, true, 404);

  const auto run = [&results](const char* title, auto&& fn) {
    std::string criterion_note;
    bool ok = false;
    try {
      ok = fn(criterion_note);
    } catch (const std::exception& e) {
      criterion_note = std::string("exception: ") + e.what();
    }
    results.push_back({title, ok, criterion_note});
    std::printf("[%s] %s — %s\n", ok ? "PASS" : "FAIL", title, criterion_note.c_str());
    std::fflush(stdout);
  };

  run("1. closed-form multi-path conductance matches the flow solver",
      [](std::string& n) { return criterion1(n); });
  run("2. parallel-arc bottleneck: throughput, feasibility flips, two-cut inequality",
      [](std::string& n) { return criterion2(n); });
  run("3. confluence regression: sigma values and non-submodularity",
      [](std::string& n) { return criterion3(n); });
  run("4. validity sweep: every feasible design satisfies every chain inequality",
      [&family](std::string& n) { return criterion4(family, n); });
  run("5. separation equivalence against exhaustive enumeration",
      [&family](std::string& n) { return criterion5(family, n); });
  run("6. fixed-k submodularity and union/intersection closure",
      [&family](std::string& n) { return criterion6(family, n); });
  run("7. branch-and-cut matches brute force on guarded instances",
      [](std::string& n) { return criterion7(n); });
  run("8. path instances: cuts close the root, branching without",
      [](std::string& n) { return criterion8(n); });
  run("9. physics: scaling law, extremal potentials, deletion monotonicity",
      [](std::string& n) { return criterion9(n); });
  run("10. k-cut LPs: integral vertices, matching primal/dual objectives",
      [](std::string& n) { return criterion10(n); });

  int failures = 0;
  for (const Criterion& c : results)
    if (!c.passed) ++failures;
  std::printf("%d/%zu criteria passed\n", static_cast<int>(results.size()) - failures,
              results.size());
  return failures;
}
