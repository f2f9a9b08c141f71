#pragma once

// Command-line front end: generate / solve / check / separate / reduce /
// stats, with table, CSV, or JSON output.  run_cli is process-free so tests
// can drive it in-memory; main() is a thin wrapper.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "potflow/potflow.hpp"

namespace potflow_cli {

// Exit codes shared by every subcommand.
constexpr int kExitOk = 0;          // ran fine / feasible / optimal
constexpr int kExitInfeasible = 1;  // proven infeasible design or instance
constexpr int kExitLimit = 2;       // node or time limit reached first
constexpr int kExitInput = 3;       // bad arguments, files, or documents
constexpr int kExitNumerical = 4;   // internal numerical failure

namespace detail {

inline std::string read_text_file(const std::string& path, std::istream& in_stream) {
  std::ostringstream ss;
  if (path == "-") {
    ss << in_stream.rdbuf();
    return ss.str();
  }
  std::ifstream file(path, std::ios::binary);
  if (!file) throw potflow::Error("cannot open file '" + path + "'");
  ss << file.rdbuf();
  return ss.str();
}

inline void write_text_output(const std::string& path, const std::string& text,
                              std::ostream& out_stream) {
  if (path.empty() || path == "-") {
    out_stream << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw potflow::Error("cannot write file '" + path + "'");
  file << text;
}

inline std::string fmt(double v) { return potflow::detail::shortest_double(v); }

inline std::string fmt_fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

inline std::string node_label(const potflow::Instance& inst, potflow::NodeId v) {
  return inst.node_names.empty() ? "n" + std::to_string(v)
                                 : inst.node_names[static_cast<std::size_t>(v)];
}

inline std::string arc_label(const potflow::Instance& inst, potflow::ArcId a) {
  return inst.arc_names.empty() ? "a" + std::to_string(a)
                                : inst.arc_names[static_cast<std::size_t>(a)];
}

inline std::string set_label(const potflow::Instance& inst, const potflow::NodeSet& set) {
  std::string out = "{";
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (i) out += " ";
    out += node_label(inst, set[i]);
  }
  return out + "}";
}

inline potflow::NodeId node_by_name(const potflow::Instance& inst, const std::string& name) {
  const int n = inst.network.graph.num_nodes();
  for (potflow::NodeId v = 0; v < n; ++v)
    if (node_label(inst, v) == name) return v;
  throw potflow::Error("unknown node '" + name + "'");
}

inline const char* status_word(potflow::SolveStatus s) {
  switch (s) {
    case potflow::SolveStatus::Optimal: return "optimal";
    case potflow::SolveStatus::Infeasible: return "infeasible";
    default: return "limit";
  }
}

inline int status_exit_code(potflow::SolveStatus s) {
  switch (s) {
    case potflow::SolveStatus::Optimal: return kExitOk;
    case potflow::SolveStatus::Infeasible: return kExitInfeasible;
    default: return kExitLimit;
  }
}

inline double overall_spread(const potflow::FeasibilityReport& report) {
  double spread = 0.0;
  for (const auto& comp : report.components) spread = std::max(spread, comp.spread);
  return spread;
}

}  // namespace detail

// Runs one CLI invocation.  `args` excludes the program name; normal output
// goes to `out`, diagnostics to `err`, and `-` file arguments read from `in`.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
                   std::istream& in = std::cin) {
  using potflow::Instance;
  using nlohmann::json;

  CLI::App app{"cost-minimal design of potential-based flow networks"};
  app.require_subcommand(1);
  int rc = kExitOk;

  // --- generate ------------------------------------------------------------
  potflow::GeneratorSpec spec;
  std::string gen_output = "-";
  auto* gen = app.add_subcommand("generate", "write a synthetic instance document");
  gen->add_option("--kind", spec.kind, "instance family")
      ->check(CLI::IsMember({"multipath", "random"}));
  gen->add_option("--segments", spec.segments, "multipath: series segments");
  gen->add_option("--options", spec.options, "multipath: pipe options per segment");
  gen->add_option("--nodes", spec.nodes, "random: node count");
  gen->add_option("--extra-arcs", spec.extra_arcs, "random: arcs beyond a spanning tree");
  gen->add_option("--beta-lo", spec.beta_lo, "random: smallest resistance coefficient");
  gen->add_option("--beta-hi", spec.beta_hi, "random: largest resistance coefficient");
  gen->add_option("--alpha0", spec.alpha0, "multipath: fixed cost per unit length");
  gen->add_option("--alpha1", spec.alpha1, "multipath: diameter-squared cost per unit length");
  gen->add_option("--demand", spec.demand, "entry-to-exit demand");
  gen->add_option("--degree", spec.degree_r, "potential-loss exponent r");
  gen->add_option("--pressure-bound", spec.pressure_bound, "0 derives a calibrated bound");
  gen->add_option("--seed", spec.seed, "RNG seed; output is byte-identical per (spec, seed)");
  gen->add_option("-o,--output", gen_output, "output path, '-' for stdout");
  gen->callback([&] {
    detail::write_text_output(gen_output, potflow::serialize_instance(potflow::generate(spec)),
                              out);
  });

  // --- solve ---------------------------------------------------------------
  std::string solve_path, solve_format = "table";
  potflow::SolverConfig cfg;
  bool no_cuts = false, brute = false;
  auto* solve = app.add_subcommand("solve", "minimize design cost subject to feasibility");
  solve->add_option("instance", solve_path, "instance document, '-' for stdin")->required();
  solve->add_flag("--no-cuts", no_cuts, "branch on no-good exclusions only");
  solve->add_flag("--brute-force", brute, "enumerate all designs (small instances)");
  solve->add_option("--k-max", cfg.k_max, "largest chain length tried (0 = auto)");
  solve->add_option("--fixed-k", cfg.fixed_k, "separate only chains of exactly this length");
  solve->add_option("--time-limit", cfg.time_limit, "seconds before reporting limit");
  solve->add_option("--node-limit", cfg.node_limit, "tree-node budget before reporting limit");
  solve->add_option("--threads", cfg.threads, "separation worker threads");
  solve->add_option("--format", solve_format, "table|csv|json")
      ->check(CLI::IsMember({"table", "csv", "json"}));
  solve->callback([&] {
    const Instance inst = potflow::parse_instance(detail::read_text_file(solve_path, in));
    cfg.cuts_enabled = !no_cuts;
    const auto t0 = std::chrono::steady_clock::now();
    const potflow::SolveOutcome res =
        brute ? potflow::solve_bruteforce(inst) : potflow::solve_branch_and_cut(inst, cfg);
    const double time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool cuts_used = !brute && cfg.cuts_enabled;
    const double gap_pct = 100.0 * res.gap();

    if (solve_format == "csv") {
      out << "instance,cuts_enabled,k_max,pi_bar,time_s,nodes,gap_pct\n"
          << solve_path << "," << (cuts_used ? "true" : "false") << "," << cfg.k_max << ","
          << detail::fmt(inst.pressure_bound) << "," << detail::fmt_fixed(time_s, 6) << ","
          << res.stats.nodes << "," << detail::fmt(gap_pct) << "\n";
    } else if (solve_format == "json") {
      json j;
      j["instance"] = solve_path;
      j["status"] = detail::status_word(res.status);
      j["cuts_enabled"] = cuts_used;
      j["k_max"] = cfg.k_max;
      j["pi_bar"] = inst.pressure_bound;
      j["time_s"] = time_s;
      j["nodes"] = res.stats.nodes;
      j["gap_pct"] = res.has_incumbent ? json(gap_pct) : json();
      j["cost"] = res.has_incumbent ? json(res.best_cost) : json();
      j["dual_bound"] = res.dual_bound;
      j["lp_solves"] = res.stats.lp_solves;
      j["separation_calls"] = res.stats.separation_calls;
      j["cuts_added"] = res.stats.cuts_added;
      j["no_goods_added"] = res.stats.no_goods_added;
      j["feasibility_checks"] = res.stats.feasibility_checks;
      json design = json::array();
      if (res.has_incumbent)
        for (potflow::ArcId a = 0; a < inst.network.graph.num_arcs(); ++a)
          if (res.best_x[static_cast<std::size_t>(a)] > 0.5) design.push_back(detail::arc_label(inst, a));
      j["design"] = std::move(design);
      out << j.dump(2) << "\n";
    } else {
      out << "instance " << solve_path << "\n";
      out << "status " << detail::status_word(res.status) << "\n";
      if (res.has_incumbent) {
        out << "cost " << detail::fmt(res.best_cost) << "\n";
        out << "design";
        for (potflow::ArcId a = 0; a < inst.network.graph.num_arcs(); ++a)
          if (res.best_x[static_cast<std::size_t>(a)] > 0.5) out << " " << detail::arc_label(inst, a);
        out << "\n";
        out << "gap-pct " << detail::fmt(gap_pct) << "\n";
      }
      out << "dual-bound " << detail::fmt(res.dual_bound) << "\n";
      out << "nodes " << res.stats.nodes << "\n";
      out << "lp-solves " << res.stats.lp_solves << "\n";
      out << "separation-calls " << res.stats.separation_calls << "\n";
      out << "cuts-added " << res.stats.cuts_added << "\n";
      out << "no-goods-added " << res.stats.no_goods_added << "\n";
      out << "feasibility-checks " << res.stats.feasibility_checks << "\n";
      out << "time-s " << detail::fmt_fixed(time_s, 3) << "\n";
    }
    rc = detail::status_exit_code(res.status);
  });

  // --- check ---------------------------------------------------------------
  std::string check_path, check_x, check_format = "table";
  auto* check = app.add_subcommand("check", "test a design vector for feasibility");
  check->add_option("instance", check_path, "instance document, '-' for stdin")->required();
  check->add_option("--x", check_x, "design-vector file (default: build every arc)");
  check->add_option("--format", check_format, "table|csv|json")
      ->check(CLI::IsMember({"table", "csv", "json"}));
  check->callback([&] {
    const Instance inst = potflow::parse_instance(detail::read_text_file(check_path, in));
    const int m = inst.network.graph.num_arcs();
    const std::vector<double> x =
        check_x.empty()
            ? std::vector<double>(static_cast<std::size_t>(m), 1.0)
            : potflow::parse_design_vector(detail::read_text_file(check_x, in), inst);
    const potflow::FeasibilityReport report = potflow::check_feasibility(inst, x);
    const double spread = detail::overall_spread(report);
    const double bound = inst.global_pressure_bound();

    if (check_format == "json") {
      json j;
      j["feasible"] = report.feasible;
      j["spread"] = spread;
      j["pi_bar"] = bound;
      if (!report.feasible) j["reason"] = report.reason;
      if (report.feasible) {
        json pot = json::object(), flow = json::object();
        for (potflow::NodeId v = 0; v < inst.network.graph.num_nodes(); ++v)
          pot[detail::node_label(inst, v)] = report.state.potential[static_cast<std::size_t>(v)];
        for (potflow::ArcId a = 0; a < m; ++a)
          if (x[static_cast<std::size_t>(a)] > 0.0)
            flow[detail::arc_label(inst, a)] = report.state.flow[static_cast<std::size_t>(a)];
        j["potential"] = std::move(pot);
        j["flow"] = std::move(flow);
      }
      out << j.dump(2) << "\n";
    } else if (check_format == "csv") {
      out << "feasible,spread,pi_bar\n"
          << (report.feasible ? "true" : "false") << "," << detail::fmt(spread) << ","
          << detail::fmt(bound) << "\n";
    } else {
      if (report.feasible) {
        out << "feasible, spread " << detail::fmt(spread) << " <= pi-bar " << detail::fmt(bound)
            << "\n";
        for (potflow::NodeId v = 0; v < inst.network.graph.num_nodes(); ++v)
          out << "potential " << detail::node_label(inst, v) << " "
              << detail::fmt(report.state.potential[static_cast<std::size_t>(v)]) << "\n";
        for (potflow::ArcId a = 0; a < m; ++a)
          if (x[static_cast<std::size_t>(a)] > 0.0)
            out << "flow " << detail::arc_label(inst, a) << " "
                << detail::fmt(report.state.flow[static_cast<std::size_t>(a)]) << "\n";
      } else {
        out << "infeasible: " << report.reason << "\n";
      }
    }
    rc = report.feasible ? kExitOk : kExitInfeasible;
  });

  // --- separate ------------------------------------------------------------
  std::string sep_path, sep_x, sep_format = "table";
  potflow::SeparationOptions sep_opt;
  auto* sep = app.add_subcommand("separate", "search disjoint-cut inequalities violated by x");
  sep->add_option("instance", sep_path, "instance document, '-' for stdin")->required();
  sep->add_option("--x", sep_x, "design-vector file (fractional values allowed)")->required();
  sep->add_option("--k-max", sep_opt.k_max, "largest chain length tried (0 = auto)");
  sep->add_option("--fixed-k", sep_opt.fixed_k, "only chains of exactly this length");
  sep->add_option("--tolerance", sep_opt.tolerance, "violation threshold");
  sep->add_option("--threads", sep_opt.threads, "worker threads over terminal subsets");
  sep->add_option("--format", sep_format, "table|csv|json")
      ->check(CLI::IsMember({"table", "csv", "json"}));
  sep->callback([&] {
    const Instance inst = potflow::parse_instance(detail::read_text_file(sep_path, in));
    const std::vector<double> x =
        potflow::parse_design_vector(detail::read_text_file(sep_x, in), inst);
    const potflow::SeparationResult res = potflow::separate(inst, x, sep_opt);

    if (sep_format == "json") {
      json j;
      j["violated"] = res.violated;
      j["best_g"] = res.best_g;
      j["best_k"] = res.best_k;
      json bx = json::array();
      for (potflow::NodeId v : res.best_x) bx.push_back(detail::node_label(inst, v));
      j["best_x"] = std::move(bx);
      json cands = json::array();
      for (const auto& c : res.candidates) {
        json jc;
        jc["k"] = c.k;
        json xs = json::array();
        for (potflow::NodeId v : c.x_set) xs.push_back(detail::node_label(inst, v));
        jc["X"] = std::move(xs);
        jc["sigma"] = c.sigma;
        jc["g"] = c.g;
        cands.push_back(std::move(jc));
      }
      j["candidates"] = std::move(cands);
      json cuts = json::array();
      for (const auto& cut : res.violated_cuts) cuts.push_back(potflow::cut_to_line(inst, cut));
      j["cuts"] = std::move(cuts);
      out << j.dump(2) << "\n";
    } else if (sep_format == "csv") {
      out << "k,X,sigma,g\n";
      for (const auto& c : res.candidates) {
        out << c.k << ",\"";
        for (std::size_t i = 0; i < c.x_set.size(); ++i)
          out << (i ? " " : "") << detail::node_label(inst, c.x_set[i]);
        out << "\"," << detail::fmt(c.sigma) << "," << detail::fmt(c.g) << "\n";
      }
    } else {
      for (const auto& c : res.candidates)
        out << "candidate k " << c.k << " X " << detail::set_label(inst, c.x_set) << " sigma "
            << detail::fmt(c.sigma) << " g " << detail::fmt(c.g) << "\n";
      out << "violated " << res.violated_cuts.size() << "\n";
      for (const auto& cut : res.violated_cuts) out << "cut " << potflow::cut_to_line(inst, cut) << "\n";
      if (res.violated)
        out << "best g " << detail::fmt(res.best_g) << " k " << res.best_k << " X "
            << detail::set_label(inst, res.best_x) << "\n";
    }
  });

  // --- reduce --------------------------------------------------------------
  std::string red_path, red_s, red_t, red_format = "table";
  auto* red = app.add_subcommand("reduce", "effective resistance between two nodes");
  red->add_option("instance", red_path, "instance document, '-' for stdin")->required();
  red->add_option("source", red_s, "first node name")->required();
  red->add_option("target", red_t, "second node name")->required();
  red->add_option("--format", red_format, "table|csv|json")
      ->check(CLI::IsMember({"table", "csv", "json"}));
  red->callback([&] {
    const Instance inst = potflow::parse_instance(detail::read_text_file(red_path, in));
    const potflow::NodeId s = detail::node_by_name(inst, red_s);
    const potflow::NodeId t = detail::node_by_name(inst, red_t);
    if (s == t) throw potflow::Error("reduce needs two distinct nodes");
    const double resistance = potflow::effective_resistance(inst.network, s, t);
    const double conductance = potflow::effective_conductance(inst.network, s, t);
    if (red_format == "json") {
      json j;
      j["source"] = red_s;
      j["target"] = red_t;
      j["resistance"] = resistance;
      j["conductance"] = conductance;
      out << j.dump(2) << "\n";
    } else if (red_format == "csv") {
      out << "source,target,resistance,conductance\n"
          << red_s << "," << red_t << "," << detail::fmt(resistance) << ","
          << detail::fmt(conductance) << "\n";
    } else {
      out << "effective-resistance " << detail::fmt(resistance) << "\n";
      out << "effective-conductance " << detail::fmt(conductance) << "\n";
    }
  });

  // --- stats ---------------------------------------------------------------
  std::string stats_path, stats_format = "table";
  auto* stats = app.add_subcommand("stats", "summarize an instance document");
  stats->add_option("instance", stats_path, "instance document, '-' for stdin")->required();
  stats->add_option("--format", stats_format, "table|csv|json")
      ->check(CLI::IsMember({"table", "csv", "json"}));
  stats->callback([&] {
    const Instance inst = potflow::parse_instance(detail::read_text_file(stats_path, in));
    const int n = inst.network.graph.num_nodes();
    const int m = inst.network.graph.num_arcs();
    double demand = 0.0, total_cost = 0.0;
    for (double b : inst.balance) demand += std::max(b, 0.0);
    double beta_lo = std::numeric_limits<double>::infinity(), beta_hi = 0.0;
    for (double b : inst.network.beta) {
      beta_lo = std::min(beta_lo, b);
      beta_hi = std::max(beta_hi, b);
    }
    for (double c : inst.cost) total_cost += c;
    const std::vector<std::pair<std::string, std::string>> rows = {
        {"nodes", std::to_string(n)},
        {"arcs", std::to_string(m)},
        {"entries", detail::set_label(inst, inst.entries)},
        {"exits", detail::set_label(inst, inst.exits)},
        {"degree", detail::fmt(inst.network.degree_r)},
        {"pi-bar", detail::fmt(inst.pressure_bound)},
        {"individual-bounds", inst.has_individual_bounds() ? "true" : "false"},
        {"total-demand", detail::fmt(demand)},
        {"beta-min", detail::fmt(beta_lo)},
        {"beta-max", detail::fmt(beta_hi)},
        {"total-cost", detail::fmt(total_cost)},
        {"connected", inst.network.graph.is_weakly_connected() ? "true" : "false"},
    };
    if (stats_format == "json") {
      json j;
      for (const auto& [key, value] : rows) j[key] = value;
      out << j.dump(2) << "\n";
    } else if (stats_format == "csv") {
      out << "key,value\n";
      for (const auto& [key, value] : rows) out << key << ",\"" << value << "\"\n";
    } else {
      for (const auto& [key, value] : rows) out << key << " " << value << "\n";
    }
  });

  // --- dispatch --------------------------------------------------------------
  std::vector<std::string> argv_strings;
  argv_strings.reserve(args.size() + 1);
  argv_strings.emplace_back("potflow");
  argv_strings.insert(argv_strings.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  argv.reserve(argv_strings.size());
  for (const std::string& s : argv_strings) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  } catch (const potflow::NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const potflow::Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return rc;
}

}  // namespace potflow_cli
