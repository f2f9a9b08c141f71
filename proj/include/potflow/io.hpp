#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "potflow/flow.hpp"
#include "potflow/graph.hpp"
#include "potflow/instance.hpp"

namespace potflow {

// Parse failure with a 1-based line number.
struct ParseError : Error {
  int line;
  ParseError(int line_number, const std::string& what)
      : Error("line " + std::to_string(line_number) + ": " + what), line(line_number) {}
};

namespace detail {

// Shortest decimal form that parses back to exactly the same double.
inline std::string shortest_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline double parse_double_token(const std::string& tok, int line, const char* what) {
  double v = 0.0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
    throw ParseError(line, std::string("bad ") + what + " '" + tok + "'");
  return v;
}

inline std::vector<std::string> split_tokens(std::string_view line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.emplace_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace detail

// Reads the line-based instance document:
//
//   potflow 1
//   degree <r>
//   pressure-bound <value>
//   node <name> [bounds <lo> <hi>]
//   arc <name> <tail> <head> beta <value> cost <value> [diameter <d> length <l>]
//   entry <name> <supply>        (supply >= 0)
//   exit <name> <consumption>    (consumption >= 0; stored negated)
//
// '#' starts a comment; names must be declared before they are referenced.
// The parsed instance is validated structurally before it is returned.
inline Instance parse_instance(const std::string& text) {
  Instance inst;
  std::vector<Arc> arcs;
  std::map<std::string, NodeId> node_ids;
  std::map<std::string, ArcId> arc_ids;
  std::vector<double> lo, hi;
  bool any_bounds = false;
  bool saw_header = false, saw_degree = false, saw_bound = false;
  std::vector<std::pair<NodeId, double>> terminal_values;  // +supply / -consumption
  std::vector<bool> is_entry_line;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    std::string_view raw(text.data() + pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (const std::size_t hash = raw.find('#'); hash != std::string_view::npos)
      raw = raw.substr(0, hash);
    const std::vector<std::string> tok = detail::split_tokens(raw);
    if (tok.empty()) {
      if (eol == text.size()) break;
      continue;
    }

    if (!saw_header) {
      if (tok.size() != 2 || tok[0] != "potflow" || tok[1] != "1")
        throw ParseError(line_no, "expected header 'potflow 1'");
      saw_header = true;
    } else if (tok[0] == "degree") {
      if (saw_degree) throw ParseError(line_no, "duplicate degree line");
      if (tok.size() != 2) throw ParseError(line_no, "usage: degree <r>");
      inst.network.degree_r = detail::parse_double_token(tok[1], line_no, "degree");
      saw_degree = true;
    } else if (tok[0] == "pressure-bound") {
      if (saw_bound) throw ParseError(line_no, "duplicate pressure-bound line");
      if (tok.size() != 2) throw ParseError(line_no, "usage: pressure-bound <value>");
      inst.pressure_bound = detail::parse_double_token(tok[1], line_no, "pressure bound");
      saw_bound = true;
    } else if (tok[0] == "node") {
      if (tok.size() != 2 && !(tok.size() == 5 && tok[2] == "bounds"))
        throw ParseError(line_no, "usage: node <name> [bounds <lo> <hi>]");
      if (node_ids.count(tok[1])) throw ParseError(line_no, "duplicate node '" + tok[1] + "'");
      node_ids[tok[1]] = static_cast<NodeId>(inst.node_names.size());
      inst.node_names.push_back(tok[1]);
      if (tok.size() == 5) {
        any_bounds = true;
        lo.push_back(detail::parse_double_token(tok[3], line_no, "lower bound"));
        hi.push_back(detail::parse_double_token(tok[4], line_no, "upper bound"));
      } else {
        lo.push_back(std::nan(""));
        hi.push_back(std::nan(""));
      }
    } else if (tok[0] == "arc") {
      if (tok.size() != 8 && tok.size() != 12)
        throw ParseError(line_no,
                         "usage: arc <name> <tail> <head> beta <v> cost <v> [diameter <v> length <v>]");
      if (tok[4] != "beta") throw ParseError(line_no, "expected 'beta', got '" + tok[4] + "'");
      if (tok[6] != "cost") throw ParseError(line_no, "expected 'cost', got '" + tok[6] + "'");
      if (arc_ids.count(tok[1])) throw ParseError(line_no, "duplicate arc '" + tok[1] + "'");
      const auto tail = node_ids.find(tok[2]);
      const auto head = node_ids.find(tok[3]);
      if (tail == node_ids.end()) throw ParseError(line_no, "unknown tail node '" + tok[2] + "'");
      if (head == node_ids.end()) throw ParseError(line_no, "unknown head node '" + tok[3] + "'");
      arc_ids[tok[1]] = static_cast<ArcId>(inst.arc_names.size());
      inst.arc_names.push_back(tok[1]);
      arcs.push_back({tail->second, head->second});
      inst.network.beta.push_back(detail::parse_double_token(tok[5], line_no, "beta"));
      inst.cost.push_back(detail::parse_double_token(tok[7], line_no, "cost"));
      if (tok.size() == 12) {
        if (tok[8] != "diameter")
          throw ParseError(line_no, "expected 'diameter', got '" + tok[8] + "'");
        if (tok[10] != "length") throw ParseError(line_no, "expected 'length', got '" + tok[10] + "'");
        inst.arc_diameter.resize(inst.arc_names.size(), 0.0);
        inst.arc_length.resize(inst.arc_names.size(), 0.0);
        inst.arc_diameter.back() = detail::parse_double_token(tok[9], line_no, "diameter");
        inst.arc_length.back() = detail::parse_double_token(tok[11], line_no, "length");
      } else if (!inst.arc_diameter.empty()) {
        inst.arc_diameter.resize(inst.arc_names.size(), 0.0);
        inst.arc_length.resize(inst.arc_names.size(), 0.0);
      }
    } else if (tok[0] == "entry" || tok[0] == "exit") {
      if (tok.size() != 3) throw ParseError(line_no, "usage: " + tok[0] + " <node> <value>");
      const auto it = node_ids.find(tok[1]);
      if (it == node_ids.end()) throw ParseError(line_no, "unknown node '" + tok[1] + "'");
      const double v = detail::parse_double_token(tok[2], line_no, "terminal value");
      if (v < 0.0)
        throw ParseError(line_no, tok[0] + " value must be nonnegative (sign is implied)");
      const bool entry = tok[0] == "entry";
      NodeSet& side = entry ? inst.entries : inst.exits;
      if (set_contains(side, it->second))
        throw ParseError(line_no, "duplicate " + tok[0] + " for node '" + tok[1] + "'");
      side = set_union(side, {it->second});
      terminal_values.push_back({it->second, entry ? v : -v});
      is_entry_line.push_back(entry);
    } else {
      throw ParseError(line_no, "unknown directive '" + tok[0] + "'");
    }
    if (eol == text.size()) break;
  }

  if (!saw_header) throw ParseError(1, "empty document, expected header 'potflow 1'");
  if (!saw_degree) throw ParseError(line_no, "missing degree line");
  if (!saw_bound) throw ParseError(line_no, "missing pressure-bound line");

  const int n = static_cast<int>(inst.node_names.size());
  inst.network.graph = MultiGraph(n, std::move(arcs));
  inst.balance.assign(static_cast<std::size_t>(n), 0.0);
  for (const auto& [v, b] : terminal_values) inst.balance[static_cast<std::size_t>(v)] = b;
  if (any_bounds) {
    inst.potential_lo.resize(static_cast<std::size_t>(n));
    inst.potential_hi.resize(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
      const bool has = !std::isnan(lo[static_cast<std::size_t>(v)]);
      inst.potential_lo[static_cast<std::size_t>(v)] = has ? lo[static_cast<std::size_t>(v)] : 0.0;
      inst.potential_hi[static_cast<std::size_t>(v)] =
          has ? hi[static_cast<std::size_t>(v)] : inst.pressure_bound;
    }
  }

  const ValidationReport report = validate_instance(inst);
  if (!report.ok()) {
    std::string msg = "instance invalid:";
    for (const std::string& v : report.violations) msg += "\n  - " + v;
    throw ParseError(line_no, msg);
  }
  return inst;
}

// Canonical text form; parse(serialize(inst)) reproduces the instance
// bit-exactly (doubles use shortest round-trip form).
inline std::string serialize_instance(const Instance& inst) {
  const int n = inst.network.graph.num_nodes();
  const int m = inst.network.graph.num_arcs();
  const auto node_name = [&inst](NodeId v) {
    return inst.node_names.empty() ? "n" + std::to_string(v)
                                   : inst.node_names[static_cast<std::size_t>(v)];
  };
  const auto arc_name = [&inst](ArcId a) {
    return inst.arc_names.empty() ? "a" + std::to_string(a)
                                  : inst.arc_names[static_cast<std::size_t>(a)];
  };

  std::string out = "potflow 1\n";
  out += "degree " + detail::shortest_double(inst.network.degree_r) + "\n";
  out += "pressure-bound " + detail::shortest_double(inst.pressure_bound) + "\n";
  for (NodeId v = 0; v < n; ++v) {
    out += "node " + node_name(v);
    if (inst.has_individual_bounds())
      out += " bounds " + detail::shortest_double(inst.potential_lo[static_cast<std::size_t>(v)]) +
             " " + detail::shortest_double(inst.potential_hi[static_cast<std::size_t>(v)]);
    out += "\n";
  }
  for (ArcId a = 0; a < m; ++a) {
    const Arc& arc = inst.network.graph.arc(a);
    out += "arc " + arc_name(a) + " " + node_name(arc.tail) + " " + node_name(arc.head);
    out += " beta " + detail::shortest_double(inst.network.beta[static_cast<std::size_t>(a)]);
    out += " cost " + detail::shortest_double(inst.cost[static_cast<std::size_t>(a)]);
    if (!inst.arc_diameter.empty() && inst.arc_diameter[static_cast<std::size_t>(a)] > 0.0)
      out += " diameter " + detail::shortest_double(inst.arc_diameter[static_cast<std::size_t>(a)]) +
             " length " + detail::shortest_double(inst.arc_length[static_cast<std::size_t>(a)]);
    out += "\n";
  }
  for (NodeId v : inst.entries)
    out += "entry " + node_name(v) + " " +
           detail::shortest_double(inst.balance[static_cast<std::size_t>(v)]) + "\n";
  for (NodeId v : inst.exits)
    out += "exit " + node_name(v) + " " +
           detail::shortest_double(-inst.balance[static_cast<std::size_t>(v)]) + "\n";
  return out;
}

// Design-vector files: one "arc-name value" pair per line, '#' comments,
// arcs not mentioned default to 0.
inline std::vector<double> parse_design_vector(const std::string& text, const Instance& inst) {
  const int m = inst.network.graph.num_arcs();
  std::map<std::string, ArcId> arc_ids;
  for (ArcId a = 0; a < m; ++a)
    arc_ids[inst.arc_names.empty() ? "a" + std::to_string(a)
                                   : inst.arc_names[static_cast<std::size_t>(a)]] = a;

  std::vector<double> x(static_cast<std::size_t>(m), 0.0);
  std::vector<bool> seen(static_cast<std::size_t>(m), false);
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    std::string_view raw(text.data() + pos, eol - pos);
    const bool last = eol == text.size();
    pos = eol + 1;
    ++line_no;
    if (const std::size_t hash = raw.find('#'); hash != std::string_view::npos)
      raw = raw.substr(0, hash);
    const std::vector<std::string> tok = detail::split_tokens(raw);
    if (!tok.empty()) {
      if (tok.size() != 2) throw ParseError(line_no, "usage: <arc-name> <value>");
      const auto it = arc_ids.find(tok[0]);
      if (it == arc_ids.end()) throw ParseError(line_no, "unknown arc '" + tok[0] + "'");
      if (seen[static_cast<std::size_t>(it->second)])
        throw ParseError(line_no, "duplicate arc '" + tok[0] + "'");
      seen[static_cast<std::size_t>(it->second)] = true;
      x[static_cast<std::size_t>(it->second)] =
          detail::parse_double_token(tok[1], line_no, "design value");
    }
    if (last) break;
  }
  return x;
}

inline std::string serialize_design_vector(const Instance& inst, const std::vector<double>& x) {
  if (x.size() != static_cast<std::size_t>(inst.network.graph.num_arcs()))
    throw Error("serialize_design_vector: size mismatch");
  std::string out;
  for (std::size_t a = 0; a < x.size(); ++a) {
    out += inst.arc_names.empty() ? "a" + std::to_string(a) : inst.arc_names[a];
    out += " " + detail::shortest_double(x[a]) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Instance generators.  A (spec, seed) pair fully determines the output.

struct GeneratorSpec {
  std::string kind = "multipath";  // "multipath" | "random"
  // multipath: series segments, each with one candidate pipe per option.
  int segments = 8;
  int options = 3;
  // random: connected multigraph on `nodes` with `extra_arcs` beyond a tree.
  int nodes = 6;
  int extra_arcs = 3;
  double beta_lo = 0.5;
  double beta_hi = 2.0;
  // Pipe cost model: cost = length * (alpha0 + alpha1 * diameter^2).
  double alpha0 = 1.0;
  double alpha1 = 2.0;
  double demand = 1.0;
  double degree_r = 2.0;
  // 0 = derive: multipath calibrates so the strongest-option mix is the one
  // affordable design; random takes 1.3x the full design's spread.
  double pressure_bound = 0.0;
  std::uint64_t seed = 1;
};

namespace detail {

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace detail

// Path of `segments` stages between one entry and one exit; each stage offers
// `options` parallel pipes with diameters spread over [0.4, 0.8].  Resistance
// follows beta = length / diameter^5, cost = length * (alpha0 + alpha1 *
// diameter^2): wider pipes carry far more but cost more.  All stages share
// one seed-drawn length, keeping the instance stage-symmetric — the chain
// inequalities aggregate stages interchangeably, so only symmetric paths let
// them bind exactly at an integral design.  By default the pressure bound is
// calibrated just above the strongest mix's requirement, so exactly the
// all-strongest selection is feasible.
inline Instance generate_multipath(const GeneratorSpec& spec) {
  if (spec.segments < 1 || spec.options < 1)
    throw Error("generate_multipath: segments and options must be >= 1");
  if (!(spec.demand > 0.0) || !(spec.degree_r > 0.0))
    throw Error("generate_multipath: demand and degree must be positive");
  std::mt19937_64 rng(spec.seed);

  Instance inst;
  inst.network.degree_r = spec.degree_r;
  std::vector<Arc> arcs;
  double strongest_beta_sum = 0.0;
  for (int i = 0; i <= spec.segments; ++i) inst.node_names.push_back("v" + std::to_string(i));
  const double length = 0.8 + 0.4 * detail::uniform01(rng);
  for (int i = 0; i < spec.segments; ++i) {
    for (int j = 0; j < spec.options; ++j) {
      // Catalog sizes: evenly spaced over [0.4, 0.8], quantized to 1e-3.
      const double raw =
          spec.options == 1 ? 0.8 : 0.4 + 0.4 * static_cast<double>(j) / (spec.options - 1);
      const double diameter = std::round(raw * 1000.0) / 1000.0;
      arcs.push_back({i, i + 1});
      inst.network.beta.push_back(length / std::pow(diameter, 5.0));
      inst.cost.push_back(length * (spec.alpha0 + spec.alpha1 * diameter * diameter));
      inst.arc_diameter.push_back(diameter);
      inst.arc_length.push_back(length);
      inst.arc_names.push_back("s" + std::to_string(i) + "o" + std::to_string(j));
    }
    strongest_beta_sum += length / std::pow(0.8, 5.0);
  }
  inst.network.graph = MultiGraph(spec.segments + 1, std::move(arcs));
  inst.entries = {0};
  inst.exits = {spec.segments};
  inst.balance.assign(static_cast<std::size_t>(spec.segments) + 1, 0.0);
  inst.balance.front() = spec.demand;
  inst.balance.back() = -spec.demand;
  inst.pressure_bound =
      spec.pressure_bound > 0.0
          ? spec.pressure_bound
          : std::pow(spec.demand, spec.degree_r) * strongest_beta_sum * (1.0 + 1e-7);
  return inst;
}

// Connected random multigraph: a random spanning tree plus extra arcs, with
// resistances drawn from [beta_lo, beta_hi] and one entry/exit pair.
inline Instance generate_random(const GeneratorSpec& spec) {
  if (spec.nodes < 2) throw Error("generate_random: need at least 2 nodes");
  if (spec.extra_arcs < 0) throw Error("generate_random: negative extra arc count");
  if (!(spec.beta_lo > 0.0) || spec.beta_hi < spec.beta_lo)
    throw Error("generate_random: bad beta range");
  if (!(spec.demand > 0.0) || !(spec.degree_r > 0.0))
    throw Error("generate_random: demand and degree must be positive");
  std::mt19937_64 rng(spec.seed);

  Instance inst;
  inst.network.degree_r = spec.degree_r;
  const int n = spec.nodes;
  std::vector<Arc> arcs;
  for (int v = 1; v < n; ++v)
    arcs.push_back({static_cast<int>(rng() % static_cast<std::uint64_t>(v)), v});
  for (int i = 0; i < spec.extra_arcs; ++i) {
    int u = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
    int w = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
    if (u == w) w = (w + 1) % n;
    arcs.push_back({u, w});
  }
  const int m = static_cast<int>(arcs.size());
  inst.network.graph = MultiGraph(n, std::move(arcs));
  for (int a = 0; a < m; ++a) {
    inst.network.beta.push_back(spec.beta_lo + (spec.beta_hi - spec.beta_lo) * detail::uniform01(rng));
    inst.cost.push_back(1.0 + 2.0 * detail::uniform01(rng));
  }
  for (int v = 0; v < n; ++v) inst.node_names.push_back("n" + std::to_string(v));
  for (int a = 0; a < m; ++a) inst.arc_names.push_back("a" + std::to_string(a));
  inst.entries = {0};
  inst.exits = {n - 1};
  inst.balance.assign(static_cast<std::size_t>(n), 0.0);
  inst.balance.front() = spec.demand;
  inst.balance.back() = -spec.demand;

  if (spec.pressure_bound > 0.0) {
    inst.pressure_bound = spec.pressure_bound;
  } else {
    Instance probe = inst;
    probe.pressure_bound = 1e100;
    const std::vector<double> full(static_cast<std::size_t>(m), 1.0);
    const FeasibilityReport report = check_feasibility(probe, full);
    double spread = 0.0;
    for (double p : report.state.potential) spread = std::max(spread, p);
    inst.pressure_bound = std::max(spread, 1e-6) * 1.3;
  }
  return inst;
}

inline Instance generate(const GeneratorSpec& spec) {
  if (spec.kind == "multipath") return generate_multipath(spec);
  if (spec.kind == "random") return generate_random(spec);
  throw Error("generate: unknown kind '" + spec.kind + "' (multipath|random)");
}

}  // namespace potflow
