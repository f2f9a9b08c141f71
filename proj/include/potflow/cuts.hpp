#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "potflow/graph.hpp"
#include "potflow/instance.hpp"

namespace potflow {

// Nested node sets S_1 <= S_2 <= ... whose crossing arc sets are pairwise
// disjoint; each set separates the active entries from the active exits.
struct CutChain {
  std::vector<NodeSet> sets;
  int length() const { return static_cast<int>(sets.size()); }
};

namespace detail {

inline void require_terminal_subset(const Instance& inst, const NodeSet& x) {
  const NodeSet t = inst.terminals();
  for (NodeId v : x)
    if (!set_contains(t, v))
      throw Error("terminal subset contains non-terminal node " + std::to_string(v));
}

}  // namespace detail

// True when the chain certifies a family of disjoint cuts for the terminal
// subset x: every set contains the entries of x, avoids the exits outside x,
// the sets are nested, and no arc crosses two of them.
inline bool check_chain(const Instance& inst, const NodeSet& x, const CutChain& chain) {
  detail::require_terminal_subset(inst, x);
  if (chain.sets.empty()) return false;
  const NodeSet side_a = set_intersection(x, inst.entries);
  const NodeSet side_b = set_difference(inst.exits, x);

  std::vector<std::vector<ArcId>> crossings;
  for (const NodeSet& s : chain.sets) {
    if (!is_subset(side_a, s)) return false;
    if (!set_intersection(s, side_b).empty()) return false;
    crossings.push_back(crossing_arcs(inst.network.graph, s));
  }
  for (std::size_t i = 0; i + 1 < chain.sets.size(); ++i)
    if (!is_subset(chain.sets[i], chain.sets[i + 1])) return false;
  for (std::size_t i = 0; i < crossings.size(); ++i)
    for (std::size_t j = i + 1; j < crossings.size(); ++j) {
      // Both lists are sorted.
      std::size_t a = 0, b = 0;
      while (a < crossings[i].size() && b < crossings[j].size()) {
        if (crossings[i][a] == crossings[j][b]) return false;
        if (crossings[i][a] < crossings[j][b]) ++a;
        else ++b;
      }
    }
  return true;
}

// Linear inequality over design variables: sum coeff[a] * x_a >= rhs.
struct ValidInequality {
  std::vector<double> coeff;                 // dense, one per arc
  double rhs = 0.0;
  int levels = 0;                            // number of cuts in the family
  NodeSet terminal_set;                      // X
  CutChain chain;                            // empty when deserialized
  std::vector<std::vector<ArcId>> crossings;  // per chain level

  int k() const { return levels; }
};

// Assembles the cut inequality certified by a chain: with k disjoint cuts,
//   (1 / (k * k^(1/r))) * sum_i sum_{a in delta(S_i)} mu_a x_a
//     >= b(X) / pibar^(1/r).
inline ValidInequality build_inequality(const Instance& inst, const NodeSet& x,
                                        const CutChain& chain) {
  if (chain.sets.empty()) throw Error("build_inequality: empty chain");
  if (!check_chain(inst, x, chain)) throw Error("build_inequality: chain is not a disjoint cut family");
  const double r = inst.network.degree_r;
  const double k = static_cast<double>(chain.length());
  const double factor = 1.0 / (k * std::pow(k, 1.0 / r));
  const double pibar = inst.global_pressure_bound();
  if (!(pibar > 0.0)) throw Error("build_inequality: nonpositive pressure bound");

  ValidInequality out;
  out.terminal_set = x;
  out.chain = chain;
  out.levels = chain.length();
  out.coeff.assign(static_cast<std::size_t>(inst.network.graph.num_arcs()), 0.0);
  for (const NodeSet& s : chain.sets) {
    std::vector<ArcId> cross = crossing_arcs(inst.network.graph, s);
    for (ArcId a : cross)
      out.coeff[static_cast<std::size_t>(a)] += factor * inst.network.conductance(a);
    out.crossings.push_back(std::move(cross));
  }
  out.rhs = balance_of_subset(inst, x) / std::pow(pibar, 1.0 / r);
  return out;
}

// Slack of the inequality at x; negative means violated.
inline double evaluate_violation(const ValidInequality& cut, const std::vector<double>& x) {
  if (x.size() != cut.coeff.size()) throw Error("evaluate_violation: design vector size mismatch");
  double lhs = 0.0;
  for (std::size_t a = 0; a < x.size(); ++a) lhs += cut.coeff[a] * x[a];
  return lhs - cut.rhs;
}

namespace detail {

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf);
}

}  // namespace detail

// Dedup key: the inequality's numbers, independent of which chain produced it.
inline std::string normalized_cut_key(const ValidInequality& cut) {
  std::string key = detail::format_double(cut.rhs);
  for (std::size_t a = 0; a < cut.coeff.size(); ++a) {
    if (cut.coeff[a] == 0.0) continue;
    key += "|" + std::to_string(a) + ":" + detail::format_double(cut.coeff[a]);
  }
  return key;
}

// One inequality per line: "k; X; rhs; arc:coeff arc:coeff ...".
// Node and arc names are used when the instance carries them.
inline std::string cut_to_line(const Instance& inst, const ValidInequality& cut) {
  const auto node_label = [&inst](NodeId v) {
    return inst.node_names.empty() ? std::to_string(v)
                                   : inst.node_names[static_cast<std::size_t>(v)];
  };
  const auto arc_label = [&inst](ArcId a) {
    return inst.arc_names.empty() ? std::to_string(a)
                                  : inst.arc_names[static_cast<std::size_t>(a)];
  };
  std::string line = std::to_string(cut.k()) + ";";
  for (NodeId v : cut.terminal_set) line += " " + node_label(v);
  line += "; " + detail::format_double(cut.rhs) + ";";
  for (std::size_t a = 0; a < cut.coeff.size(); ++a) {
    if (cut.coeff[a] == 0.0) continue;
    line += " " + arc_label(static_cast<ArcId>(a)) + ":" + detail::format_double(cut.coeff[a]);
  }
  return line;
}

inline ValidInequality cut_from_line(const Instance& inst, const std::string& line) {
  const auto split = [](const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
      const std::size_t pos = s.find(sep, start);
      if (pos == std::string::npos) {
        parts.push_back(s.substr(start));
        break;
      }
      parts.push_back(s.substr(start, pos - start));
      start = pos + 1;
    }
    return parts;
  };
  const auto tokens = [](const std::string& s) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < s.size()) {
      while (i < s.size() && s[i] == ' ') ++i;
      std::size_t j = i;
      while (j < s.size() && s[j] != ' ') ++j;
      if (j > i) out.push_back(s.substr(i, j - i));
      i = j;
    }
    return out;
  };

  const std::vector<std::string> parts = split(line, ';');
  if (parts.size() != 4) throw Error("cut line: expected 4 ';'-separated fields");

  const auto find_node = [&inst](const std::string& label) -> NodeId {
    if (!inst.node_names.empty()) {
      for (std::size_t v = 0; v < inst.node_names.size(); ++v)
        if (inst.node_names[v] == label) return static_cast<NodeId>(v);
    }
    try {
      const NodeId v = std::stoi(label);
      if (v >= 0 && v < inst.network.graph.num_nodes()) return v;
    } catch (...) {
    }
    throw Error("cut line: unknown node '" + label + "'");
  };
  const auto find_arc = [&inst](const std::string& label) -> ArcId {
    if (!inst.arc_names.empty()) {
      for (std::size_t a = 0; a < inst.arc_names.size(); ++a)
        if (inst.arc_names[a] == label) return static_cast<ArcId>(a);
    }
    try {
      const ArcId a = std::stoi(label);
      if (a >= 0 && a < inst.network.graph.num_arcs()) return a;
    } catch (...) {
    }
    throw Error("cut line: unknown arc '" + label + "'");
  };

  ValidInequality cut;
  cut.coeff.assign(static_cast<std::size_t>(inst.network.graph.num_arcs()), 0.0);
  try {
    cut.levels = std::stoi(parts[0]);
  } catch (...) {
    throw Error("cut line: bad level count '" + parts[0] + "'");
  }
  if (cut.levels < 0) throw Error("cut line: negative level count");
  std::vector<NodeId> xs;
  for (const std::string& tok : tokens(parts[1])) xs.push_back(find_node(tok));
  cut.terminal_set = make_node_set(std::move(xs));
  try {
    cut.rhs = std::stod(parts[2]);
  } catch (...) {
    throw Error("cut line: bad rhs '" + parts[2] + "'");
  }
  for (const std::string& tok : tokens(parts[3])) {
    const std::size_t colon = tok.rfind(':');
    if (colon == std::string::npos) throw Error("cut line: bad term '" + tok + "'");
    const ArcId a = find_arc(tok.substr(0, colon));
    try {
      cut.coeff[static_cast<std::size_t>(a)] = std::stod(tok.substr(colon + 1));
    } catch (...) {
      throw Error("cut line: bad coefficient in '" + tok + "'");
    }
  }
  return cut;
}

}  // namespace potflow
