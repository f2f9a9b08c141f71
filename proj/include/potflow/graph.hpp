#pragma once

#include <algorithm>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace potflow {

// Thrown on API misuse: bad ids, malformed arguments, size guards.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when an iterative numerical routine fails to certify its result.
struct NumericalError : Error {
  using Error::Error;
};

using NodeId = int;
using ArcId = int;

// Node subsets are kept sorted and duplicate-free throughout.
using NodeSet = std::vector<NodeId>;

inline NodeSet make_node_set(std::vector<NodeId> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

inline NodeSet make_node_set(std::initializer_list<NodeId> ids) {
  return make_node_set(std::vector<NodeId>(ids));
}

inline bool set_contains(const NodeSet& s, NodeId v) {
  return std::binary_search(s.begin(), s.end(), v);
}

inline NodeSet set_union(const NodeSet& a, const NodeSet& b) {
  NodeSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline NodeSet set_intersection(const NodeSet& a, const NodeSet& b) {
  NodeSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline NodeSet set_difference(const NodeSet& a, const NodeSet& b) {
  NodeSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline bool is_subset(const NodeSet& a, const NodeSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// Deterministic total order on node sets, used for tie-breaking.
inline bool lex_less(const NodeSet& a, const NodeSet& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

struct Arc {
  NodeId tail = -1;
  NodeId head = -1;
};

// Directed multigraph on nodes 0..n-1. Parallel arcs allowed; loops are
// representable so that validation can report them, but every algorithm
// assumes loop-free input.
class MultiGraph {
 public:
  MultiGraph() = default;

  MultiGraph(int node_count, std::vector<Arc> arcs)
      : node_count_(node_count), arcs_(std::move(arcs)) {
    if (node_count_ < 0) throw Error("graph: negative node count");
    for (std::size_t i = 0; i < arcs_.size(); ++i) {
      const Arc& a = arcs_[i];
      if (a.tail < 0 || a.tail >= node_count_ || a.head < 0 || a.head >= node_count_)
        throw Error("graph: arc " + std::to_string(i) + " references unknown node");
    }
  }

  int num_nodes() const { return node_count_; }
  int num_arcs() const { return static_cast<int>(arcs_.size()); }

  const Arc& arc(ArcId a) const {
    if (a < 0 || a >= num_arcs()) throw Error("graph: unknown arc id " + std::to_string(a));
    return arcs_[static_cast<std::size_t>(a)];
  }

  const std::vector<Arc>& arcs() const { return arcs_; }

  bool has_loops() const {
    for (const Arc& a : arcs_)
      if (a.tail == a.head) return true;
    return false;
  }

  // Connected components ignoring arc direction; singleton nodes included.
  std::vector<NodeSet> weak_components() const {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(node_count_));
    for (const Arc& a : arcs_) {
      adj[static_cast<std::size_t>(a.tail)].push_back(a.head);
      adj[static_cast<std::size_t>(a.head)].push_back(a.tail);
    }
    std::vector<NodeSet> comps;
    std::vector<char> seen(static_cast<std::size_t>(node_count_), 0);
    std::vector<int> stack;
    for (int start = 0; start < node_count_; ++start) {
      if (seen[static_cast<std::size_t>(start)]) continue;
      NodeSet comp;
      stack.push_back(start);
      seen[static_cast<std::size_t>(start)] = 1;
      while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        comp.push_back(v);
        for (int w : adj[static_cast<std::size_t>(v)]) {
          if (!seen[static_cast<std::size_t>(w)]) {
            seen[static_cast<std::size_t>(w)] = 1;
            stack.push_back(w);
          }
        }
      }
      std::sort(comp.begin(), comp.end());
      comps.push_back(std::move(comp));
    }
    return comps;
  }

  bool is_weakly_connected() const {
    if (node_count_ <= 1) return true;
    return weak_components().size() == 1;
  }

 private:
  int node_count_ = 0;
  std::vector<Arc> arcs_;
};

// A node cut: arcs crossing S in either direction separate S from its
// complement.
struct NodeCut {
  NodeSet members;
};

// Arcs with exactly one endpoint in S, ascending by arc id. Orientation is
// ignored.
inline std::vector<ArcId> crossing_arcs(const MultiGraph& g, const NodeSet& s) {
  std::vector<char> in_s(static_cast<std::size_t>(g.num_nodes()), 0);
  for (NodeId v : s) {
    if (v < 0 || v >= g.num_nodes())
      throw Error("crossing_arcs: unknown node id " + std::to_string(v));
    in_s[static_cast<std::size_t>(v)] = 1;
  }
  std::vector<ArcId> out;
  for (ArcId a = 0; a < g.num_arcs(); ++a) {
    const Arc& arc = g.arcs()[static_cast<std::size_t>(a)];
    if (in_s[static_cast<std::size_t>(arc.tail)] != in_s[static_cast<std::size_t>(arc.head)])
      out.push_back(a);
  }
  return out;
}

inline std::vector<ArcId> crossing_arcs(const MultiGraph& g, const NodeCut& cut) {
  return crossing_arcs(g, cut.members);
}

}  // namespace potflow
