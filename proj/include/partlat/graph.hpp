#pragma once

// Labeled simple graphs on {0..n-1} and the translations between edge sets
// and atom sets: G_pi, pi_G, spanning forests, contraction, paths, and the
// cycle classes used by the red-atom counts.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "partlat/big_count.hpp"
#include "partlat/detail/union_find.hpp"
#include "partlat/error.hpp"
#include "partlat/lattice.hpp"
#include "partlat/limits.hpp"

namespace partlat {

/// Edges and atoms are the same unordered pair.
using Edge = Atom;

class LabeledGraph {
 public:
  explicit LabeledGraph(std::size_t n) : n_(n), adjacency_(n) {}

  /// Duplicate edges collapse; endpoints must be in range.
  LabeledGraph(std::size_t n, std::vector<Edge> edges) : n_(n), adjacency_(n) {
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    for (const Edge& e : edges) {
      if (e.b >= n) {
        throw Error(ErrorKind::invalid_argument, "edge {" + std::to_string(e.a) + "," +
                                                     std::to_string(e.b) + "} out of range for n=" +
                                                     std::to_string(n));
      }
      adjacency_[e.a].push_back(e.b);
      adjacency_[e.b].push_back(e.a);
    }
    for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());
    edges_ = std::move(edges);
  }

  std::size_t vertex_count() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Label>& neighbors(Label v) const { return adjacency_[v]; }
  std::size_t degree(Label v) const { return adjacency_[v].size(); }

  bool has_edge(const Edge& e) const { return std::binary_search(edges_.begin(), edges_.end(), e); }

  LabeledGraph without_edges(const std::vector<Edge>& removed) const {
    std::vector<Edge> kept;
    kept.reserve(edges_.size());
    for (const Edge& e : edges_) {
      if (std::find(removed.begin(), removed.end(), e) == removed.end()) kept.push_back(e);
    }
    return LabeledGraph(n_, std::move(kept));
  }

  friend bool operator==(const LabeledGraph& l, const LabeledGraph& r) {
    return l.n_ == r.n_ && l.edges_ == r.edges_;
  }

 private:
  std::size_t n_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Label>> adjacency_;
};

/// Result of collapsing a vertex set W into a single vertex x_W.
struct ContractionResult {
  LabeledGraph graph;
  std::vector<Label> vertex_map;  // old label -> new label
  Label merged_label;
};

/// A simple path, as its vertex sequence and the edges walked in order.
struct Path {
  std::vector<Label> vertices;
  std::vector<Edge> edges;

  std::size_t length() const { return edges.size(); }
};

struct CycleEdgeClasses {
  std::vector<Edge> tree_edges;            // edges on no cycle
  std::vector<std::vector<Edge>> classes;  // C^prop: unions of edge-chained cycles
};

/// G_pi: a complete graph on each block.
inline LabeledGraph graph_of_partition(const SetPartition& p) {
  return LabeledGraph(p.ground_size(), atoms_below(p));
}

inline SetPartition component_partition(std::size_t n, std::span<const Edge> edges) {
  return join_atoms(n, edges);
}

/// pi_G: the connected components of G.
inline SetPartition partition_of_graph(const LabeledGraph& g) {
  return component_partition(g.vertex_count(), g.edges());
}

/// Visits every acyclic edge subset whose components equal those of g, in
/// lexicographic order of the sorted edge lists. `visit` returning false stops
/// the enumeration.
inline void for_each_spanning_forest(const LabeledGraph& g,
                                     const std::function<bool(const std::vector<Edge>&)>& visit,
                                     const Limits& limits = {}) {
  const auto& edges = g.edges();
  const std::size_t n = g.vertex_count();
  const std::size_t need = n - partition_of_graph(g).block_count();
  std::vector<Edge> chosen;
  chosen.reserve(need);
  std::uint64_t emitted = 0;
  bool stop = false;

  std::function<void(std::size_t, detail::UnionFind&)> rec = [&](std::size_t i,
                                                                 detail::UnionFind& uf) {
    if (stop) return;
    if (chosen.size() == need) {
      if (++emitted > limits.max_forests) {
        throw Error(ErrorKind::resource_limit,
                    "more than " + std::to_string(limits.max_forests) + " spanning forests");
      }
      if (!visit(chosen)) stop = true;
      return;
    }
    if (edges.size() - i < need - chosen.size()) return;
    const Edge& e = edges[i];
    if (uf.find(e.a) != uf.find(e.b)) {
      detail::UnionFind next = uf;
      next.unite(e.a, e.b);
      chosen.push_back(e);
      rec(i + 1, next);
      chosen.pop_back();
    }
    rec(i + 1, uf);
  };
  detail::UnionFind uf(n);
  rec(0, uf);
}

inline std::vector<std::vector<Edge>> spanning_forests(const LabeledGraph& g,
                                                       const Limits& limits = {}) {
  std::vector<std::vector<Edge>> out;
  for_each_spanning_forest(
      g,
      [&](const std::vector<Edge>& f) {
        out.push_back(f);
        return true;
      },
      limits);
  return out;
}

namespace detail {

// Edges of g grouped by connected component (components with no edges omitted).
inline std::vector<std::vector<Edge>> edges_by_component(const LabeledGraph& g) {
  const SetPartition comps = partition_of_graph(g);
  std::vector<std::vector<Edge>> groups(comps.block_count());
  for (const Edge& e : g.edges()) groups[comps.block_of(e.a)].push_back(e);
  std::erase_if(groups, [](const auto& v) { return v.empty(); });
  return groups;
}

inline std::vector<Label> vertices_of(const std::vector<Edge>& edges) {
  std::vector<Label> vs;
  for (const Edge& e : edges) {
    vs.push_back(e.a);
    vs.push_back(e.b);
  }
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  return vs;
}

}  // namespace detail

/// Number of edge subsets E' of g with pi_(V,E') == pi_g. Exhaustive subset
/// scan per component; a component above limits.max_component_edges raises.
inline BigCount component_preserving_subgraphs(const LabeledGraph& g, const Limits& limits = {}) {
  BigCount total = 1;
  for (const auto& comp : detail::edges_by_component(g)) {
    const std::size_t m = comp.size();
    if (m > limits.max_component_edges) {
      throw Error(ErrorKind::resource_limit, "component with " + std::to_string(m) +
                                                 " edges exceeds subset-scan ceiling " +
                                                 std::to_string(limits.max_component_edges));
    }
    const auto verts = detail::vertices_of(comp);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> local;  // endpoints as local indices
    for (const Edge& e : comp) {
      auto idx = [&](Label v) {
        return static_cast<std::uint32_t>(std::lower_bound(verts.begin(), verts.end(), v) -
                                          verts.begin());
      };
      local.emplace_back(idx(e.a), idx(e.b));
    }
    std::uint64_t count = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
      if (static_cast<std::size_t>(std::popcount(mask)) + 1 < verts.size()) continue;
      detail::UnionFind uf(verts.size());
      for (std::size_t i = 0; i < m; ++i) {
        if (mask >> i & 1) uf.unite(local[i].first, local[i].second);
      }
      if (uf.set_count() == 1) ++count;
    }
    total *= count;
  }
  return total;
}

/// Collapses `vertices` into one vertex. Labels are reassigned densely in
/// increasing order of the old labels, with the whole set taking the place of
/// its smallest member. Loops vanish and parallel edges merge.
inline ContractionResult contract(const LabeledGraph& g, const std::vector<Label>& vertices) {
  if (vertices.empty()) throw Error(ErrorKind::invalid_argument, "contraction set is empty");
  const std::size_t n = g.vertex_count();
  std::vector<bool> in_set(n, false);
  for (Label v : vertices) {
    if (v >= n) throw Error(ErrorKind::invalid_argument, "contraction vertex out of range");
    in_set[v] = true;
  }
  const Label rep = *std::min_element(vertices.begin(), vertices.end());
  std::vector<Label> vertex_map(n);
  Label next = 0;
  for (Label v = 0; v < n; ++v) {
    if (in_set[v] && v != rep) continue;
    vertex_map[v] = next++;
  }
  for (Label v = 0; v < n; ++v) {
    if (in_set[v]) vertex_map[v] = vertex_map[rep];
  }
  std::vector<Edge> edges;
  for (const Edge& e : g.edges()) {
    const Label a = vertex_map[e.a], b = vertex_map[e.b];
    if (a != b) edges.emplace_back(a, b);
  }
  const Label merged = vertex_map[rep];
  return ContractionResult{LabeledGraph(next, std::move(edges)), std::move(vertex_map), merged};
}

/// All simple x-y paths not using `exclude`, ordered by length and then by
/// the edge sequence. Exhaustive DFS; more than limits.max_paths raises.
inline std::vector<Path> simple_paths_between(const LabeledGraph& g, Label x, Label y,
                                              std::optional<Edge> exclude = std::nullopt,
                                              const Limits& limits = {}) {
  if (x == y) throw Error(ErrorKind::invalid_argument, "path endpoints must differ");
  if (x >= g.vertex_count() || y >= g.vertex_count()) {
    throw Error(ErrorKind::invalid_argument, "path endpoint out of range");
  }
  std::vector<Path> out;
  std::vector<bool> visited(g.vertex_count(), false);
  Path current;
  current.vertices.push_back(x);
  visited[x] = true;

  std::function<void(Label)> dfs = [&](Label v) {
    for (Label w : g.neighbors(v)) {
      if (visited[w]) continue;
      const Edge e(v, w);
      if (exclude && e == *exclude) continue;
      current.vertices.push_back(w);
      current.edges.push_back(e);
      if (w == y) {
        out.push_back(current);
        if (out.size() > limits.max_paths) {
          throw Error(ErrorKind::resource_limit,
                      "more than " + std::to_string(limits.max_paths) + " simple paths");
        }
      } else {
        visited[w] = true;
        dfs(w);
        visited[w] = false;
      }
      current.vertices.pop_back();
      current.edges.pop_back();
    }
  };
  dfs(x);
  std::sort(out.begin(), out.end(), [](const Path& l, const Path& r) {
    if (l.length() != r.length()) return l.length() < r.length();
    return l.edges < r.edges;
  });
  return out;
}

/// Length of a shortest x-y path avoiding `exclude`; nullopt when none exists.
inline std::optional<std::size_t> shortest_path_length(const LabeledGraph& g, Label x, Label y,
                                                       std::optional<Edge> exclude = std::nullopt) {
  std::vector<std::size_t> dist(g.vertex_count(), SIZE_MAX);
  std::vector<Label> queue{x};
  dist[x] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Label v = queue[head];
    if (v == y) return dist[v];
    for (Label w : g.neighbors(v)) {
      if (dist[w] != SIZE_MAX) continue;
      if (exclude && Edge(v, w) == *exclude) continue;
      dist[w] = dist[v] + 1;
      queue.push_back(w);
    }
  }
  return std::nullopt;
}

/// Bridges and cycle classes. Two cycles are in the same class when a chain of
/// cycles sharing edges links them, which makes the classes exactly the
/// biconnected components that are not single bridges.
inline CycleEdgeClasses cycle_edge_classes(const LabeledGraph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<std::size_t> order(n, 0), low(n, 0);
  std::size_t counter = 0;
  std::vector<Edge> stack;
  CycleEdgeClasses out;

  std::function<void(Label, std::optional<Label>)> dfs = [&](Label v, std::optional<Label> parent) {
    order[v] = low[v] = ++counter;
    for (Label w : g.neighbors(v)) {
      if (parent && w == *parent) continue;
      if (order[w] == 0) {
        stack.emplace_back(v, w);
        dfs(w, v);
        low[v] = std::min(low[v], low[w]);
        if (low[w] >= order[v]) {
          std::vector<Edge> component;
          while (true) {
            Edge e = stack.back();
            stack.pop_back();
            component.push_back(e);
            if (e == Edge(v, w)) break;
          }
          std::sort(component.begin(), component.end());
          if (component.size() == 1) {
            out.tree_edges.push_back(component.front());
          } else {
            out.classes.push_back(std::move(component));
          }
        }
      } else if (order[w] < order[v]) {
        stack.emplace_back(v, w);
        low[v] = std::min(low[v], order[w]);
      }
    }
  };
  for (Label v = 0; v < n; ++v) {
    if (order[v] == 0) dfs(v, std::nullopt);
  }
  std::sort(out.tree_edges.begin(), out.tree_edges.end());
  std::sort(out.classes.begin(), out.classes.end());
  return out;
}

inline bool is_bridge(const LabeledGraph& g, const Edge& e) {
  return g.has_edge(e) && !shortest_path_length(g, e.a, e.b, e).has_value();
}

// ---------------------------------------------------------------------------
// Text formats.

/// "a-b;c-d" (or any other separator).
inline std::string format_edge_list(const std::vector<Edge>& edges, char sep = ';') {
  std::string out;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(edges[i].a) + "-" + std::to_string(edges[i].b);
  }
  return out;
}

/// Accepts "a-b" items separated by ';' or ','. Empty text is the empty list.
inline std::vector<Edge> parse_edge_list(
    std::string_view text,
    const std::function<Label(std::string_view)>& resolve = detail::parse_label) {
  std::vector<Edge> out;
  text = detail::trim(text);
  if (text.empty()) return out;
  std::string normalized(text);
  std::replace(normalized.begin(), normalized.end(), ';', ',');
  for (auto item : detail::split(normalized, ',')) {
    item = detail::trim(item);
    const auto dash = item.find('-');
    if (dash == std::string_view::npos) {
      throw Error(ErrorKind::parse, "expected 'a-b', got '" + std::string(item) + "'");
    }
    const Label a = resolve(detail::trim(item.substr(0, dash)));
    const Label b = resolve(detail::trim(item.substr(dash + 1)));
    if (a == b) throw Error(ErrorKind::parse, "loop '" + std::string(item) + "'");
    out.emplace_back(a, b);
  }
  return out;
}

/// Graphviz rendering with stable vertex and edge order.
inline std::string to_dot(const LabeledGraph& g, std::string_view name = "G") {
  std::string out = "graph " + std::string(name) + " {\n";
  for (Label v = 0; v < g.vertex_count(); ++v) out += "  " + std::to_string(v) + ";\n";
  for (const Edge& e : g.edges()) {
    out += "  " + std::to_string(e.a) + " -- " + std::to_string(e.b) + ";\n";
  }
  out += "}\n";
  return out;
}

}  // namespace partlat
