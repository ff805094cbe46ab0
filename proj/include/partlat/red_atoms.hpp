#pragma once

// Decompositions restricted to a set R of "red" atoms: the partitions that
// joins of red atoms reach, their count via the cycle structure of G_R, and
// the brute-force count of rank-j partitions reachable with exactly s atoms.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "partlat/big_count.hpp"
#include "partlat/detail/union_find.hpp"
#include "partlat/error.hpp"
#include "partlat/graph.hpp"
#include "partlat/lattice.hpp"
#include "partlat/limits.hpp"

namespace partlat {

class RedAtomSet {
 public:
  /// Throws invalid_atom for labels outside 0..n-1 and invalid_argument for
  /// repeated atoms.
  RedAtomSet(std::size_t n, std::vector<Atom> atoms) : n_(n), atoms_(std::move(atoms)) {
    detail::require_ground_size(n);
    for (const Atom& a : atoms_) check_atom(a, n);
    std::sort(atoms_.begin(), atoms_.end());
    if (std::adjacent_find(atoms_.begin(), atoms_.end()) != atoms_.end()) {
      throw Error(ErrorKind::invalid_argument, "red atoms must be distinct");
    }
  }

  std::size_t ground_size() const { return n_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  bool contains(const Atom& a) const { return std::binary_search(atoms_.begin(), atoms_.end(), a); }
  LabeledGraph graph() const { return LabeledGraph(n_, atoms_); }

  friend bool operator==(const RedAtomSet&, const RedAtomSet&) = default;

 private:
  std::size_t n_;
  std::vector<Atom> atoms_;
};

/// One cell of the (j, s) table: rank j, exactly s red atoms.
struct CountQuery {
  RedAtomSet reds;
  std::size_t j = 0;
  std::size_t s = 0;

  /// Throws invalid_argument unless j <= n-1 and s <= |R|.
  CountQuery(RedAtomSet r, std::size_t rank, std::size_t size)
      : reds(std::move(r)), j(rank), s(size) {
    if (j + 1 > reds.ground_size()) {
      throw Error(ErrorKind::invalid_argument, "rank " + std::to_string(j) + " exceeds n-1 = " +
                                                   std::to_string(reds.ground_size() - 1));
    }
    if (s > reds.size()) {
      throw Error(ErrorKind::invalid_argument, "size " + std::to_string(s) + " exceeds |R| = " +
                                                   std::to_string(reds.size()));
    }
  }

  std::size_t ground_size() const { return reds.ground_size(); }
};

enum class Engine { closed_form, oracle, recursive, fallback };

inline const char* to_string(Engine e) {
  switch (e) {
    case Engine::closed_form: return "closed-form";
    case Engine::oracle: return "oracle";
    case Engine::recursive: return "recursive";
    case Engine::fallback: return "fallback";
  }
  return "?";
}

struct CountResult {
  BigCount value;
  Engine engine = Engine::oracle;
};

struct ReachableOptions {
  /// Drop the empty join (the finest partition) whenever R is nonempty, so
  /// that only joins of at least one red atom are reported.
  bool nonempty_joins = false;
};

/// Pi(X, R): every join of a subset of R, sorted. Computed as the closure of
/// {finest} under joining with single red atoms; more than
/// limits.max_reachable partitions raises.
inline std::vector<SetPartition> reachable_partitions(const RedAtomSet& reds,
                                                      ReachableOptions options = {},
                                                      const Limits& limits = {}) {
  const std::size_t n = reds.ground_size();
  std::unordered_set<SetPartition, SetPartitionHash> seen;
  std::vector<SetPartition> frontier{finest(n)};
  seen.insert(frontier.front());
  while (!frontier.empty()) {
    std::vector<SetPartition> next;
    for (const auto& p : frontier) {
      for (const Atom& a : reds.atoms()) {
        if (p.same_block(a.a, a.b)) continue;
        SetPartition q = join(p, atom_to_partition(a, n));
        if (seen.insert(q).second) {
          if (seen.size() > limits.max_reachable) {
            throw Error(ErrorKind::resource_limit,
                        "more than " + std::to_string(limits.max_reachable) + " reachable partitions");
          }
          next.push_back(std::move(q));
        }
      }
    }
    frontier = std::move(next);
  }
  std::vector<SetPartition> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end());
  if (options.nonempty_joins && reds.size() > 0) out.erase(out.begin());
  return out;
}

namespace detail {

inline bool is_simple_cycle(const std::vector<Edge>& edges) {
  const auto vertices = vertices_of(edges);
  if (vertices.size() != edges.size()) return false;
  for (Label v : vertices) {
    const auto degree = std::count_if(edges.begin(), edges.end(),
                                      [v](const Edge& e) { return e.touches(v); });
    if (degree != 2) return false;
  }
  return true;
}

/// Distinct component partitions over all edge subsets of one class.
inline BigCount class_count_by_subsets(const std::vector<Edge>& edges, const Limits& limits) {
  if (edges.size() > limits.max_class_edges) {
    throw Error(ErrorKind::resource_limit, "cycle class with " + std::to_string(edges.size()) +
                                               " edges exceeds ceiling " +
                                               std::to_string(limits.max_class_edges));
  }
  const auto vertices = vertices_of(edges);
  std::vector<std::pair<Label, Label>> local;
  for (const Edge& e : edges) {
    const auto a = std::lower_bound(vertices.begin(), vertices.end(), e.a) - vertices.begin();
    const auto b = std::lower_bound(vertices.begin(), vertices.end(), e.b) - vertices.begin();
    local.emplace_back(static_cast<Label>(a), static_cast<Label>(b));
  }
  std::unordered_set<SetPartition, SetPartitionHash> seen;
  const std::uint64_t subsets = std::uint64_t{1} << edges.size();
  for (std::uint64_t mask = 0; mask < subsets; ++mask) {
    UnionFind uf(vertices.size());
    for (std::size_t i = 0; i < local.size(); ++i) {
      if (mask >> i & 1) uf.unite(local[i].first, local[i].second);
    }
    seen.insert(partition_from_union_find(uf));
  }
  return seen.size();
}

}  // namespace detail

/// |Pi(X, R)| from the cycle structure of G_R: a factor 2 per edge on no
/// cycle, 2^m - m per class that is a single m-cycle, and a subset scan for
/// every other class.
inline BigCount quotient_count_structured(const RedAtomSet& reds, const Limits& limits = {}) {
  const auto classes = cycle_edge_classes(reds.graph());
  BigCount count = ipow(2, classes.tree_edges.size());
  for (const auto& cls : classes.classes) {
    if (detail::is_simple_cycle(cls)) {
      count *= ipow(2, cls.size()) - cls.size();
    } else {
      count *= detail::class_count_by_subsets(cls, limits);
    }
  }
  return count;
}

namespace detail {

inline void require_oracle_budget(std::size_t m, std::size_t s, const Limits& limits) {
  if (binomial_saturated(m, s) > limits.max_oracle_subsets) {
    throw Error(ErrorKind::resource_limit, "C(" + std::to_string(m) + "," + std::to_string(s) +
                                               ") subsets exceed oracle ceiling " +
                                               std::to_string(limits.max_oracle_subsets));
  }
}

/// Calls visit(partition) for the join of every s-subset of `atoms`.
template <class Visit>
void for_each_size_s_join(std::size_t n, const std::vector<Atom>& atoms, std::size_t s,
                          const Limits& limits, Visit&& visit) {
  require_oracle_budget(atoms.size(), s, limits);
  const std::size_t m = atoms.size();
  if (s > m) return;
  std::vector<std::size_t> idx(s);
  for (std::size_t i = 0; i < s; ++i) idx[i] = i;
  while (true) {
    UnionFind uf(n);
    for (std::size_t i : idx) uf.unite(atoms[i].a, atoms[i].b);
    visit(uf);
    std::size_t i = s;
    while (i > 0 && idx[i - 1] == m - s + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t r = i; r < s; ++r) idx[r] = idx[r - 1] + 1;
  }
}

}  // namespace detail

/// pi(X, j, s, R) by brute force: the number of distinct rank-j partitions
/// among the joins of all s-subsets of R.
inline BigCount count_rank_size_oracle(std::size_t n, const std::vector<Atom>& atoms,
                                       std::size_t j, std::size_t s, const Limits& limits = {}) {
  if (j > s || s > atoms.size() || j + 1 > n) return 0;
  std::unordered_set<SetPartition, SetPartitionHash> seen;
  detail::for_each_size_s_join(n, atoms, s, limits, [&](detail::UnionFind& uf) {
    if (n - uf.set_count() == j) seen.insert(detail::partition_from_union_find(uf));
  });
  return seen.size();
}

inline BigCount count_rank_size_oracle(const CountQuery& q, const Limits& limits = {}) {
  return count_rank_size_oracle(q.ground_size(), q.reds.atoms(), q.j, q.s, limits);
}

struct SplitCounts {
  BigCount with;     // pivot refines the partition
  BigCount without;  // pivot does not
};

/// Splits pi(X, j, s, R) by whether the pivot's endpoints share a block.
inline SplitCounts split_by_atom(const CountQuery& q, const Atom& pivot, const Limits& limits = {}) {
  if (!q.reds.contains(pivot)) {
    throw Error(ErrorKind::invalid_pivot, "pivot " + std::to_string(pivot.a) + "-" +
                                              std::to_string(pivot.b) + " is not a red atom");
  }
  const std::size_t n = q.ground_size();
  std::unordered_set<SetPartition, SetPartitionHash> with;
  std::unordered_set<SetPartition, SetPartitionHash> without;
  if (q.j <= q.s) {
    detail::for_each_size_s_join(n, q.reds.atoms(), q.s, limits, [&](detail::UnionFind& uf) {
      if (n - uf.set_count() != q.j) return;
      auto& bucket = uf.find(pivot.a) == uf.find(pivot.b) ? with : without;
      bucket.insert(detail::partition_from_union_find(uf));
    });
  }
  return {with.size(), without.size()};
}

/// An edge set that interrupts a family of x-x' paths.
struct CutSet {
  static constexpr std::size_t already_cut = std::numeric_limits<std::size_t>::max();

  std::vector<Edge> edges;  // sorted
  /// Chosen 0-based position(s) along each path, `interruptions` entries per
  /// path; already_cut marks a path interrupted by an earlier choice.
  std::vector<std::size_t> multiindex;
  /// Number of multi-indices that produced this edge set.
  std::uint64_t multiplicity = 1;
};

/// Cut sets for explicit paths (edge sequences). Paths are processed in
/// order; a path already interrupted often enough by earlier choices is not
/// interrupted again. With interruptions = 2 every path loses min(2, length)
/// edges. Edge sets are deduplicated, first multi-index kept.
inline std::vector<CutSet> build_cut_sets_for_paths(const std::vector<std::vector<Edge>>& paths,
                                                    std::size_t interruptions,
                                                    const Limits& limits = {}) {
  if (interruptions != 1 && interruptions != 2) {
    throw Error(ErrorKind::invalid_argument, "interruptions per path must be 1 or 2");
  }
  std::vector<CutSet> out;
  if (paths.empty()) return out;
  std::uint64_t leaves = 0;
  std::vector<Edge> chosen;
  std::vector<std::size_t> multiindex;

  auto emit = [&] {
    if (++leaves > limits.max_cut_sets) {
      throw Error(ErrorKind::resource_limit,
                  "more than " + std::to_string(limits.max_cut_sets) + " cut sets");
    }
    std::vector<Edge> edges = chosen;
    std::sort(edges.begin(), edges.end());
    auto it = std::find_if(out.begin(), out.end(), [&](const CutSet& c) { return c.edges == edges; });
    if (it != out.end()) {
      ++it->multiplicity;
    } else {
      out.push_back({std::move(edges), multiindex, 1});
    }
  };

  auto recurse = [&](auto&& self, std::size_t v) -> void {
    if (v == paths.size()) {
      emit();
      return;
    }
    const auto& path = paths[v];
    std::vector<std::size_t> open;
    std::size_t hit = 0;
    for (std::size_t pos = 0; pos < path.size(); ++pos) {
      if (std::find(chosen.begin(), chosen.end(), path[pos]) != chosen.end()) {
        ++hit;
      } else {
        open.push_back(pos);
      }
    }
    const std::size_t want = std::min(interruptions, path.size());
    const std::size_t need = want > hit ? want - hit : 0;
    if (need == 0) {
      for (std::size_t k = 0; k < interruptions; ++k) multiindex.push_back(CutSet::already_cut);
      self(self, v + 1);
      multiindex.resize(multiindex.size() - interruptions);
      return;
    }
    if (need == 1) {
      for (std::size_t pos : open) {
        chosen.push_back(path[pos]);
        multiindex.push_back(pos);
        for (std::size_t k = 1; k < interruptions; ++k) multiindex.push_back(CutSet::already_cut);
        self(self, v + 1);
        multiindex.resize(multiindex.size() - interruptions);
        chosen.pop_back();
      }
      return;
    }
    for (std::size_t a = 0; a < open.size(); ++a) {
      for (std::size_t b = a + 1; b < open.size(); ++b) {
        chosen.push_back(path[open[a]]);
        chosen.push_back(path[open[b]]);
        multiindex.push_back(open[a]);
        multiindex.push_back(open[b]);
        self(self, v + 1);
        multiindex.resize(multiindex.size() - 2);
        chosen.resize(chosen.size() - 2);
      }
    }
  };
  recurse(recurse, 0);
  return out;
}

/// Cut sets for the simple x-x' paths of g that avoid `exclude`.
inline std::vector<CutSet> build_cut_sets(const LabeledGraph& g, Label x, Label y,
                                          std::optional<Edge> exclude, std::size_t interruptions,
                                          const Limits& limits = {}) {
  std::vector<std::vector<Edge>> paths;
  for (const Path& p : simple_paths_between(g, x, y, exclude, limits)) paths.push_back(p.edges);
  return build_cut_sets_for_paths(paths, interruptions, limits);
}

}  // namespace partlat
