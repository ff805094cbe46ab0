#pragma once

// Recursive evaluation of pi(X, j, s, R).
//
// For j <= s a rank-j partition is a join of exactly s red atoms iff each of
// its blocks induces a connected subgraph of G_R and the blocks together
// contain at least s red edges: a spanning forest supplies j atoms and any
// further red edges inside the blocks can be added one at a time. The counter
// works on that description:
//
//  * a bridge e of G_R:      pi(G) = pi(G-e, j-1, s-1) + pi(G-e, j, s)
//  * a non-bridge e whose shortest alternative x-x' path is longer than s:
//                            the same identity (no s-subset can close a cycle
//                            through e)
//  * otherwise, the block B containing x = min(e) is chosen among connected
//    vertex sets through x, and the rest of the graph is counted with the
//    remaining rank and edge budget. The sum splits by whether x' lies in B.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "partlat/big_count.hpp"
#include "partlat/error.hpp"
#include "partlat/graph.hpp"
#include "partlat/limits.hpp"
#include "partlat/red_atoms.hpp"

namespace partlat {

struct RecursionStats {
  std::uint64_t calls = 0;
  std::uint64_t memo_hits = 0;
  std::uint64_t bridge_steps = 0;
  std::uint64_t long_cycle_steps = 0;
  std::uint64_t block_steps = 0;
  std::uint64_t connected_sets = 0;
};

struct RecursiveCountResult {
  BigCount value;
  Engine engine = Engine::recursive;
  RecursionStats stats;
};

namespace detail {

/// Simple graph on at most 64 vertices as adjacency bitmasks.
struct SmallGraph {
  std::vector<std::uint64_t> adj;

  std::size_t size() const { return adj.size(); }
  std::size_t edge_count() const {
    std::size_t twice = 0;
    for (auto m : adj) twice += static_cast<std::size_t>(std::popcount(m));
    return twice / 2;
  }
  bool has_edge(std::size_t a, std::size_t b) const { return adj[a] >> b & 1; }
  void remove_edge(std::size_t a, std::size_t b) {
    adj[a] &= ~(std::uint64_t{1} << b);
    adj[b] &= ~(std::uint64_t{1} << a);
  }
};

struct BudgetExceeded {};

}  // namespace detail

/// Memoizing counter. One instance per caller; it is not safe to share an
/// instance between threads.
class RankSizeCounter {
 public:
  explicit RankSizeCounter(const Limits& limits = {}) : limits_(limits) {}

  /// pi(X, j, s, R) for the red atoms `atoms` on n elements. Throws
  /// resource_limit when the connected-set budget runs out.
  BigCount count(std::size_t n, const std::vector<Atom>& atoms, std::size_t j, std::size_t s) {
    if (n > 64) throw Error(ErrorKind::resource_limit, "recursive engine supports n <= 64");
    detail::SmallGraph g{std::vector<std::uint64_t>(n, 0)};
    for (const Atom& a : atoms) {
      g.adj[a.a] |= std::uint64_t{1} << a.b;
      g.adj[a.b] |= std::uint64_t{1} << a.a;
    }
    try {
      return solve(g, static_cast<long>(j), static_cast<long>(s));
    } catch (const detail::BudgetExceeded&) {
      throw Error(ErrorKind::resource_limit, "more than " +
                                                 std::to_string(limits_.max_connected_sets) +
                                                 " connected vertex sets");
    }
  }

  /// Both parts of the split at `pivot`: blocks containing both endpoints,
  /// and the rest. Uses the block expansion regardless of the pivot type.
  SplitCounts split(std::size_t n, const std::vector<Atom>& atoms, std::size_t j, std::size_t s,
                    const Atom& pivot) {
    detail::SmallGraph g{std::vector<std::uint64_t>(n, 0)};
    for (const Atom& a : atoms) {
      g.adj[a.a] |= std::uint64_t{1} << a.b;
      g.adj[a.b] |= std::uint64_t{1} << a.a;
    }
    if (j > s) return {0, 0};
    try {
      return expand(g, pivot.a, pivot.b, static_cast<long>(j), static_cast<long>(s));
    } catch (const detail::BudgetExceeded&) {
      throw Error(ErrorKind::resource_limit, "connected vertex set budget exhausted");
    }
  }

  const RecursionStats& stats() const { return stats_; }

 private:
  /// Drops isolated vertices and relabels the rest densely, keeping order.
  static detail::SmallGraph strip(const detail::SmallGraph& g) {
    std::vector<std::size_t> keep;
    for (std::size_t v = 0; v < g.size(); ++v) {
      if (g.adj[v]) keep.push_back(v);
    }
    if (keep.size() == g.size()) return g;
    std::vector<std::size_t> index(g.size(), 0);
    for (std::size_t i = 0; i < keep.size(); ++i) index[keep[i]] = i;
    detail::SmallGraph out{std::vector<std::uint64_t>(keep.size(), 0)};
    for (std::size_t i = 0; i < keep.size(); ++i) {
      std::uint64_t m = g.adj[keep[i]];
      while (m) {
        const auto w = static_cast<std::size_t>(std::countr_zero(m));
        m &= m - 1;
        out.adj[i] |= std::uint64_t{1} << index[w];
      }
    }
    return out;
  }

  static std::size_t component_count(const detail::SmallGraph& g) {
    std::uint64_t seen = 0;
    std::size_t count = 0;
    for (std::size_t v = 0; v < g.size(); ++v) {
      if (seen >> v & 1) continue;
      ++count;
      std::uint64_t frontier = std::uint64_t{1} << v;
      seen |= frontier;
      while (frontier) {
        const auto u = static_cast<std::size_t>(std::countr_zero(frontier));
        frontier &= frontier - 1;
        const std::uint64_t fresh = g.adj[u] & ~seen;
        seen |= fresh;
        frontier |= fresh;
      }
    }
    return count;
  }

  /// Vertex order by iterated degree refinement, ties by label. Identical
  /// keys mean identical relabeled graphs, so equal keys share a count.
  static std::string key(const detail::SmallGraph& g, long j, long s) {
    const std::size_t n = g.size();
    std::vector<std::uint32_t> color(n);
    for (std::size_t v = 0; v < n; ++v) color[v] = static_cast<std::uint32_t>(std::popcount(g.adj[v]));
    for (std::size_t round = 0; round < n; ++round) {
      std::vector<std::pair<std::vector<std::uint32_t>, std::size_t>> sig(n);
      for (std::size_t v = 0; v < n; ++v) {
        sig[v].first.push_back(color[v]);
        std::vector<std::uint32_t> nb;
        std::uint64_t m = g.adj[v];
        while (m) {
          nb.push_back(color[static_cast<std::size_t>(std::countr_zero(m))]);
          m &= m - 1;
        }
        std::sort(nb.begin(), nb.end());
        sig[v].first.insert(sig[v].first.end(), nb.begin(), nb.end());
        sig[v].second = v;
      }
      std::vector<std::vector<std::uint32_t>> distinct;
      for (auto& [sv, v] : sig) distinct.push_back(sv);
      std::sort(distinct.begin(), distinct.end());
      distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
      std::vector<std::uint32_t> next(n);
      for (auto& [sv, v] : sig) {
        next[v] = static_cast<std::uint32_t>(
            std::lower_bound(distinct.begin(), distinct.end(), sv) - distinct.begin());
      }
      const bool stable = std::unordered_set<std::uint32_t>(next.begin(), next.end()).size() ==
                          std::unordered_set<std::uint32_t>(color.begin(), color.end()).size();
      color = std::move(next);
      if (stable) break;
    }
    std::vector<std::size_t> order(n);
    for (std::size_t v = 0; v < n; ++v) order[v] = v;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return color[a] != color[b] ? color[a] < color[b] : a < b;
    });
    std::vector<std::size_t> position(n);
    for (std::size_t i = 0; i < n; ++i) position[order[i]] = i;
    std::vector<std::pair<std::uint8_t, std::uint8_t>> edges;
    for (std::size_t v = 0; v < n; ++v) {
      std::uint64_t m = g.adj[v];
      while (m) {
        const auto w = static_cast<std::size_t>(std::countr_zero(m));
        m &= m - 1;
        if (v < w) {
          auto a = static_cast<std::uint8_t>(position[v]);
          auto b = static_cast<std::uint8_t>(position[w]);
          if (a > b) std::swap(a, b);
          edges.emplace_back(a, b);
        }
      }
    }
    std::sort(edges.begin(), edges.end());
    std::string k;
    k.reserve(edges.size() * 2 + 24);
    k += std::to_string(n) + ":" + std::to_string(j) + ":" + std::to_string(s) + ":";
    for (auto [a, b] : edges) {
      k.push_back(static_cast<char>(a));
      k.push_back(static_cast<char>(b));
    }
    return k;
  }

  /// Bridge maximizing the number of vertex pairs it separates; ties go to
  /// the lexicographically smallest edge.
  static std::optional<std::pair<std::size_t, std::size_t>> best_bridge(const detail::SmallGraph& g) {
    std::optional<std::pair<std::size_t, std::size_t>> best;
    std::size_t best_score = 0;
    for (std::size_t a = 0; a < g.size(); ++a) {
      std::uint64_t m = g.adj[a] & ~((std::uint64_t{2} << a) - 1);
      while (m) {
        const auto b = static_cast<std::size_t>(std::countr_zero(m));
        m &= m - 1;
        detail::SmallGraph h = g;
        h.remove_edge(a, b);
        const std::uint64_t side = reach(h, a);
        if (side >> b & 1) continue;
        const std::uint64_t other = reach(h, b);
        const std::size_t score = static_cast<std::size_t>(std::popcount(side)) *
                                  static_cast<std::size_t>(std::popcount(other));
        if (!best || score > best_score) {
          best = std::make_pair(a, b);
          best_score = score;
        }
      }
    }
    return best;
  }

  static std::uint64_t reach(const detail::SmallGraph& g, std::size_t v) {
    std::uint64_t seen = std::uint64_t{1} << v;
    std::uint64_t frontier = seen;
    while (frontier) {
      const auto u = static_cast<std::size_t>(std::countr_zero(frontier));
      frontier &= frontier - 1;
      const std::uint64_t fresh = g.adj[u] & ~seen;
      seen |= fresh;
      frontier |= fresh;
    }
    return seen;
  }

  static std::optional<std::size_t> distance(const detail::SmallGraph& g, std::size_t x,
                                             std::size_t y) {
    std::uint64_t seen = std::uint64_t{1} << x;
    std::uint64_t layer = seen;
    for (std::size_t d = 0; layer; ++d) {
      if (layer >> y & 1) return d;
      std::uint64_t next = 0;
      std::uint64_t m = layer;
      while (m) {
        const auto u = static_cast<std::size_t>(std::countr_zero(m));
        m &= m - 1;
        next |= g.adj[u];
      }
      layer = next & ~seen;
      seen |= layer;
    }
    return std::nullopt;
  }

  static detail::SmallGraph without_vertices(const detail::SmallGraph& g, std::uint64_t removed) {
    detail::SmallGraph out = g;
    for (std::size_t v = 0; v < g.size(); ++v) {
      if (removed >> v & 1) {
        out.adj[v] = 0;
      } else {
        out.adj[v] &= ~removed;
      }
    }
    return out;
  }

  static std::size_t edges_inside(const detail::SmallGraph& g, std::uint64_t set) {
    std::size_t twice = 0;
    std::uint64_t m = set;
    while (m) {
      const auto v = static_cast<std::size_t>(std::countr_zero(m));
      m &= m - 1;
      twice += static_cast<std::size_t>(std::popcount(g.adj[v] & set));
    }
    return twice / 2;
  }

  BigCount solve(const detail::SmallGraph& input, long j, long s) {
    ++stats_.calls;
    if (j < 0 || s < 0 || j > s) return 0;
    if (j == 0) return s == 0 ? 1 : 0;
    const detail::SmallGraph g = strip(input);
    const auto m = static_cast<long>(g.edge_count());
    if (s > m) return 0;
    if (j > static_cast<long>(g.size() - component_count(g))) return 0;

    const std::string k = key(g, j, s);
    if (auto it = memo_.find(k); it != memo_.end()) {
      ++stats_.memo_hits;
      return it->second;
    }

    BigCount result;
    if (auto bridge = best_bridge(g)) {
      ++stats_.bridge_steps;
      detail::SmallGraph h = g;
      h.remove_edge(bridge->first, bridge->second);
      result = solve(h, j - 1, s - 1) + solve(h, j, s);
    } else {
      std::size_t x = 0;
      while (!g.adj[x]) ++x;
      const auto y = static_cast<std::size_t>(std::countr_zero(g.adj[x]));
      detail::SmallGraph h = g;
      h.remove_edge(x, y);
      const auto alternative = distance(h, x, y);
      if (alternative && static_cast<long>(*alternative) > s) {
        ++stats_.long_cycle_steps;
        result = solve(h, j - 1, s - 1) + solve(h, j, s);
      } else {
        ++stats_.block_steps;
        const SplitCounts parts = expand(g, x, y, j, s);
        result = parts.with + parts.without;
      }
    }
    memo_.emplace(k, result);
    return result;
  }

  /// Sums over the connected vertex sets B containing x that could form x's
  /// block, split by whether y is in B.
  SplitCounts expand(const detail::SmallGraph& g, std::size_t x, std::size_t y, long j, long s) {
    SplitCounts parts{0, 0};
    auto visit = [&](std::uint64_t block) {
      if (++stats_.connected_sets > limits_.max_connected_sets) throw detail::BudgetExceeded{};
      const long size = std::popcount(block);
      const long rest_rank = j - (size - 1);
      if (rest_rank < 0) return;
      const long inside = static_cast<long>(edges_inside(g, block));
      const long rest_size = std::max(s - inside, rest_rank);
      BigCount c = solve(without_vertices(g, block), rest_rank, rest_size);
      (block >> y & 1 ? parts.with : parts.without) += c;
    };
    // Each connected set through x exactly once: extend by a candidate v,
    // then forbid v in the later branches.
    auto grow = [&](auto&& self, std::uint64_t set, std::uint64_t candidates,
                    std::uint64_t forbidden) -> void {
      visit(set);
      if (std::popcount(set) > j) return;  // larger blocks exceed the rank
      while (candidates) {
        const std::uint64_t v = candidates & (~candidates + 1);
        candidates ^= v;
        const auto vi = static_cast<std::size_t>(std::countr_zero(v));
        const std::uint64_t fresh = g.adj[vi] & ~set & ~forbidden & ~candidates & ~v;
        self(self, set | v, candidates | fresh, forbidden);
        forbidden |= v;
      }
    };
    const std::uint64_t start = std::uint64_t{1} << x;
    grow(grow, start, g.adj[x], start);
    return parts;
  }

  Limits limits_;
  RecursionStats stats_;
  std::unordered_map<std::string, BigCount> memo_;
};

/// pi(X, j, s, R) by recursion; falls back to the oracle (and says so) when
/// the recursion's budget runs out.
inline RecursiveCountResult count_rank_size_recursive(const CountQuery& q, const Limits& limits = {}) {
  RankSizeCounter counter(limits);
  try {
    BigCount v = counter.count(q.ground_size(), q.reds.atoms(), q.j, q.s);
    return {std::move(v), Engine::recursive, counter.stats()};
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::resource_limit) throw;
  }
  return {count_rank_size_oracle(q, limits), Engine::fallback, counter.stats()};
}

}  // namespace partlat
