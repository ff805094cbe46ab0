#pragma once

// One step of the original recursion for pi(X, j, s, R), applied exactly as
// written: every sub-count on the right-hand side is taken from the oracle,
// and the result is compared with the oracle's value for the query itself.
// This is a diagnostic. RankSizeCounter is the engine.
//
// Reading of the cases, for a pivot e = {x, x'} with alternative
// paths p_1..p_t of lengths l_1 <= ... <= l_t:
//   bridge        no alternative path: pi(R', j-1, s-1) + pi(R', j, s)
//   long-cycles   s <= l_1: the same identity
//   forest-level  j = s > l_1: inclusion-exclusion over cut sets U of the
//                 alternative paths of pi(R'-U, j-1, j-1) + pi(R'-U, j, j)
//   general       j < s, s > l_1: contraction terms over nonempty W, the
//                 contracted-pivot term with twice-interrupted cycles, and the
//                 cut term pi(R'-U, j, s)
// Inclusion-exclusion runs over nonempty subfamilies of the deduplicated cut
// sets, with the union of the chosen cut sets removed.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "partlat/big_count.hpp"
#include "partlat/graph.hpp"
#include "partlat/limits.hpp"
#include "partlat/red_atoms.hpp"

namespace partlat {

struct LiteralStep {
  std::string rule;
  BigCount literal;
  BigCount oracle;
  bool agrees = false;
  std::size_t paths = 0;
  std::size_t cut_sets = 0;
  std::optional<std::string> skipped;
};

struct LiteralLimits {
  std::size_t max_family = 12;  // cut sets per inclusion-exclusion
  std::size_t max_paths = 8;    // alternative paths in the general rule
};

namespace detail {

inline BigCount oracle_on(const LabeledGraph& g, long j, long s, const Limits& limits) {
  if (j < 0 || s < 0) return 0;
  return count_rank_size_oracle(g.vertex_count(), g.edges(), static_cast<std::size_t>(j),
                                static_cast<std::size_t>(s), limits);
}

struct FamilyTooLarge {
  std::size_t size;
};

/// Sum over nonempty subfamilies S of (-1)^(|S|+1) f(union of S).
template <class F>
BigCount inclusion_exclusion(const std::vector<CutSet>& family, std::size_t max_family, F&& f) {
  if (family.size() > max_family) throw FamilyTooLarge{family.size()};
  BigCount total = 0;
  const std::uint64_t subsets = std::uint64_t{1} << family.size();
  for (std::uint64_t mask = 1; mask < subsets; ++mask) {
    std::vector<Edge> removed;
    for (std::size_t i = 0; i < family.size(); ++i) {
      if (mask >> i & 1) removed.insert(removed.end(), family[i].edges.begin(), family[i].edges.end());
    }
    const BigCount term = f(removed);
    if (std::popcount(mask) % 2 == 1) {
      total += term;
    } else {
      total -= term;
    }
  }
  return total;
}

/// Path edges after contraction, loops dropped, order kept, duplicates merged.
inline std::vector<Edge> map_path(const std::vector<Edge>& path, const std::vector<Label>& vertex_map) {
  std::vector<Edge> out;
  for (const Edge& e : path) {
    const Label a = vertex_map[e.a], b = vertex_map[e.b];
    if (a == b) continue;
    const Edge mapped(a, b);
    if (std::find(out.begin(), out.end(), mapped) == out.end()) out.push_back(mapped);
  }
  return out;
}

}  // namespace detail

inline LiteralStep evaluate_literal_step(const CountQuery& q, const Atom& pivot,
                                         const Limits& limits = {}, LiteralLimits literal = {}) {
  if (!q.reds.contains(pivot)) {
    throw Error(ErrorKind::invalid_pivot, "pivot " + std::to_string(pivot.a) + "-" +
                                              std::to_string(pivot.b) + " is not a red atom");
  }
  LiteralStep step;
  step.oracle = count_rank_size_oracle(q, limits);
  const long j = static_cast<long>(q.j);
  const long s = static_cast<long>(q.s);
  const LabeledGraph g = q.reds.graph();
  const LabeledGraph reduced = g.without_edges({pivot});

  auto finish = [&](std::string rule, BigCount value) {
    step.rule = std::move(rule);
    step.literal = std::move(value);
    step.agrees = step.literal == step.oracle;
    return step;
  };

  if (j > s) return finish("rank-exceeds-size", 0);
  if (s == 0) return finish("empty", j == 0 ? 1 : 0);

  const auto paths = simple_paths_between(g, pivot.a, pivot.b, pivot, limits);
  step.paths = paths.size();
  auto deletion = [&] {
    return detail::oracle_on(reduced, j - 1, s - 1, limits) + detail::oracle_on(reduced, j, s, limits);
  };
  if (paths.empty()) return finish("bridge", deletion());
  const auto l1 = static_cast<long>(paths.front().length());
  if (s <= l1) return finish("long-cycles", deletion());

  std::vector<std::vector<Edge>> path_edges;
  for (const auto& p : paths) path_edges.push_back(p.edges);
  const auto cuts = build_cut_sets_for_paths(path_edges, 1, limits);
  step.cut_sets = cuts.size();

  try {
    if (j == s) {
      BigCount value = detail::inclusion_exclusion(cuts, literal.max_family, [&](const auto& removed) {
        const LabeledGraph h = reduced.without_edges(removed);
        return detail::oracle_on(h, j - 1, j - 1, limits) + detail::oracle_on(h, j, j, limits);
      });
      return finish("forest-level", std::move(value));
    }

    if (paths.size() > literal.max_paths) {
      step.rule = "general";
      step.skipped = std::to_string(paths.size()) + " alternative paths exceed diagnostic ceiling " +
                     std::to_string(literal.max_paths);
      return step;
    }

    const std::size_t t = paths.size();
    const long n = static_cast<long>(q.ground_size());
    BigCount contraction_terms = 0;
    for (std::uint64_t w = 1; w < (std::uint64_t{1} << t); ++w) {
      std::vector<Edge> collapsed_edges;
      for (std::size_t v = 0; v < t; ++v) {
        if (w >> v & 1) {
          for (const Edge& e : path_edges[v]) {
            if (std::find(collapsed_edges.begin(), collapsed_edges.end(), e) == collapsed_edges.end()) {
              collapsed_edges.push_back(e);
            }
          }
        }
      }
      const auto contracted = contract(g, detail::vertices_of(collapsed_edges));
      const long n_w = static_cast<long>(contracted.graph.vertex_count());
      const long j_w = n_w - (n - j);
      const long s_w = static_cast<long>(collapsed_edges.size());
      std::vector<std::vector<Edge>> remaining;
      for (std::size_t v = 0; v < t; ++v) {
        if (w >> v & 1) continue;
        auto mapped = detail::map_path(path_edges[v], contracted.vertex_map);
        if (!mapped.empty()) remaining.push_back(std::move(mapped));
      }
      const auto family = build_cut_sets_for_paths(remaining, 1, limits);
      if (family.empty()) {
        contraction_terms += detail::oracle_on(contracted.graph, j_w, s - s_w, limits);
      } else {
        contraction_terms += detail::inclusion_exclusion(family, literal.max_family, [&](const auto& removed) {
          return detail::oracle_on(contracted.graph.without_edges(removed), j_w, s - s_w, limits);
        });
      }
    }

    const auto merged = contract(g, {pivot.a, pivot.b});
    std::vector<std::vector<Edge>> cycles;
    for (const auto& p : path_edges) {
      auto mapped = detail::map_path(p, merged.vertex_map);
      if (!mapped.empty()) cycles.push_back(std::move(mapped));
    }
    const auto twice = build_cut_sets_for_paths(cycles, 2, limits);
    BigCount pivot_term;
    if (twice.empty()) {
      pivot_term = detail::oracle_on(merged.graph, j - 1, s - 1, limits);
    } else {
      pivot_term = detail::inclusion_exclusion(twice, literal.max_family, [&](const auto& removed) {
        return detail::oracle_on(merged.graph.without_edges(removed), j - 1, s - 1, limits);
      });
    }

    const BigCount cut_term = detail::inclusion_exclusion(cuts, literal.max_family, [&](const auto& removed) {
      return detail::oracle_on(reduced.without_edges(removed), j, s, limits);
    });
    return finish("general", contraction_terms + pivot_term + cut_term);
  } catch (const detail::FamilyTooLarge& e) {
    step.rule = j == s ? "forest-level" : "general";
    step.skipped = std::to_string(e.size) + " cut sets exceed diagnostic ceiling " +
                   std::to_string(literal.max_family);
    return step;
  }
}

}  // namespace partlat
