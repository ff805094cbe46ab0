#pragma once

// Factorization conditions for Pi(X) viewed as a join monoid whose
// factorizations are sets of distinct atoms.

#include <array>
#include <map>
#include <string>
#include <vector>

#include "partlat/big_count.hpp"
#include "partlat/decomposition.hpp"
#include "partlat/graph.hpp"
#include "partlat/lattice.hpp"
#include "partlat/limits.hpp"
#include "partlat/report.hpp"

namespace partlat {

/// Number of atomic decompositions of p, minimal or not. finest(n) maps to 0.
inline BigCount count_all_decompositions(const SetPartition& p, const Limits& limits = {}) {
  if (rank(p) == 0) return 0;
  return component_preserving_subgraphs(graph_of_partition(p), limits);
}

namespace detail {

inline PropertyReport skipped_report(std::string property, std::size_t n, std::string reason) {
  PropertyReport r = make_report(std::move(property), n);
  r.skipped = std::move(reason);
  return r;
}

}  // namespace detail

/// ACCP, FFM and BFM at size n, in that order.
///
/// ACCP follows from finite height; the bound is the height n-1. FFM scans
/// every partition and records the largest decomposition count, checking it
/// against the 2^|A(pi)| subset bound. BFM records the largest possible
/// decomposition size, C(n,2).
inline std::array<PropertyReport, 3> check_ffm_bfm_accp(std::size_t n, const Limits& limits = {}) {
  PropertyReport accp = make_report("ACCP", n);
  accp.bound = BigCount(n - 1);
  accp.checked = 1;

  PropertyReport ffm = make_report("FFM", n);
  PropertyReport bfm = make_report("BFM", n);
  BigCount max_count = 0;
  std::size_t max_size = 0;
  for_each_partition(
      n,
      [&](const SetPartition& p) {
        const auto [lo, hi] = decomposition_size_bounds(p);
        const BigCount count = count_all_decompositions(p, limits);
        ++ffm.checked;
        ++bfm.checked;
        if (count > ipow(2, hi) || (rank(p) > 0 && count == 0)) {
          ++ffm.violations;
          if (!ffm.witness) ffm.witness = Witness{{p}, {}, {count}, "count outside [1, 2^|A(pi)|]"};
        }
        if (hi > n * (n - 1) / 2 || lo > hi) {
          ++bfm.violations;
          if (!bfm.witness) bfm.witness = Witness{{p}, {}, {}, "size bounds out of range"};
        }
        max_count = std::max(max_count, count);
        max_size = std::max(max_size, hi);
        return true;
      },
      limits);
  ffm.holds = ffm.violations == 0;
  ffm.bound = max_count;
  bfm.holds = bfm.violations == 0;
  bfm.bound = BigCount(max_size);
  return {accp, ffm, bfm};
}

/// A partition with decompositions of two different sizes. Returns holds=false
/// with the minimal and the full decomposition as witnesses, or holds=true
/// when every block has at most two elements.
inline PropertyReport hfm_counterexample(const SetPartition& p) {
  PropertyReport r = make_report("HFM", p.ground_size());
  r.checked = 1;
  const auto [lo, hi] = decomposition_size_bounds(p);
  if (lo == hi) {
    r.holds = true;
    return r;
  }
  const auto minimal = minimal_decompositions(p, {.emit_empty_for_finest = false});
  r.holds = false;
  r.witness = Witness{{p}, {minimal.front().atoms(), atoms_below(p)}, {BigCount(lo), BigCount(hi)},
                      "decompositions of different sizes"};
  return r;
}

/// HFM at size n, using the block {0,1,2}. Vacuous for n <= 2.
inline PropertyReport hfm_counterexample(std::size_t n) {
  if (n < 3) {
    detail::require_ground_size(n);
    PropertyReport r = make_report("HFM", n);
    r.checked = 1;
    return r;
  }
  PropertyReport r = hfm_counterexample(partition_with_blocks(n, {{0, 1, 2}}));
  r.expected = false;
  return r;
}

/// A partition with two distinct minimal decompositions: the star at the
/// smallest element of a block of size >= 3 and the path through it.
inline PropertyReport ufm_counterexample(const SetPartition& p) {
  PropertyReport r = make_report("UFM", p.ground_size());
  r.checked = 1;
  for (const auto& block : p.blocks()) {
    if (block.size() < 3) continue;
    std::vector<Atom> star;
    std::vector<Atom> path;
    for (std::size_t i = 1; i < block.size(); ++i) {
      star.emplace_back(block[0], block[i]);
      path.emplace_back(block[i - 1], block[i]);
    }
    std::vector<Atom> rest;
    for (const auto& other : p.blocks()) {
      if (other == block) continue;
      for (std::size_t i = 1; i < other.size(); ++i) rest.emplace_back(other[i - 1], other[i]);
    }
    star.insert(star.end(), rest.begin(), rest.end());
    path.insert(path.end(), rest.begin(), rest.end());
    const AtomicDecomposition a(p, star);
    const AtomicDecomposition b(p, path);
    r.holds = false;
    r.witness = Witness{{p}, {a.atoms(), b.atoms()}, {nmin_closed_form(p)},
                        "two distinct minimal decompositions"};
    return r;
  }
  r.holds = true;
  return r;
}

inline PropertyReport ufm_counterexample(std::size_t n) {
  if (n < 3) {
    detail::require_ground_size(n);
    PropertyReport r = make_report("UFM", n);
    r.checked = 1;
    return r;
  }
  PropertyReport r = ufm_counterexample(partition_with_blocks(n, {{0, 1, 2}}));
  r.expected = false;
  return r;
}

/// HFRL asks that partitions of equal rank have equal decomposition counts.
/// For n >= 5 the pair with block sizes (2,2) and (3), padded with
/// singletons, is tried first; otherwise every same-rank pair is scanned.
inline PropertyReport hfrl_counterexample(std::size_t n, const Limits& limits = {}) {
  PropertyReport r = make_report("HFRL", n);
  if (n >= 5) {
    const auto p = partition_with_blocks(n, {{1, 2}, {3, 4}});
    const auto q = partition_with_blocks(n, {{2, 3, 4}});
    const BigCount cp = count_all_decompositions(p, limits);
    const BigCount cq = count_all_decompositions(q, limits);
    r.checked = 1;
    r.expected = false;
    if (cp != cq) {
      r.holds = false;
      r.violations = 1;
      r.witness = Witness{{p, q}, {}, {cp, cq}, "same rank, different decomposition counts"};
      return r;
    }
  } else {
    r.expected = std::nullopt;
  }
  // Scan: first partition of each rank is the reference.
  std::map<std::size_t, std::pair<SetPartition, BigCount>> reference;
  r.holds = true;
  r.checked = 0;
  for_each_partition(
      n,
      [&](const SetPartition& p) {
        ++r.checked;
        const BigCount c = count_all_decompositions(p, limits);
        auto [it, inserted] = reference.try_emplace(rank(p), p, c);
        if (!inserted && it->second.second != c) {
          ++r.violations;
          if (r.holds) {
            r.holds = false;
            r.witness = Witness{{it->second.first, p}, {}, {it->second.second, c},
                                "same rank, different decomposition counts"};
          }
        }
        return true;
      },
      limits);
  return r;
}

}  // namespace partlat
