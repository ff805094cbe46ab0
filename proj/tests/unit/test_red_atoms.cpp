#include <gtest/gtest.h>

#include <numeric>

#include "oracles.hpp"

using namespace partlat;

namespace {

std::vector<Atom> cycle_atoms(std::size_t m, Label offset = 0) {
  std::vector<Atom> out;
  for (Label i = 0; i < m; ++i) out.emplace_back(offset + i, offset + static_cast<Label>((i + 1) % m));
  return out;
}

}  // namespace

TEST(RedAtoms, SetValidation) {
  EXPECT_THROW(RedAtomSet(3, {Atom(0, 3)}), Error);
  EXPECT_THROW(RedAtomSet(3, {Atom(0, 1), Atom(1, 0)}), Error);
  const RedAtomSet r(3, {Atom(1, 2), Atom(0, 1)});
  EXPECT_EQ(r.atoms().front(), Atom(0, 1));
  EXPECT_TRUE(r.contains(Atom(2, 1)));
  EXPECT_THROW(CountQuery(r, 3, 0), Error);
  EXPECT_THROW(CountQuery(r, 0, 3), Error);
}

TEST(RedAtoms, ReachableMatchesSubsetScan) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 80; ++trial) {
    const std::size_t n = 2 + trial % 5;
    const auto reds = oracle::random_reds(n, 0.5, rng);
    const RedAtomSet set(n, reds);
    const auto got = reachable_partitions(set);
    const auto expected = oracle::reachable(n, reds);
    EXPECT_EQ(std::set<SetPartition>(got.begin(), got.end()), expected);
    EXPECT_TRUE(std::is_sorted(got.begin(), got.end()));
    EXPECT_EQ(quotient_count_structured(set), BigCount(expected.size()));
    const auto nonempty = reachable_partitions(set, {.nonempty_joins = true});
    EXPECT_EQ(nonempty.size() + (reds.empty() ? 0 : 1), got.size());
  }
}

TEST(RedAtoms, ForestsGiveAllSubsets) {
  std::mt19937_64 rng(5);
  for (std::size_t edges = 1; edges <= 12; ++edges) {
    std::vector<Label> verts(edges + 1);
    std::iota(verts.begin(), verts.end(), 0);
    std::shuffle(verts.begin(), verts.end(), rng);
    const RedAtomSet set(edges + 1, oracle::random_tree(verts, rng));
    EXPECT_EQ(reachable_partitions(set).size(), std::size_t{1} << edges);
    EXPECT_EQ(quotient_count_structured(set), ipow(2, edges));
  }
}

TEST(RedAtoms, CyclesLoseOnePerEdge) {
  for (std::size_t m = 3; m <= 10; ++m) {
    const RedAtomSet set(m, cycle_atoms(m));
    const BigCount expected = ipow(2, m) - m;
    EXPECT_EQ(BigCount(reachable_partitions(set).size()), expected) << "m=" << m;
    EXPECT_EQ(quotient_count_structured(set), expected) << "m=" << m;
  }
}

TEST(RedAtoms, ProductOverCycleClasses) {
  // Composite graphs: cycles and cliques hung on a random tree.
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 120; ++trial) {
    const std::size_t parts = 1 + trial % 3;
    std::vector<Atom> reds;
    Label next = 0;
    std::vector<Label> anchors;
    for (std::size_t k = 0; k < parts; ++k) {
      const std::size_t size = 3 + (rng() % 2);
      const Label base = next;
      if (rng() % 2) {
        for (const Atom& a : cycle_atoms(size, base)) reds.push_back(a);
      } else {
        for (Label a = 0; a < size; ++a)
          for (Label b = a + 1; b < size; ++b)
            if (rng() % 4 != 0 || b == a + 1) reds.emplace_back(base + a, base + b);
      }
      anchors.push_back(base + static_cast<Label>(rng() % size));
      next += static_cast<Label>(size);
    }
    for (std::size_t k = 1; k < anchors.size(); ++k) reds.emplace_back(anchors[k - 1], anchors[k]);
    const std::size_t pendant = rng() % 3;
    for (std::size_t k = 0; k < pendant; ++k) {
      reds.emplace_back(static_cast<Label>(rng() % next), next);
      ++next;
    }
    std::sort(reds.begin(), reds.end());
    reds.erase(std::unique(reds.begin(), reds.end()), reds.end());
    const RedAtomSet set(next, reds);
    EXPECT_EQ(quotient_count_structured(set), BigCount(reachable_partitions(set).size()))
        << format_edge_list(reds);
  }
}

TEST(RedAtoms, OracleExamples) {
  const RedAtomSet triangle(3, cycle_atoms(3));
  EXPECT_EQ(count_rank_size_oracle(CountQuery(triangle, 2, 2)), 1);
  EXPECT_EQ(count_rank_size_oracle(CountQuery(triangle, 0, 0)), 1);
  EXPECT_EQ(count_rank_size_oracle(CountQuery(triangle, 1, 2)), 0);
  const RedAtomSet path(4, {Atom(0, 1), Atom(1, 2), Atom(2, 3)});
  EXPECT_EQ(count_rank_size_oracle(CountQuery(path, 2, 2)), 3);
  EXPECT_EQ(count_rank_size_oracle(CountQuery(path, 1, 2)), 0);
}

TEST(RedAtoms, OracleMatchesSubsetScan) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + trial % 4;
    const auto reds = oracle::random_reds(n, 0.6, rng);
    const RedAtomSet set(n, reds);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t s = 0; s <= reds.size(); ++s) {
        EXPECT_EQ(count_rank_size_oracle(CountQuery(set, j, s)), oracle::rank_size(n, reds, j, s));
      }
    }
  }
}

TEST(RedAtoms, SumOverRanksCountsDistinctJoins) {
  const RedAtomSet set(5, {Atom(0, 1), Atom(1, 2), Atom(0, 2), Atom(2, 3), Atom(3, 4), Atom(2, 4)});
  for (std::size_t s = 0; s <= set.size(); ++s) {
    std::set<SetPartition> joins;
    for (std::uint64_t mask = 0; mask < 64; ++mask) {
      if (static_cast<std::size_t>(std::popcount(mask)) == s) {
        joins.insert(oracle::join_atoms(5, oracle::pick(set.atoms(), mask)));
      }
    }
    BigCount total = 0;
    for (std::size_t j = 0; j < 5; ++j) total += count_rank_size_oracle(CountQuery(set, j, s));
    EXPECT_EQ(total, BigCount(joins.size())) << "s=" << s;
  }
}

TEST(RedAtoms, SplitIdentity) {
  for (std::size_t n = 2; n <= 5; ++n) {
    const auto atoms = all_atoms(n);
    std::mt19937_64 rng(n);
    const int sets = n <= 4 ? 1 << atoms.size() : 150;
    for (int k = 0; k < sets; ++k) {
      const std::uint64_t mask = n <= 4 ? static_cast<std::uint64_t>(k) : rng() % (1u << atoms.size());
      const RedAtomSet set(n, oracle::pick(atoms, mask));
      for (const Atom& pivot : set.atoms()) {
        for (std::size_t j = 0; j < n; ++j) {
          for (std::size_t s = 0; s <= set.size(); ++s) {
            const CountQuery q(set, j, s);
            const auto split = split_by_atom(q, pivot);
            ASSERT_EQ(split.with + split.without, count_rank_size_oracle(q));
          }
        }
      }
    }
  }
}

TEST(RedAtoms, SplitAtABridge) {
  // With a bridge pivot and j <= s, the `with` side is the count one level down
  // on the remaining atoms.
  const RedAtomSet set(5, {Atom(0, 1), Atom(1, 2), Atom(0, 2), Atom(2, 3), Atom(3, 4)});
  const RedAtomSet rest(5, {Atom(0, 1), Atom(1, 2), Atom(0, 2), Atom(3, 4)});
  for (std::size_t j = 1; j < 5; ++j) {
    for (std::size_t s = j; s <= set.size(); ++s) {
      const auto split = split_by_atom(CountQuery(set, j, s), Atom(2, 3));
      EXPECT_EQ(split.with, count_rank_size_oracle(CountQuery(rest, j - 1, s - 1))) << j << "," << s;
    }
  }
  try {
    split_by_atom(CountQuery(set, 1, 1), Atom(0, 4));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_pivot);
  }
}

TEST(RedAtoms, OracleCeiling) {
  Limits tight;
  tight.max_oracle_subsets = 10;
  const RedAtomSet set(6, all_atoms(6));
  try {
    count_rank_size_oracle(CountQuery(set, 3, 3), tight);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::resource_limit);
  }
}

TEST(RedAtoms, CutSets) {
  const LabeledGraph triangle(3, cycle_atoms(3));
  const auto cuts = build_cut_sets(triangle, 0, 1, Atom(0, 1), 1);
  ASSERT_EQ(cuts.size(), 2u);
  EXPECT_EQ(cuts[0].edges.size(), 1u);
  EXPECT_NE(cuts[0].edges, cuts[1].edges);

  // Alternative paths 0-2-1 and 0-3-4-1.
  const LabeledGraph two(5, {Atom(0, 1), Atom(0, 2), Atom(1, 2), Atom(0, 3), Atom(3, 4), Atom(1, 4)});
  const auto six = build_cut_sets(two, 0, 1, Atom(0, 1), 1);
  EXPECT_EQ(six.size(), 6u);
  for (const auto& c : six) {
    EXPECT_EQ(c.edges.size(), 2u);
    EXPECT_EQ(c.multiplicity, 1u);
    EXPECT_EQ(c.multiindex.size(), 2u);
  }

  const LabeledGraph path(3, {Atom(0, 1), Atom(1, 2)});
  EXPECT_TRUE(build_cut_sets(path, 0, 1, Atom(0, 1), 1).empty());
  EXPECT_THROW(build_cut_sets_for_paths({{Atom(0, 1)}}, 3), Error);
}

TEST(RedAtoms, SharedEdgesAreNotCutTwice) {
  // Paths 0-2-1 and 0-2-3-1 share the edge 0-2.
  const std::vector<std::vector<Edge>> paths{{Atom(0, 2), Atom(1, 2)}, {Atom(0, 2), Atom(2, 3), Atom(1, 3)}};
  const auto cuts = build_cut_sets_for_paths(paths, 1);
  bool saw_shared = false;
  for (const auto& c : cuts) {
    if (c.edges == std::vector<Edge>{Atom(0, 2)}) {
      saw_shared = true;
      EXPECT_EQ(c.multiindex[1], CutSet::already_cut);
    }
  }
  EXPECT_TRUE(saw_shared);
  EXPECT_EQ(cuts.size(), 4u);
}
