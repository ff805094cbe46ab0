#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace partlat;

TEST(Recursion, MatchesOracleOnEveryRedSetUpToFive) {
  for (std::size_t n = 1; n <= 5; ++n) {
    const auto atoms = all_atoms(n);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << atoms.size()); ++mask) {
      const RedAtomSet set(n, oracle::pick(atoms, mask));
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t s = 0; s <= set.size(); ++s) {
          const CountQuery q(set, j, s);
          const auto r = count_rank_size_recursive(q);
          ASSERT_EQ(r.engine, Engine::recursive);
          ASSERT_EQ(r.value, count_rank_size_oracle(q)) << format_edge_list(set.atoms()) << " j=" << j
                                                        << " s=" << s;
        }
      }
    }
  }
}

TEST(Recursion, MatchesOracleOnRandomQueries) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t n = 6 + trial % 2;
    const RedAtomSet set(n, oracle::random_reds(n, 0.5, rng));
    const std::size_t j = rng() % n;
    const std::size_t s = rng() % (set.size() + 1);
    const CountQuery q(set, j, s);
    ASSERT_EQ(count_rank_size_recursive(q).value, count_rank_size_oracle(q))
        << format_edge_list(set.atoms()) << " j=" << j << " s=" << s;
  }
}

TEST(Recursion, BaseCases) {
  const RedAtomSet set(4, {Atom(0, 1), Atom(1, 2), Atom(2, 3), Atom(0, 3)});
  EXPECT_EQ(count_rank_size_recursive(CountQuery(set, 0, 0)).value, 1);
  EXPECT_EQ(count_rank_size_recursive(CountQuery(set, 3, 2)).value, 0);
  EXPECT_EQ(count_rank_size_recursive(CountQuery(set, 1, 2)).value, 0);
  const RedAtomSet empty(4, {});
  EXPECT_EQ(count_rank_size_recursive(CountQuery(empty, 0, 0)).value, 1);
  EXPECT_EQ(count_rank_size_recursive(CountQuery(empty, 1, 0)).value, 0);
}

TEST(Recursion, TreeGivesBinomials) {
  const RedAtomSet path(6, {Atom(0, 1), Atom(1, 2), Atom(2, 3), Atom(3, 4), Atom(4, 5)});
  for (std::size_t s = 0; s <= 5; ++s) {
    EXPECT_EQ(count_rank_size_recursive(CountQuery(path, s, s)).value, binomial(5, s));
  }
}

TEST(Recursion, LargerGraphs) {
  const RedAtomSet k7(7, all_atoms(7));
  RankSizeCounter counter;
  for (std::size_t j = 0; j < 7; ++j) {
    for (std::size_t s = j; s <= 21; ++s) {
      EXPECT_EQ(counter.count(7, k7.atoms(), j, s), count_rank_size_oracle(CountQuery(k7, j, s)));
    }
  }
  // K12: C(66, s) subsets is far beyond the oracle; every partition of rank j
  // has connected complete blocks, so the count for large s is known.
  const auto k12 = all_atoms(12);
  EXPECT_EQ(counter.count(12, k12, 11, 66), 1);
  EXPECT_EQ(counter.count(12, k12, 1, 1), 66);
  EXPECT_GT(counter.stats().calls, 0u);
}

TEST(Recursion, FallsBackWhenBudgetRunsOut) {
  Limits tight;
  tight.max_connected_sets = 1;
  const RedAtomSet k5(5, all_atoms(5));
  const auto r = count_rank_size_recursive(CountQuery(k5, 3, 5), tight);
  EXPECT_EQ(r.engine, Engine::fallback);
  EXPECT_EQ(r.value, count_rank_size_oracle(CountQuery(k5, 3, 5)));
  EXPECT_STREQ(to_string(r.engine), "fallback");
}

TEST(Recursion, SplitMatchesOracleSplit) {
  const RedAtomSet set(5, {Atom(0, 1), Atom(1, 2), Atom(0, 2), Atom(2, 3), Atom(3, 4), Atom(1, 4)});
  RankSizeCounter counter;
  for (const Atom& pivot : set.atoms()) {
    for (std::size_t j = 0; j < 5; ++j) {
      for (std::size_t s = 0; s <= set.size(); ++s) {
        const auto a = counter.split(5, set.atoms(), j, s, pivot);
        const auto b = split_by_atom(CountQuery(set, j, s), pivot);
        EXPECT_EQ(a.with, b.with);
        EXPECT_EQ(a.without, b.without);
      }
    }
  }
}

TEST(LiteralStep, BridgeAndLongCycleRules) {
  const RedAtomSet set(4, {Atom(0, 1), Atom(1, 2), Atom(2, 3)});
  const auto step = evaluate_literal_step(CountQuery(set, 2, 2), Atom(1, 2));
  EXPECT_EQ(step.rule, "bridge");
  EXPECT_TRUE(step.agrees);
  EXPECT_EQ(step.literal, 3);

  const RedAtomSet triangle(3, {Atom(0, 1), Atom(1, 2), Atom(0, 2)});
  const auto cyc = evaluate_literal_step(CountQuery(triangle, 1, 1), Atom(0, 1));
  EXPECT_EQ(cyc.rule, "long-cycles");
  EXPECT_TRUE(cyc.agrees);
}

TEST(LiteralStep, FourCycleDivergence) {
  // Read literally, the deletion identity at s <= l1 overcounts the 4-cycle:
  // all four 3-subsets join to the same partition.
  const RedAtomSet c4(4, {Atom(0, 1), Atom(1, 2), Atom(2, 3), Atom(0, 3)});
  const auto step = evaluate_literal_step(CountQuery(c4, 3, 3), Atom(0, 1));
  EXPECT_EQ(step.rule, "long-cycles");
  EXPECT_EQ(step.oracle, 1);
  EXPECT_EQ(step.literal, 4);
  EXPECT_FALSE(step.agrees);
  EXPECT_THROW(evaluate_literal_step(CountQuery(c4, 1, 1), Atom(0, 2)), Error);
}

TEST(LiteralStep, RulesAreReached) {
  std::set<std::string> rules;
  const auto atoms = all_atoms(4);
  for (std::uint64_t mask = 1; mask < 64; ++mask) {
    const RedAtomSet set(4, oracle::pick(atoms, mask));
    for (std::size_t j = 0; j < 4; ++j) {
      for (std::size_t s = 0; s <= set.size(); ++s) {
        rules.insert(evaluate_literal_step(CountQuery(set, j, s), set.atoms().front()).rule);
      }
    }
  }
  EXPECT_EQ(rules, (std::set<std::string>{"rank-exceeds-size", "empty", "bridge", "long-cycles", "forest-level",
                                          "general"}));
}
