#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace partlat;

TEST(PropertySuite, StructuralPropertiesHold) {
  for (std::size_t n = 1; n <= 6; ++n) {
    for (const char* name : {"zero", "one", "block-count", "block-sizes", "cover", "isotone", "cayley",
                             "bounded"}) {
      const auto r = run_property(name, n);
      if (r.skipped) continue;
      EXPECT_TRUE(r.holds) << name << " n=" << n << " " << r.note;
      EXPECT_TRUE(r.passed()) << name << " n=" << n;
      if (n >= 3) {
        EXPECT_GT(r.checked, 0u) << name << " n=" << n;
      }
    }
  }
}

TEST(PropertySuite, MapsHold) {
  for (std::size_t n = 1; n <= 5; ++n) {
    EXPECT_TRUE(run_property("extend", n).passed()) << n;
    EXPECT_TRUE(run_property("relabel", n).passed()) << n;
  }
}

TEST(PropertySuite, SupermodularityFailsAtFinestMeets) {
  EXPECT_TRUE(run_property("ix", 3).holds);
  const auto r = run_property("supermodularity", 4);
  EXPECT_FALSE(r.holds);
  EXPECT_EQ(r.checked, 225u);
  EXPECT_EQ(r.violations, 6u);
  ASSERT_TRUE(r.witness);
  EXPECT_EQ(meet(r.witness->partitions[0], r.witness->partitions[1]), finest(4));
  const auto r5 = run_property("supermodularity", 5);
  EXPECT_EQ(r5.checked, 2704u);
  EXPECT_EQ(r5.violations, 50u);
}

TEST(PropertySuite, SupermodularityUnderEmptyProduct) {
  // With N(finest) = 1 the scan at n=4 is clean.
  const auto r = check_supermodularity(4, {}, FinestConvention::empty_product);
  EXPECT_TRUE(r.holds) << r.note;
}

TEST(PropertySuite, MetricAxiomsFailAtFour) {
  const auto r = run_property("x", 4);
  EXPECT_EQ(r.checked, 3375u);
  EXPECT_FALSE(r.holds);
  EXPECT_EQ(r.violations, 192u);
}

TEST(PropertySuite, MetricIdentityViolationByHand) {
  // Distinct partitions at distance 0: both have one minimal decomposition
  // and so does their meet.
  const auto p = parse_partition("0,1|2|3");
  const auto q = parse_partition("0,1|2,3");
  EXPECT_NE(p, q);
  EXPECT_EQ(metric_d(p, q), 0);
}

TEST(PropertySuite, CeilingsSkip) {
  SuiteCeilings c;
  c.pair_scan_n = 3;
  const auto r = run_property("isotone", 4, c);
  ASSERT_TRUE(r.skipped);
  EXPECT_FALSE(r.passed());
  EXPECT_THROW(run_property("nonsense", 3), Error);
}

TEST(PropertySuite, AliasesAndNames) {
  EXPECT_EQ(canonical_property_name("vii"), "cayley");
  EXPECT_EQ(canonical_property_name("hfrl"), "HFRL");
  EXPECT_EQ(property_names().size(), 18u);
  EXPECT_EQ(run_property("accp", 3).property, "ACCP");
}

TEST(PropertySuite, MetricSamplingIsSeeded) {
  SuiteCeilings c;
  c.sampled_triples = 500;
  const auto a = check_metric(5, c);
  const auto b = check_metric(5, c);
  EXPECT_EQ(a.checked, 500u);
  EXPECT_EQ(a.violations, b.violations);
  EXPECT_EQ(a.note, b.note);
}
