#include <gtest/gtest.h>

#include <set>

#include "support.hpp"

namespace urykit {
namespace {

using test::map_on;
using test::R;
using test::space;

GrowingSpace pq2() { return GrowingSpace(space({"p", "q"}, {{"0", "2"}, {"2", "0"}})); }

TEST(RealizeKatetov, NewPointGetsExtension) {
  GrowingSpace s = pq2();
  const PointId z = realize_katetov(s, map_on({0}, {"1"}));
  EXPECT_EQ(z, 2u);
  EXPECT_EQ(s.distance(z, 0), Rat(1));
  EXPECT_EQ(s.distance(z, 1), Rat(3));
  ASSERT_NE(s.provenance(z), nullptr);
  EXPECT_EQ(s.provenance(0), nullptr);
}

TEST(RealizeKatetov, PointMapIsDeduplicated) {
  GrowingSpace s = pq2();
  EXPECT_EQ(realize_katetov(s, map_on({0, 1}, {"0", "2"})), 0u);
  EXPECT_EQ(s.size(), 2u);
}

TEST(RealizeKatetov, TotalMapKeepsDistances) {
  GrowingSpace s = pq2();
  const PointId z = realize_katetov(s, map_on({0, 1}, {"3/2", "1"}));
  EXPECT_EQ(s.distance(z, 0), R("3/2"));
  EXPECT_EQ(s.distance(z, 1), Rat(1));
  EXPECT_THROW(realize_katetov(s, map_on({0, 1}, {"5", "1"})), KatetovError);
}

TEST(GrowingSpace, LazyDistancesMatchEagerConstruction) {
  Rng rng(53);
  const auto values = value_grid(6, 2);
  for (int trial = 0; trial < 60; ++trial) {
    FinMetric eager = random_metric(rng, 2 + trial % 3, values);
    GrowingSpace lazy(eager);
    for (int step = 0; step < 12; ++step) {
      std::vector<PointId> dom;
      for (PointId p = 0; p < eager.size(); ++p) {
        if (std::uniform_int_distribution<int>(0, 2)(rng) == 0 || p == 0) dom.push_back(p);
      }
      const KatetovMap f = random_katetov(rng, eager, dom, values);
      const KatetovMap full = katetov_extension(eager, f);
      eager.append("e" + std::to_string(step), full.values());
      lazy.append(f);
    }
    ASSERT_EQ(lazy.size(), eager.size());
    for (PointId p = 0; p < eager.size(); ++p) {
      for (PointId q = 0; q < eager.size(); ++q) ASSERT_EQ(lazy.distance(p, q), eager.distance(p, q));
    }
    const FinMetric m = lazy.materialize();
    EXPECT_EQ(m.matrix(), eager.matrix());
  }
}

TEST(RealizeSpec, SingleRowMatchesRealizeKatetov) {
  GrowingSpace s1 = pq2();
  GrowingSpace s2 = pq2();
  ExtensionSpec spec{s1.base(), test::one_point("a1"), {test::rats({"1", "3"})}};
  const std::vector<PointId> base{0, 1};
  const auto placed = realize_spec(s1, base, spec);
  const PointId z = realize_katetov(s2, map_on({0, 1}, {"1", "3"}));
  ASSERT_EQ(placed.size(), 1u);
  EXPECT_EQ(s1.materialize(), s2.materialize());
  EXPECT_EQ(placed[0], z);
}

TEST(RealizeSpec, TwoPointPattern) {
  GrowingSpace s(test::one_point());
  ExtensionSpec spec{s.base(), test::segment("1"), {test::rats({"1"}), test::rats({"2"})}};
  const std::vector<PointId> base{0};
  const auto z = realize_spec(s, base, spec);
  EXPECT_EQ(s.distance(z[0], 0), Rat(1));
  EXPECT_EQ(s.distance(z[1], 0), Rat(2));
  EXPECT_EQ(s.distance(z[0], z[1]), Rat(1));
}

TEST(RealizeSpec, CopiesOfExistingTuplesAreIsometric) {
  Rng rng(59);
  const auto values = value_grid(6, 2);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t ny = 1 + trial % 3;
    const std::size_t nt = 1 + trial % 4;
    GrowingSpace s(random_metric(rng, ny + nt, values));
    const std::vector<PointId> y = all_points(ny);
    std::vector<PointId> tuple;
    for (std::size_t i = 0; i < nt; ++i) tuple.push_back(ny + i);
    ExtensionSpec spec{s.snapshot(y), s.snapshot(tuple), {}};
    for (PointId a : tuple) {
      std::vector<Rat> row;
      for (PointId b : y) row.push_back(s.distance(a, b));
      spec.cross.push_back(std::move(row));
    }
    const auto z = realize_spec(s, y, spec);
    PartialIsometry iso;
    iso.domain = y;
    iso.range = y;
    iso.domain.insert(iso.domain.end(), tuple.begin(), tuple.end());
    iso.range.insert(iso.range.end(), z.begin(), z.end());
    EXPECT_FALSE(check_partial_isometry(s, iso).has_value());
  }
}

TEST(RealizeSpec, RejectsMismatchedBase) {
  GrowingSpace s = pq2();
  ExtensionSpec spec{space({"p", "q"}, {{"0", "1"}, {"1", "0"}}), test::one_point("a1"),
                     {test::rats({"1", "1"})}};
  const std::vector<PointId> base{0, 1};
  EXPECT_THROW(realize_spec(s, base, spec), ValidationError);
}

TEST(ExtendIsometry, IdentityStaysIdentity) {
  GrowingSpace s(space({"p", "q", "r"}, {{"0", "1", "2"}, {"1", "0", "1"}, {"2", "1", "0"}}));
  const PartialIsometry id{{0, 1}, {0, 1}};
  const std::vector<PointId> forth{2};
  const PartialIsometry ext = extend_isometry(s, id, forth, {});
  EXPECT_EQ(ext.image(2), std::optional<PointId>(2));
  EXPECT_EQ(s.size(), 3u);
}

TEST(ExtendIsometry, SwapForthAndBack) {
  GrowingSpace s(space({"p", "q", "z"}, {{"0", "2", "1"}, {"2", "0", "3"}, {"1", "3", "0"}}));
  const PartialIsometry swap{{0, 1}, {1, 0}};
  const std::vector<PointId> forth{2};
  const PartialIsometry ext = extend_isometry(s, swap, forth, {});
  const PointId w = ext.image(2).value();
  EXPECT_EQ(s.distance(w, 1), Rat(1));
  EXPECT_EQ(s.distance(w, 0), Rat(3));
  EXPECT_FALSE(check_partial_isometry(s, ext).has_value());

  const std::vector<PointId> back{w};
  const PartialIsometry both = extend_isometry(s, swap, {}, back);
  EXPECT_TRUE(both.preimage(w).has_value());
  EXPECT_FALSE(check_partial_isometry(s, both).has_value());
}

TEST(ExtendIsometry, RandomBackAndForth) {
  Rng rng(61);
  const auto values = value_grid(4, 1);
  for (int trial = 0; trial < 200; ++trial) {
    GrowingSpace s(random_metric(rng, 5, values));
    const PartialIsometry id{{0}, {0}, FixedTag::kFixesA};
    const std::vector<PointId> forth{1, 2};
    const std::vector<PointId> back{3, 4};
    const PartialIsometry ext = extend_isometry(s, id, forth, back);
    EXPECT_EQ(ext.tag, FixedTag::kFixesA);
    EXPECT_FALSE(check_partial_isometry(s, ext).has_value());
    for (PointId p : forth) EXPECT_TRUE(ext.image(p).has_value());
    for (PointId p : back) EXPECT_TRUE(ext.preimage(p).has_value());
    EXPECT_EQ(ext.image(0), std::optional<PointId>(0));
  }
}

TEST(GenerateUrysohn, OneRoundCapOne) {
  UrysohnOptions o;
  o.rounds = 1;
  o.distances = test::rats({"1", "2"});
  o.subset_cap = 1;
  const GenerationReport r = generate_rational_urysohn(test::one_point("p"), o);
  EXPECT_EQ(r.space.size(), 3u);
  EXPECT_EQ(r.candidate_maps, 2u);
  EXPECT_EQ(r.realized, 2u);
  std::set<Rat> seen;
  for (PointId p = 1; p < 3; ++p) seen.insert(r.space.distance(0, p));
  EXPECT_EQ(seen, (std::set<Rat>{Rat(1), Rat(2)}));
}

TEST(GenerateUrysohn, ZeroRoundsKeepsInput) {
  UrysohnOptions o;
  o.rounds = 0;
  o.distances = test::rats({"1", "2"});
  const FinMetric start = space({"p", "q"}, {{"0", "1"}, {"1", "0"}});
  const GenerationReport r = generate_rational_urysohn(start, o);
  EXPECT_EQ(r.space.materialize(), start);
}

TEST(GenerateUrysohn, SaturatedAndSeedOnlyPermutes) {
  UrysohnOptions o;
  o.rounds = 2;
  o.distances = test::rats({"1", "2"});
  o.subset_cap = 2;
  o.seed = 1;
  const GenerationReport a = generate_rational_urysohn(test::one_point("p"), o);
  o.seed = 2;
  const GenerationReport b = generate_rational_urysohn(test::one_point("p"), o);
  EXPECT_TRUE(a.saturated);
  EXPECT_EQ(a.space.size(), b.space.size());
  EXPECT_FALSE(saturation_audit(a.space, a.last_round_start, o.distances, 2).has_value());
  EXPECT_FALSE(saturation_audit(b.space, b.last_round_start, o.distances, 2).has_value());
  o.seed = 1;
  const GenerationReport again = generate_rational_urysohn(test::one_point("p"), o);
  EXPECT_EQ(again.space.materialize(), a.space.materialize());
}

TEST(GenerateUrysohn, PointCapStopsEarly) {
  UrysohnOptions o;
  o.rounds = 3;
  o.distances = test::rats({"1", "2"});
  o.subset_cap = 2;
  o.max_points = 10;
  const GenerationReport r = generate_rational_urysohn(test::one_point("p"), o);
  EXPECT_FALSE(r.saturated);
  EXPECT_LE(r.space.size(), 10u);
}

TEST(EnumerateKatetovMaps, CountsOnTwoPoints) {
  const GrowingSpace s(space({"p", "q"}, {{"0", "1"}, {"1", "0"}}));
  const auto d = test::rats({"1", "2"});
  const auto maps = enumerate_katetov_maps(s, 2, d, 2);
  // Singletons: 2 + 2. Pairs with |f(p)-f(q)| <= 1 <= f(p)+f(q): all 4.
  EXPECT_EQ(maps.size(), 8u);
  for (const KatetovMap& f : maps) EXPECT_TRUE(check_katetov(s, f).ok());
}

TEST(HomogeneityAudit, SaturatedSpacePasses) {
  UrysohnOptions o;
  o.rounds = 2;
  o.distances = test::rats({"1", "2"});
  o.subset_cap = 2;
  const GenerationReport r = generate_rational_urysohn(test::one_point("p"), o);
  const HomogeneityAudit a = homogeneity_audit(r.space, r.last_round_start, o.distances, 2);
  EXPECT_FALSE(a.failure.has_value());
  EXPECT_GT(a.isometries_checked, 0u);
}

TEST(HomogeneityAudit, DetectsMissingExtension) {
  // p and q are both at distance 1 from the center c, but only p has a
  // neighbour at distance 1 that is 2 away from c.
  const GrowingSpace s(space({"c", "p", "q", "z"}, {{"0", "1", "1", "2"},
                                                   {"1", "0", "2", "1"},
                                                   {"1", "2", "0", "2"},
                                                   {"2", "1", "2", "0"}}));
  const auto d = test::rats({"1", "2"});
  const HomogeneityAudit a = homogeneity_audit(s, 4, d, 2);
  EXPECT_TRUE(a.failure.has_value());
}

}  // namespace
}  // namespace urykit
