#include <gtest/gtest.h>

#include "support.hpp"

namespace urykit {
namespace {

using test::map_on;
using test::R;
using test::space;

FinMetric pq2() { return space({"p", "q"}, {{"0", "2"}, {"2", "0"}}); }

TEST(CheckKatetov, Cases) {
  const FinMetric m = pq2();
  EXPECT_TRUE(check_katetov(m, map_on({0, 1}, {"1", "1"})).ok());

  const KatetovReport sum = check_katetov(m, map_on({0, 1}, {"0", "1"}));
  EXPECT_EQ(sum.fault, KatetovFault::kSum);
  EXPECT_EQ(sum.first, 0u);
  EXPECT_EQ(sum.second, 1u);
  EXPECT_NE(sum.message.find("0+1 < 2"), std::string::npos);

  const KatetovReport lip = check_katetov(m, map_on({0, 1}, {"5", "1"}));
  EXPECT_EQ(lip.fault, KatetovFault::kLipschitz);
  EXPECT_NE(lip.message.find("|5-1| > 2"), std::string::npos);

  EXPECT_EQ(check_katetov(m, map_on({0, 1}, {"-1", "1"})).fault, KatetovFault::kNegative);
  EXPECT_EQ(check_katetov(m, map_on({0, 7}, {"1", "1"})).fault, KatetovFault::kOutOfRange);
  EXPECT_THROW(require_katetov(m, map_on({0, 1}, {"5", "1"})), KatetovError);
}

TEST(KatetovMap, FromPairsSortsAndMerges) {
  const KatetovMap f = KatetovMap::from_pairs({{2, R("1")}, {0, R("3")}, {2, R("1")}});
  EXPECT_EQ(f.size(), 2u);
  EXPECT_EQ(f.domain()[0], 0u);
  EXPECT_EQ(f.value(2), Rat(1));
  EXPECT_THROW(KatetovMap::from_pairs({{1, R("1")}, {1, R("2")}}), ValidationError);
  EXPECT_THROW((void)f.value(1), ValidationError);
}

TEST(SupDist, Cases) {
  EXPECT_EQ(sup_dist(map_on({0, 1}, {"1", "1"}), map_on({0, 1}, {"2", "3"})), Rat(2));
  EXPECT_EQ(sup_dist(map_on({0, 1}, {"1", "1"}), map_on({0, 1}, {"1", "1"})), Rat(0));
  EXPECT_EQ(sup_dist(map_on({0, 1}, {"1", "1"}), map_on({0, 1}, {"1", "2"})), Rat(1));
  EXPECT_THROW(sup_dist(map_on({0}, {"1"}), map_on({1}, {"1"})), ValidationError);
}

TEST(KatetovExtension, InfFormula) {
  const auto m = space({"p", "q", "r"}, {{"0", "2", "1"}, {"2", "0", "2"}, {"1", "2", "0"}});
  const KatetovMap f = map_on({0, 1}, {"1", "1"});
  const KatetovMap fh = katetov_extension(m, f);
  // f(p) + d(r,p) = 2, f(q) + d(r,q) = 3.
  EXPECT_EQ(fh.value(2), Rat(2));
  EXPECT_EQ(fh.value(0), Rat(1));
  EXPECT_TRUE(check_katetov(m, fh).ok());
}

TEST(KatetovExtension, IdentityAndPointMaps) {
  const auto m = space({"p", "q", "r"}, {{"0", "2", "1"}, {"2", "0", "2"}, {"1", "2", "0"}});
  const KatetovMap total = map_on({0, 1, 2}, {"1", "1", "2"});
  EXPECT_EQ(katetov_extension(m, total), total);
  const std::vector<PointId> y{0, 1};
  const KatetovMap dp = point_map(m, 0, y);
  const std::vector<PointId> everything{0, 1, 2};
  EXPECT_EQ(katetov_extension(m, dp), point_map(m, 0, everything));
  EXPECT_THROW(katetov_extension(m, KatetovMap{}), ValidationError);
}

TEST(IsSupportedBy, Cases) {
  const auto m = space({"p", "q", "r"}, {{"0", "2", "1"}, {"2", "0", "2"}, {"1", "2", "0"}});
  const std::vector<PointId> y{0, 1};
  const KatetovMap fh = katetov_extension(m, map_on({0, 1}, {"1", "1"}));
  EXPECT_TRUE(is_supported_by(m, fh, y));
  const std::vector<PointId> everything{0, 1, 2};
  const std::vector<PointId> just_p{0};
  EXPECT_TRUE(is_supported_by(m, point_map(m, 0, everything), just_p));
  EXPECT_FALSE(is_supported_by(pq2(), map_on({0, 1}, {"1", "1"}), just_p));
  EXPECT_THROW(is_supported_by(m, fh, std::vector<PointId>{}), ValidationError);
}

// Smallest grid value v making psi + {w -> v} Katetov on the points of K and w.
std::optional<Rat> smallest_compatible(const FinMetric& m, const KatetovMap& psi, PointId w) {
  for (long num = 0; num <= 40; ++num) {
    const Rat v(num, 4);
    auto pairs = std::vector<std::pair<PointId, Rat>>{{w, v}};
    for (std::size_t i = 0; i < psi.size(); ++i) pairs.emplace_back(psi.domain()[i], psi.values()[i]);
    if (check_katetov(m, KatetovMap::from_pairs(pairs)).ok()) return v;
  }
  return std::nullopt;
}

TEST(MinimalValueExtension, FarPoint) {
  const auto m = space({"p", "q", "w"}, {{"0", "2", "3"}, {"2", "0", "3"}, {"3", "3", "0"}});
  const KatetovMap psi = map_on({0, 1}, {"1", "1"});
  const KatetovMap tau = minimal_value_extension(m, psi, 2);
  EXPECT_EQ(tau.value(2), Rat(2));
  EXPECT_EQ(smallest_compatible(m, psi, 2), std::optional<Rat>(Rat(2)));
  EXPECT_TRUE(check_katetov(m, tau).ok());
}

TEST(MinimalValueExtension, PointInsideKAndRealizingPoint) {
  const auto m = space({"p", "q", "w"}, {{"0", "2", "1"}, {"2", "0", "1"}, {"1", "1", "0"}});
  const KatetovMap psi = map_on({0, 1}, {"1", "1"});
  EXPECT_EQ(minimal_value_extension(m, psi, 0).value(0), Rat(1));
  const KatetovMap tau = minimal_value_extension(m, psi, 2);
  EXPECT_EQ(tau.value(2), Rat(0));
  EXPECT_EQ(smallest_compatible(m, psi, 2), std::optional<Rat>(Rat(0)));
}

TEST(MinimalValueExtension, MatchesGridSearchOnRandomSpaces) {
  Rng rng(23);
  const auto values = value_grid(6, 2);
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t n = 3 + trial % 3;
    const FinMetric m = random_metric(rng, n, values);
    const std::vector<PointId> k = {0, 1};
    const KatetovMap psi = random_katetov(rng, m, k, values);
    const PointId w = n - 1;
    const KatetovMap tau = minimal_value_extension(m, psi, w);
    EXPECT_EQ(tau.value(w), smallest_compatible(m, psi, w).value());
    EXPECT_TRUE(check_katetov(m, tau).ok());
  }
}

TEST(ConvexCombination, Cases) {
  const KatetovMap f = map_on({0, 1}, {"1", "1"});
  const KatetovMap g = map_on({0, 1}, {"3", "3"});
  const std::vector<KatetovMap> fg{f, g};
  const std::vector<Rat> half{R("1/2"), R("1/2")};
  EXPECT_EQ(convex_combination(fg, half), map_on({0, 1}, {"2", "2"}));
  const std::vector<Rat> first{R("1"), R("0")};
  EXPECT_EQ(convex_combination(fg, first), f);
  const std::vector<Rat> bad{R("1"), R("1")};
  EXPECT_THROW(convex_combination(fg, bad), ValidationError);
  const std::vector<Rat> negative{R("3/2"), R("-1/2")};
  EXPECT_THROW(convex_combination(fg, negative), ValidationError);
}

TEST(ConvexCombination, RandomPairsStayKatetov) {
  Rng rng(29);
  const auto values = value_grid(6, 2);
  for (int trial = 0; trial < 500; ++trial) {
    const FinMetric m = random_metric(rng, 2 + trial % 5, values);
    const auto dom = all_points(m.size());
    const std::vector<KatetovMap> fg{random_katetov(rng, m, dom, values),
                                     random_katetov(rng, m, dom, values)};
    const Rat t(trial % 9, 8);
    const std::vector<Rat> w{t, Rat(1) - t};
    EXPECT_TRUE(check_katetov(m, convex_combination(fg, w)).ok());
  }
}

}  // namespace
}  // namespace urykit
