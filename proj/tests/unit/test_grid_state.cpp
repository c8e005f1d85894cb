#include <gtest/gtest.h>

#include <random>

#include "wnlo/grid.hpp"

using namespace wnlo;

namespace {

PeriodicProfile prof(int N, int parity, std::vector<double> v) { return PeriodicProfile(N, parity, std::move(v)); }

std::vector<double> random_values(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

}  // namespace

TEST(GridSpec, MeshRelations) {
  const GridSpec g = make_grid(8, 3.0, 1.0, 0.5);
  EXPECT_EQ(g.dx, 1.0 / 256.0);
  EXPECT_EQ(g.dt, g.dx / 3.0);
  EXPECT_EQ(g.cells(), 128);
}

TEST(GridSpec, RejectsInvalidParameters) {
  EXPECT_THROW(make_grid(2, 1.0, 1.0, 0.0), ConfigError);
  EXPECT_THROW(make_grid(8, 0.0, 1.0, 0.0), ConfigError);
  EXPECT_THROW(make_grid(8, 1.0, 0.0, 0.0), ConfigError);
  EXPECT_THROW(make_grid(8, 1.0, 1.0, -0.1), ConfigError);
}

TEST(PeriodicProfile, RejectsMalformed) {
  EXPECT_THROW(prof(3, 0, {}), DimensionError);
  EXPECT_THROW(prof(3, 0, {1, 2, 3}), DimensionError);
  EXPECT_THROW(prof(3, 2, {1, 2, 3, 4}), ParityError);
}

TEST(PeriodicProfile, StaggeredGeometry) {
  const auto even = prof(3, 0, {0, 1, 2, 3});
  const auto odd = prof(3, 1, {0, 1, 2, 3});
  // parity 0: cell j covers [2j dx, (2j+2) dx); parity 1 is shifted left by dx.
  EXPECT_EQ(even.value(0.0), 0.0);
  EXPECT_EQ(even.value(0.25), 1.0);
  EXPECT_EQ(even.value(0.99), 3.0);
  EXPECT_EQ(even.value(1.0), 0.0);
  EXPECT_EQ(odd.value(-0.125), 0.0);
  EXPECT_EQ(odd.value(0.125), 1.0);
  EXPECT_EQ(odd.value(0.9), 0.0);
  EXPECT_EQ(even.center(0), 1);
  EXPECT_EQ(odd.center(0), 0);
  EXPECT_EQ(odd.at_center(8), 0.0);
  EXPECT_EQ(odd.at_center(-2), 3.0);
  EXPECT_THROW(odd.at_center(1), ParityError);
}

TEST(TotalVariation, Examples) {
  EXPECT_EQ(total_variation(prof(3, 0, {2, 2, 2, 2})), 0.0);
  EXPECT_EQ(total_variation(prof(2, 0, {0.5, -1.0})), 3.0);
  EXPECT_EQ(total_variation(prof(3, 0, {0, 1, 0, -1})), 4.0);
}

TEST(SupNorm, Examples) {
  EXPECT_EQ(sup_norm(prof(2, 0, {0, 0})), 0.0);
  EXPECT_EQ(sup_norm(prof(2, 0, {-2, 1})), 2.0);
  EXPECT_EQ(sup_norm(prof(3, 1, {0.5, -0.5, 0.25, -0.25})), 0.5);
}

TEST(PeriodMean, Examples) {
  EXPECT_DOUBLE_EQ(period_mean(prof(2, 0, {0.7, 0.7})), 0.7);
  EXPECT_EQ(period_mean(prof(2, 0, {1, -1})), 0.0);
  EXPECT_EQ(period_mean(prof(3, 0, {1, 0, 0, 0})), 0.25);
}

TEST(L1Distance, Examples) {
  const auto p = prof(3, 1, {0.1, 0.4, -0.3, 0.9});
  EXPECT_EQ(l1_distance(p, p), 0.0);
  EXPECT_EQ(l1_distance(prof(2, 0, {1, 1}), prof(2, 0, {0, 0})), 1.0);
  EXPECT_EQ(l1_distance(prof(2, 0, {1, 0}), prof(2, 0, {0, 1})), 1.0);
  EXPECT_THROW(l1_distance(prof(2, 0, {1, 0}), prof(3, 0, {0, 1, 0, 0})), DimensionError);
}

TEST(L1Distance, MixedParityIsGeometric) {
  // [1,0] on even cells vs [0,0] on odd cells: |1| over [0, 1/2).
  EXPECT_EQ(l1_distance(prof(2, 0, {1, 0}), prof(2, 1, {0, 0})), 0.5);
  // Shifted copy of a step differs on two dx-wide slabs.
  EXPECT_EQ(l1_distance(prof(3, 0, {1, 1, 0, 0}), prof(3, 1, {1, 1, 0, 0})), 2 * 0.125);
}

TEST(Properties, TotalVariationInvariances) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    auto v = random_values(rng, 32);
    const double tv = total_variation(prof(6, trial % 2, v));
    auto rot = v;
    std::rotate(rot.begin(), rot.begin() + trial % 32, rot.end());
    EXPECT_NEAR(total_variation(prof(6, 0, rot)), tv, 1e-12);
    auto shifted = v;
    for (auto& x : shifted) x += 3.25;
    EXPECT_NEAR(total_variation(prof(6, 0, shifted)), tv, 1e-12);
  }
}

TEST(Properties, L1MetricAxioms) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = prof(5, trial % 2, random_values(rng, 16));
    const auto b = prof(5, (trial / 2) % 2, random_values(rng, 16));
    const auto c = prof(5, 1, random_values(rng, 16));
    EXPECT_NEAR(l1_distance(a, b), l1_distance(b, a), 1e-15);
    EXPECT_LE(l1_distance(a, c), l1_distance(a, b) + l1_distance(b, c) + 1e-14);
  }
}

TEST(Properties, MeanShift) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    auto v = random_values(rng, 64);
    const double m = period_mean(prof(7, 0, v));
    for (auto& x : v) x += 0.375;
    EXPECT_NEAR(period_mean(prof(7, 0, v)), m + 0.375, 1e-13);
  }
}

TEST(Diagnostics, RowMatchesNorms) {
  SolutionState s{4, 0.5, prof(3, 0, {0, 1, 0, -1}), prof(3, 0, {0.5, 0.5, 0.5, 0.5})};
  const auto r = diagnostics_row(s);
  EXPECT_EQ(r.t, 0.5);
  EXPECT_EQ(r.tv1, 4.0);
  EXPECT_EQ(r.tv3, 0.0);
  EXPECT_EQ(r.sup1, 1.0);
  EXPECT_EQ(r.sup3, 0.5);
  EXPECT_EQ(r.mean1, 0.0);
  EXPECT_EQ(r.mean3, 0.5);
}
