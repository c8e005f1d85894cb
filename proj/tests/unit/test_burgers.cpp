#include <gtest/gtest.h>

#include <random>

#include "wnlo/burgers.hpp"

using namespace wnlo;

TEST(RiemannEval, ShockSampleLeftOfFront) { EXPECT_EQ(riemann_eval(make_fan(1, 1.0, 0.0, 1.0), 0.0), 1.0); }

TEST(RiemannEval, SymmetricRarefactionCenter) { EXPECT_EQ(riemann_eval(make_fan(1, -1.0, 1.0, 1.0), 0.0), 0.0); }

TEST(RiemannEval, FamilyThreeOnShockLine) {
  const auto f = make_fan(3, 0.0, 1.0, 2.0);
  EXPECT_EQ(f.structure, RiemannFan::Structure::shock);
  EXPECT_EQ(f.s, -1.0);
  EXPECT_EQ(riemann_eval(f, -1.0), 0.0);
  EXPECT_EQ(riemann_eval(f, -1.5), 0.0);
  EXPECT_EQ(riemann_eval(f, -0.5), 1.0);
}

TEST(RiemannEval, UpRightLimitOnFamilyOneShock) {
  const auto f = make_fan(1, 2.0, -1.0, 1.0);
  EXPECT_EQ(riemann_eval(f, 0.5), -1.0);
  EXPECT_EQ(riemann_limit(f, 0.5, Side::left), 2.0);
}

TEST(RiemannEval, RarefactionInterior) {
  const auto f = make_fan(1, -0.5, 1.5, 2.0);
  EXPECT_EQ(riemann_eval(f, -1.0), -0.5);
  EXPECT_DOUBLE_EQ(riemann_eval(f, 1.0), 0.5);
  EXPECT_EQ(riemann_eval(f, 3.0), 1.5);
  const auto g = make_fan(3, 1.5, -0.5, 2.0);
  EXPECT_EQ(g.structure, RiemannFan::Structure::rarefaction);
  EXPECT_DOUBLE_EQ(riemann_eval(g, 1.0), -0.5);
  EXPECT_DOUBLE_EQ(riemann_eval(g, -1.0), 0.5);
}

TEST(Properties, RankineHugoniotAndAdmissibility) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> d(-3.0, 3.0);
  for (int i = 0; i < 1000; ++i) {
    const double a = d(rng), b = d(rng), alpha = 0.1 + std::abs(d(rng));
    const auto f1 = make_fan(1, a, b, alpha);
    if (f1.structure == RiemannFan::Structure::shock) {
      EXPECT_NEAR(alpha * (a * a - b * b) / 2, f1.s * (a - b), 1e-12 * (1 + a * a + b * b) * alpha);
      EXPECT_GT(alpha * a, f1.s);
      EXPECT_GT(f1.s, alpha * b);
    }
    const auto f3 = make_fan(3, a, b, alpha);
    if (f3.structure == RiemannFan::Structure::shock) {
      EXPECT_NEAR(-alpha * (a * a - b * b) / 2, f3.s * (a - b), 1e-12 * (1 + a * a + b * b) * alpha);
      EXPECT_GT(-alpha * a, f3.s);
      EXPECT_GT(f3.s, -alpha * b);
    }
  }
}

TEST(Properties, ReflectionEquivalence) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  for (int i = 0; i < 2000; ++i) {
    const double a = d(rng), b = d(rng), xi = 2 * d(rng), alpha = 1.3;
    EXPECT_EQ(riemann_eval(make_fan(3, a, b, alpha), xi), riemann_eval(make_fan(1, b, a, alpha), -xi));
  }
}

TEST(Properties, MonotoneBetweenStates) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  for (int i = 0; i < 500; ++i) {
    const double a = d(rng), b = d(rng);
    for (int fam : {1, 3}) {
      const auto f = make_fan(fam, a, b, 0.8);
      double prev = riemann_limit(f, -10.0, Side::right);
      EXPECT_EQ(prev, a);
      for (int k = -100; k <= 100; ++k) {
        const double v = riemann_limit(f, k * 0.04, Side::right);
        EXPECT_GE(v, std::min(a, b));
        EXPECT_LE(v, std::max(a, b));
        if (a <= b) {
          EXPECT_GE(v, prev);
        } else {
          EXPECT_LE(v, prev);
        }
        prev = v;
      }
      EXPECT_EQ(riemann_limit(f, 10.0, Side::left), b);
    }
  }
}

TEST(MaxWaveSpeed, Examples) {
  SolutionState zero{0, 0.0, PeriodicProfile::constant(3, 0, 0.0), PeriodicProfile::constant(3, 0, 0.0)};
  EXPECT_EQ(max_wave_speed(zero, 2.0), 0.0);
  SolutionState s{0, 0.0, PeriodicProfile(3, 0, {1.5, 0, -1, 0}), PeriodicProfile(3, 0, {0.5, 0, 0, 0})};
  EXPECT_EQ(max_wave_speed(s, 2.0), 3.0);
}
