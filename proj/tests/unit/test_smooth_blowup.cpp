#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "../support/fixtures.hpp"
#include "wnlo/smooth_blowup.hpp"

using namespace wnlo;
using namespace wnlo::testing;

namespace {

constexpr double pi = std::numbers::pi;

/// σ2 = ε cos 4πx with Ẽ = 4πε; β set so that M_I/Ẽ is `factor` times the threshold.
BlowupConfig coupled(double factor, double eps = 0.05) {
  BlowupConfig c;
  c.alpha = 1.0;
  c.sigma2 = cos_wave(eps);
  c.init = {sine(0.25), zero_fn()};
  const double M_I = c.init.total_variation();
  c.beta = M_I / (4.0 * pi * eps) / (factor * blowup_threshold_constant()) * c.alpha;
  return c;
}

}  // namespace

TEST(Ensemble, InitialState) {
  const auto s = init_ensembles({sine(1.0), zero_fn()}, 128);
  EXPECT_EQ(s.e1.size(), 128);
  for (double J : s.e1.jacobian()) EXPECT_NEAR(J, 1.0, 1e-12);
  for (double J : s.e3.jacobian()) EXPECT_NEAR(J, 1.0, 1e-12);
  for (double u : s.e3.u) EXPECT_EQ(u, 0.0);
  EXPECT_NEAR(s.e1.l1_gradient(), 4.0, 1e-12);
  EXPECT_NEAR((InitialData{sine(1.0), zero_fn()}.total_variation()), 4.0, 1e-9);
}

TEST(Ensemble, RejectsBadInput) {
  EXPECT_THROW(init_ensembles({sine(1.0), zero_fn()}, 32), ConfigError);
  EXPECT_THROW(init_ensembles({sawtooth(1.0), zero_fn()}, 128), ConfigError);
}

TEST(Force, SeparableMatchesDirect) {
  const auto s = init_ensembles({sine(0.3), sine(0.2, 2)}, 256);
  auto moved = s;
  for (std::size_t j = 0; j < moved.e3.x.size(); ++j) moved.e3.x[j] += 0.02 * std::sin(2 * pi * moved.e3.z[j]);
  const auto trig = EntropyWaveSpec::trig({{1, 0.3, -0.1}, {2, 0.05, 0.02}});
  const NonlocalForce fast(trig, 0.7);
  ASSERT_TRUE(fast.separable());
  const auto a = fast.apply(moved.e1.x, moved.e3);
  // Direct sum through the generic kernel evaluation.
  const auto J = moved.e3.jacobian();
  for (std::size_t i = 0; i < a.size(); i += 17) {
    double d = 0.0;
    for (std::size_t j = 0; j < J.size(); ++j)
      d += kernel_value(trig, moved.e1.x[i] + moved.e3.x[j], 0.7) * moved.e3.u[j] * J[j];
    EXPECT_NEAR(a[i], 2.0 * d / 256.0, 1e-12);
  }
}

TEST(Force, DirectPathThreadInvariant) {
  const auto s = init_ensembles({sine(0.3), sine(0.2, 2)}, 128);
  const auto pl = EntropyWaveSpec::piecewise_linear({{0.0, 0.0}, {0.25, 0.1}});
  const auto a = NonlocalForce(pl, 0.5, 1).apply(s.e1.x, s.e3);
  const auto b = NonlocalForce(pl, 0.5, 3).apply(s.e1.x, s.e3);
  EXPECT_EQ(a, b);
}

TEST(Force, MatchesClosedFormConvolution) {
  // σ3 = sin 2πy, K = -π sin 2πx (β = 1, σ2 = cos 4πx): ∫_{-1}^{1} K(x+y) sin 2πy dy = -π cos 2πx.
  const auto s = init_ensembles({zero_fn(), sine(1.0)}, 128);
  const auto F = NonlocalForce(cos_wave(1.0), 1.0).apply(s.e1.x, s.e3);
  for (std::size_t i = 0; i < F.size(); ++i) EXPECT_NEAR(F[i], -pi * std::cos(2 * pi * s.e1.x[i]), 1e-10);
}

TEST(Rk4, DecoupledCharacteristicsAreStraight) {
  auto s = init_ensembles({sine(1.0), sine(0.5, 2)}, 128);
  const auto u1 = s.e1.u, u3 = s.e3.u;
  const NonlocalForce F(EntropyWaveSpec::zero(), 0.0);
  for (int i = 0; i < 10; ++i) s = step_rk4(s, F, 2.0, 0.005);
  EXPECT_EQ(s.e1.u, u1);
  EXPECT_EQ(s.e3.u, u3);
  for (std::size_t j = 0; j < u1.size(); ++j) {
    EXPECT_NEAR(s.e1.x[j], s.e1.z[j] + 2.0 * u1[j] * 0.05, 1e-13);
    EXPECT_NEAR(s.e3.x[j], s.e3.z[j] - 2.0 * u3[j] * 0.05, 1e-13);
  }
}

TEST(Rk4, SignalsCrossing) {
  const auto s = init_ensembles({sine(1.0), zero_fn()}, 128);
  const NonlocalForce F(EntropyWaveSpec::zero(), 0.0);
  try {
    step_rk4(s, F, 1.0, 0.3);
    FAIL() << "expected a blow-up signal";
  } catch (const BlowupSignal& b) {
    EXPECT_EQ(b.t_lo, 0.0);
    EXPECT_EQ(b.t_hi, 0.3);
  }
}

TEST(Rk4, MeanConservedCoupled) {
  auto s = init_ensembles({sine(0.3), sine(0.2, 2)}, 256);
  const NonlocalForce F(EntropyWaveSpec::trig({{1, 0.3, 0.1}}), 2.0);
  for (int i = 0; i < 100; ++i) s = step_rk4(s, F, 1.0, 1e-3);
  EXPECT_NEAR(s.e1.weighted_mean(), 0.0, 1e-8);
  EXPECT_NEAR(s.e3.weighted_mean(), 0.0, 1e-8);
}

TEST(Rk4, QuadratureConvergesUnderRefinement) {
  const NonlocalForce F(EntropyWaveSpec::trig({{1, 0.3, 0.1}, {2, 0.0, 0.2}}), 3.0);
  auto evolve = [&](long P) {
    auto s = init_ensembles({sine(0.3), PeriodicFunction::trig(1.0, 0.0, {{1, 0.1, 0.2}, {3, 0.05, 0.0}})}, P);
    for (int i = 0; i < 100; ++i) s = step_rk4(s, F, 1.0, 2e-3);
    return s;
  };
  const auto a = evolve(64), b = evolve(128), c = evolve(256);
  double dab = 0.0, dbc = 0.0;
  for (long j = 0; j < 64; ++j) {
    const auto i = static_cast<std::size_t>(j);
    dab = std::max(dab, std::abs(a.e1.u[i] - b.e1.u[2 * i]) + std::abs(a.e3.u[i] - b.e3.u[2 * i]));
    dbc = std::max(dbc, std::abs(b.e1.u[2 * i] - c.e1.u[4 * i]) + std::abs(b.e3.u[2 * i] - c.e3.u[4 * i]));
  }
  EXPECT_LT(dbc, 0.3 * dab + 1e-13);
}

TEST(Blowup, DecoupledSineMatchesBurgersTime) {
  BlowupConfig c;
  c.alpha = 1.0;
  c.init = {sine(1.0), zero_fn()};
  c.P = 512;
  const auto r = detect_blowup(c);
  const auto& k = r.certificate;
  ASSERT_TRUE(k.crossed);
  const double exact = 1.0 / (2 * pi);
  EXPECT_NEAR(k.T_b / exact, 1.0, 0.02);
  EXPECT_NEAR(k.crossing_z, 0.5, 2.0 / 512);
  EXPECT_EQ(k.crossing_family, 1);
  EXPECT_TRUE(k.hypothesis_met);
  EXPECT_TRUE(k.within_bound);
  EXPECT_EQ(k.bootstrap_drift, 0.0);
  EXPECT_LE(k.t_lo, k.t_hi);
  EXPECT_LT(k.t_hi - k.t_lo, 1e-10);
  EXPECT_LT(r.rows.back().min_jacobian, 1e-6);
}

TEST(Blowup, FamilyThreeMirrors) {
  BlowupConfig c;
  c.alpha = 2.0;
  c.init = {zero_fn(), sine(0.5)};
  c.P = 256;
  const auto k = detect_blowup(c).certificate;
  ASSERT_TRUE(k.crossed);
  EXPECT_EQ(k.crossing_family, 3);
  EXPECT_EQ(k.steepest_family, 3);
  EXPECT_NEAR(k.T_b, 1.0 / (2.0 * pi), 0.01 / (2.0 * pi));
  EXPECT_NEAR(k.crossing_z, 0.0, 2.0 / 256);
}

TEST(Blowup, CoupledExampleWithinBound) {
  auto c = coupled(2.0);
  const auto r = detect_blowup(c);
  const auto& k = r.certificate;
  EXPECT_NEAR(k.M_I, 1.0, 1e-9);
  EXPECT_NEAR(k.Etilde, 4 * pi * 0.05, 1e-9);
  EXPECT_NEAR(k.M_I / k.Etilde, 2.0 * blowup_threshold_constant() * c.beta / c.alpha, 1e-9);
  EXPECT_TRUE(k.hypothesis_met);
  ASSERT_TRUE(k.crossed);
  EXPECT_LE(k.T_b, k.bound);
  EXPECT_EQ(k.status, "T_b <= 6/(alpha M_I)");
  EXPECT_LE(k.c0_ratio, 1.05);
  EXPECT_TRUE(k.bootstrap_ok);
  EXPECT_LT(k.ode_jacobian_gap, 1e-3);
  for (const auto& row : r.rows)
    EXPECT_LE(row.l1_w1 + row.l1_w3, k.M_I * std::exp(0.5 * c.beta * k.Etilde * row.t) * 1.05);
}

TEST(Blowup, OutsideHypothesisIsMarked) {
  auto c = coupled(0.5);
  const auto k = detect_blowup(c).certificate;
  EXPECT_FALSE(k.hypothesis_met);
  EXPECT_NE(k.status.find("outside hypothesis"), std::string::npos);
}

TEST(Blowup, ConstantDataNoCrossing) {
  BlowupConfig c;
  c.init = {zero_fn(), zero_fn()};
  c.beta = 1.0;
  c.sigma2 = cos_wave(0.1);
  c.P = 64;
  c.dt = 0.05;
  const auto r = detect_blowup(c);
  EXPECT_FALSE(r.certificate.crossed);
  EXPECT_EQ(r.certificate.status, "no crossing (outside hypothesis)");
  EXPECT_NEAR(r.rows.back().t, 10.0, 1e-12);
  for (const auto& row : r.rows) EXPECT_NEAR(row.min_jacobian, 1.0, 1e-12);
}

TEST(Blowup, RejectsNonSmoothEntropyWave) {
  BlowupConfig c;
  c.init = {sine(1.0), zero_fn()};
  c.sigma2 = EntropyWaveSpec::piecewise_linear({{0.0, 0.0}, {0.25, 0.1}});
  EXPECT_THROW(detect_blowup(c), ConfigError);
}
