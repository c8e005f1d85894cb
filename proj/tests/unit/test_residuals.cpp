#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "../support/fixtures.hpp"
#include "wnlo/hopf_lax.hpp"
#include "wnlo/residuals.hpp"

using namespace wnlo;
using namespace wnlo::testing;

namespace {

SchemeInputs inputs(int N, double beta, double t_final, double lambda) {
  SchemeInputs in;
  in.N = N;
  in.beta = beta;
  in.sigma2 = cos_wave(0.5);
  in.t_final = t_final;
  in.lambda = lambda;
  in.snapshot_stride = 1;
  return in;
}

/// Trajectory of a frozen profile f(x) on every level (no evolution).
Trajectory frozen(int N, double lambda, int levels, double (*f)(double)) {
  const auto g = make_grid(N, lambda, 1.0, 0.0);
  Trajectory tr{g, build_kernel_table(EntropyWaveSpec::zero(), g), {}};
  for (int n = 0; n < levels; ++n) {
    const int p = n % 2;
    std::vector<double> v(static_cast<std::size_t>(g.cells()));
    for (long j = 0; j < g.cells(); ++j) v[static_cast<std::size_t>(j)] = f((2 * j + 1 - p) * g.dx);
    PeriodicProfile prof(N, p, v);
    tr.levels.push_back({n, n * g.dt, prof, PeriodicProfile::constant(N, p, 0.0)});
  }
  return tr;
}

}  // namespace

TEST(WeakResidual, ZeroSolution) {
  const auto rec = run(inputs(6, 1.0, 0.5, 2.0));
  for (double r : weak_residual(rec, standard_bank(0.5))) EXPECT_EQ(r, 0.0);
}

TEST(WeakResidual, ConstantSolution) {
  SchemeInputs in = inputs(7, 0.0, 0.5, 2.0);
  in.init.sigma1 = PeriodicFunction::trig(1.0, 0.3, {});
  in.init.sigma3 = PeriodicFunction::trig(1.0, -0.2, {});
  const auto rec = run(in);
  for (double r : weak_residual(rec, standard_bank(0.5))) EXPECT_NEAR(r, 0.0, 1e-4);
}

TEST(WeakResidual, EmptyBankAndMissingLevels) {
  SchemeInputs in = inputs(5, 0.0, 0.1, 2.0);
  const auto rec = run(in);
  EXPECT_THROW(weak_residual(rec, {}), Error);
  in.snapshot_stride = 0;
  const auto sparse = run(in);
  EXPECT_THROW(weak_residual(sparse, standard_bank(0.1)), MissingDataError);
  in.retain_levels = true;
  EXPECT_NO_THROW(weak_residual(run(in), standard_bank(0.1)));
}

TEST(WeakResidual, SmoothCoupledRunIsSmall) {
  SchemeInputs in = inputs(9, 0.5, 0.25, 2.0);
  in.init = {sine(0.3), sine(0.2, 2)};
  const auto r = weak_residual(run(in), standard_bank(0.25));
  for (double v : r) EXPECT_LT(std::abs(v), 5e-3);
}

TEST(EntropyResidual, ConstantWithMatchingK) {
  SchemeInputs in = inputs(6, 0.0, 0.3, 2.0);
  in.init.sigma1 = PeriodicFunction::trig(1.0, 0.25, {});
  const auto rec = run(in);
  const SpaceMode bump{SpaceMode::Kind::bump, 1, 0.4, 0.3};
  EXPECT_EQ(entropy_residual(rec, 1, 0.25, bump, {0.3}), 0.0);
}

TEST(EntropyResidual, AdmissibleShockDissipates) {
  SchemeInputs in = inputs(9, 0.0, 0.5, 1.25);
  in.init.sigma1 = sawtooth(1.0);
  const auto rec = run(in);
  const SpaceMode bump{SpaceMode::Kind::bump, 1, 0.0, 0.25};
  for (double k : {-0.2, 0.0, 0.2}) EXPECT_GT(entropy_residual(rec, 1, k, bump, {0.5}), 1e-3);
}

TEST(EntropyResidual, ExpansionShockFlagged) {
  const auto tr = frozen(9, 1.25, 400, [](double x) { return x < 0.5 ? -0.5 : 0.5; });
  const SpaceMode bump{SpaceMode::Kind::bump, 1, 0.5, 0.25};
  const double T = 399 * tr.grid.dt;
  EXPECT_LT(entropy_residual(tr, 1, 0.0, bump, {T}), -1e-3);
  // the stationary admissible shock at x = 0 is not flagged
  const SpaceMode bump0{SpaceMode::Kind::bump, 1, 0.0, 0.25};
  EXPECT_GE(entropy_residual(tr, 1, 0.0, bump0, {T}), -1e-12);
}

TEST(EntropyResidual, RejectsSignedTestFunction) {
  const auto tr = frozen(5, 2.0, 3, [](double) { return 0.0; });
  EXPECT_THROW(entropy_residual(tr, 1, 0.0, {SpaceMode::Kind::sine, 1}, {0.1}), Error);
  EXPECT_THROW(entropy_residual(tr, 2, 0.0, {}, {0.1}), Error);
}

TEST(StabilityGap, IdenticalDataAndMismatch) {
  SchemeInputs in = inputs(6, 0.5, 0.2, 3.0);
  in.init = {sine(0.5), sawtooth(0.5)};
  const auto a = run(in);
  for (const auto& row : stability_gap(a, a)) EXPECT_EQ(row.d, 0.0);
  in.init.sigma1 = sine(0.45);
  const auto b = run(in);
  const auto gap = stability_gap(a, b);
  ASSERT_FALSE(gap.empty());
  EXPECT_GT(gap.front().d, 0.0);
  in.beta = 0.6;
  const auto c = run(in);
  EXPECT_THROW(stability_gap(a, c), ConfigError);
}

TEST(StabilityGap, DecoupledContraction) {
  SchemeInputs in = inputs(9, 0.0, 0.5, 1.25);
  in.init = {sine(0.5), sawtooth(0.5)};
  const auto a = run(in);
  in.init = {sine(0.4), sawtooth(0.6)};
  const auto b = run(in);
  const auto gap = stability_gap(a, b);
  for (const auto& row : gap) EXPECT_LE(row.d, gap.front().d + 0.01);
}

TEST(HopfLax, SawtoothMatchesExact) {
  const HopfLaxOracle o(sawtooth(1.0), 1.0, 1);
  for (double t : {0.25, 0.5, 2.0})
    for (double x : {0.05, 0.3, 0.5, 0.77, 0.95}) EXPECT_NEAR(o.value(x, t), (x - 0.5) / (1.0 + t), 1e-6);
}

TEST(HopfLax, StepRarefaction) {
  const HopfLaxOracle o(step_up(0.5), 2.0, 1);
  const double t = 0.2;  // fan spans 0.5 ± 0.2
  EXPECT_NEAR(o.value(0.2, t), -0.5, 1e-6);
  EXPECT_NEAR(o.value(0.6, t), (0.6 - 0.5) / (2.0 * t), 1e-6);
  EXPECT_NEAR(o.value(0.8, t), 0.5, 1e-6);
}

TEST(HopfLax, FamilyThreeReflection) {
  const HopfLaxOracle o(sawtooth(1.0), 1.0, 3);
  EXPECT_NEAR(o.value(0.3, 0.5), -0.4, 1e-6);
  EXPECT_NEAR(o.value(0.5, 0.5), 0.0, 1e-6);
  EXPECT_NEAR(o.value(0.95, 0.5), 0.1, 1e-6);
}

TEST(HopfLax, L1AgainstExactSawtooth) {
  const HopfLaxOracle o(sawtooth(1.0), 1.0, 1);
  struct Exact {
    double value(double x) const { return (x - 0.5) / 1.5; }
  };
  EXPECT_LT(l1_error_against(Exact{}, o.sample(0.5, 4096)), 1e-7);
}
