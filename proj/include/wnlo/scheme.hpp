#ifndef WNLO_SCHEME_HPP
#define WNLO_SCHEME_HPP

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "wnlo/burgers.hpp"
#include "wnlo/error.hpp"
#include "wnlo/grid.hpp"
#include "wnlo/kernel.hpp"
#include "wnlo/periodic_function.hpp"
#include "wnlo/sampling.hpp"

namespace wnlo {

/// Initial data of period 1 for both families.
struct InitialData {
  PeriodicFunction sigma1 = PeriodicFunction::trig(1.0, 0.0, {});
  PeriodicFunction sigma3 = PeriodicFunction::trig(1.0, 0.0, {});

  /// M_I = TV σ1,0 + TV σ3,0.
  double total_variation() const { return sigma1.total_variation() + sigma3.total_variation(); }

  InitialData centered() const { return {sigma1.shifted(-sigma1.mean()), sigma3.shifted(-sigma3.mean())}; }
};

struct SchemeInputs {
  int N = 8;
  double alpha = 1.0;
  double beta = 0.0;
  EntropyWaveSpec sigma2 = EntropyWaveSpec::zero();
  InitialData init;
  SamplingSequence sampling;
  double t_final = 1.0;
  long snapshot_stride = 0;  // 0: first and last level only
  std::optional<double> lambda;  // absent: automatic choice
  bool retain_levels = false;
  bool recenter_mean = false;
  unsigned threads = 1;
};

struct SchemeConfig {
  SchemeInputs inputs;
  GridSpec grid;
  KernelTable kernel;
  bool lambda_auto = true;
  double M_hat = 0.0;

  long steps() const {
    const double r = inputs.t_final / grid.dt;
    return static_cast<long>(std::ceil(r - 1e-9 * std::max(1.0, r)));
  }
};

/// Λ = 1.05 · 2α(M̂ + 2) with M̂ = max{(5/4)M_I, 300(β/α)E}.
inline double auto_lambda(double alpha, double beta, double E, double M_I, double* M_hat = nullptr) {
  const double m = std::max(1.25 * M_I, 300.0 * (beta / alpha) * E);
  if (M_hat) *M_hat = m;
  return 1.05 * 2.0 * alpha * (m + 2.0);
}

inline SchemeConfig make_scheme_config(SchemeInputs in) {
  if (!(in.t_final >= 0.0) || !std::isfinite(in.t_final)) throw ConfigError("t_final must be nonnegative");
  if (in.snapshot_stride < 0) throw ConfigError("snapshot_stride must be nonnegative");
  if (in.init.sigma1.period() != 1.0 || in.init.sigma3.period() != 1.0)
    throw ConfigError("initial data must have period 1");
  SchemeConfig c;
  const double E = in.sigma2.E();
  const double automatic = auto_lambda(in.alpha, in.beta, E, in.init.total_variation(), &c.M_hat);
  const double lam = in.lambda ? *in.lambda : automatic;
  c.lambda_auto = !in.lambda.has_value();
  c.grid = make_grid(in.N, lam, in.alpha, in.beta);
  c.kernel = build_kernel_table(in.sigma2, c.grid);
  if (in.threads == 0) in.threads = 1;
  c.inputs = std::move(in);
  return c;
}

struct HatPair {
  PeriodicProfile h1;
  PeriodicProfile h3;
};

/// Retained per-level data: sampled values, sources and the resulting state at nΔt+.
struct LevelRecord {
  PeriodicProfile h1, h3;
  std::vector<double> g1, g3;
  PeriodicProfile s1, s3;
};

struct RunRecord {
  SchemeConfig config;
  std::vector<SolutionState> snapshots;
  std::vector<DiagnosticsRow> diagnostics;
  std::vector<double> thetas;
  std::vector<LevelRecord> levels;  // empty unless retain_levels

  bool retained() const { return !levels.empty(); }
  long last_level() const { return static_cast<long>(diagnostics.size()) - 1; }
};

/// Samples the level-0 profiles from the initial functions: ĥ_{m,0} = σ_0((m + θ_0)Δx).
inline HatPair sample_initial(const InitialData& init, int N, double theta0) {
  const long M = 1L << (N - 1);
  const double dx = std::ldexp(1.0, -N);
  std::vector<double> a(static_cast<std::size_t>(M)), b(static_cast<std::size_t>(M));
  for (long j = 0; j < M; ++j) {
    const double x = (static_cast<double>(2 * j + 1) + theta0) * dx;
    a[static_cast<std::size_t>(j)] = init.sigma1.value(x);
    b[static_cast<std::size_t>(j)] = init.sigma3.value(x);
  }
  return {PeriodicProfile(N, 0, std::move(a)), PeriodicProfile(N, 0, std::move(b))};
}

/// Random-choice sampling of the Riemann-fan composite at ((m + θ)Δx, (n+1)Δt-).
/// New cell j sits on the fan between old cells j - 1 + p and j + p, p = parity of `prev`.
inline HatPair sample_state(const SolutionState& prev, double theta, const GridSpec& g) {
  const double speed = max_wave_speed(prev, g.alpha);
  if (!(speed < g.lambda))
    throw CflError("CFL violated entering step " + std::to_string(prev.n + 1) + ": wave speed " +
                       std::to_string(speed) + " >= lambda " + std::to_string(g.lambda),
                   prev.n + 1, speed);
  const int p = prev.sigma1.parity();
  const long M = prev.sigma1.size();
  const double xi = theta * g.lambda;
  std::vector<double> a(static_cast<std::size_t>(M)), b(static_cast<std::size_t>(M));
  for (long j = 0; j < M; ++j) {
    const long l = j - 1 + p, r = j + p;
    a[static_cast<std::size_t>(j)] = riemann_eval(make_fan(1, prev.sigma1[l], prev.sigma1[r], g.alpha), xi);
    b[static_cast<std::size_t>(j)] = riemann_eval(make_fan(3, prev.sigma3[l], prev.sigma3[r], g.alpha), xi);
  }
  const int q = 1 - p;
  return {PeriodicProfile(g.N, q, std::move(a)), PeriodicProfile(g.N, q, std::move(b))};
}

struct FractionalResult {
  PeriodicProfile s1, s3;
  std::vector<double> g1, g3;
};

/// σ1 = ĥ1 - g1 Δt and σ3 = ĥ3 - g3 Δt with g1 = K∗ĥ3 and g3 = -K∗ĥ1.
inline FractionalResult fractional_step(const HatPair& h, const KernelTable& table, double dt,
                                        unsigned threads = 1) {
  if (h.h1.parity() != h.h3.parity()) throw ParityError("fractional_step: parity mismatch");
  FractionalResult r{h.h1, h.h3, convolve(table, h.h3, 1, threads), convolve(table, h.h1, -1, threads)};
  auto& a = r.s1.values();
  auto& b = r.s3.values();
  for (std::size_t j = 0; j < a.size(); ++j) {
    a[j] -= r.g1[j] * dt;
    b[j] -= r.g3[j] * dt;
  }
  return r;
}

inline void recenter(PeriodicProfile& p) {
  const double m = period_mean(p);
  for (double& v : p.values()) v -= m;
}

inline void check_finite(const SolutionState& s) {
  for (const auto* p : {&s.sigma1, &s.sigma3})
    for (double v : p->values())
      if (!std::isfinite(v)) throw NonFiniteError("non-finite value at step " + std::to_string(s.n), s.n);
}

/// One cycle: sample at (n+1)Δt-, apply the source, giving the state at (n+1)Δt+.
inline SolutionState step(const SolutionState& s, const SchemeConfig& c, FractionalResult* out = nullptr) {
  const double th = c.inputs.sampling.theta(static_cast<std::uint64_t>(s.n + 1));
  HatPair h = sample_state(s, th, c.grid);
  FractionalResult r = fractional_step(h, c.kernel, c.grid.dt, c.inputs.threads);
  SolutionState next{s.n + 1, static_cast<double>(s.n + 1) * c.grid.dt, r.s1, r.s3};
  if (c.inputs.recenter_mean) {
    recenter(next.sigma1);
    recenter(next.sigma3);
  }
  check_finite(next);
  if (out) {
    out->s1 = next.sigma1;
    out->s3 = next.sigma3;
    out->g1 = std::move(r.g1);
    out->g3 = std::move(r.g3);
  }
  return next;
}

/// Runs the scheme to t_final. The trajectory is a pure function of the config.
inline RunRecord run(const SchemeConfig& c) {
  RunRecord rec;
  rec.config = c;
  const long steps = c.steps();
  const long stride = c.inputs.snapshot_stride;
  const bool keep = c.inputs.retain_levels;
  auto snap = [&](long n) { return n == 0 || n == steps || (stride > 0 && n % stride == 0); };

  const double th0 = c.inputs.sampling.theta(0);
  rec.thetas.push_back(th0);
  HatPair h0 = sample_initial(c.inputs.init, c.grid.N, th0);
  FractionalResult r0 = fractional_step(h0, c.kernel, c.grid.dt, c.inputs.threads);
  SolutionState s{0, 0.0, r0.s1, r0.s3};
  if (c.inputs.recenter_mean) {
    recenter(s.sigma1);
    recenter(s.sigma3);
  }
  check_finite(s);
  if (keep) rec.levels.push_back({h0.h1, h0.h3, r0.g1, r0.g3, s.sigma1, s.sigma3});
  rec.diagnostics.push_back(diagnostics_row(s));
  if (snap(0)) rec.snapshots.push_back(s);

  for (long n = 0; n < steps; ++n) {
    const double th = c.inputs.sampling.theta(static_cast<std::uint64_t>(n + 1));
    rec.thetas.push_back(th);
    HatPair h = sample_state(s, th, c.grid);
    FractionalResult r = fractional_step(h, c.kernel, c.grid.dt, c.inputs.threads);
    SolutionState next{n + 1, static_cast<double>(n + 1) * c.grid.dt, r.s1, r.s3};
    if (c.inputs.recenter_mean) {
      recenter(next.sigma1);
      recenter(next.sigma3);
    }
    check_finite(next);
    if (keep) rec.levels.push_back({std::move(h.h1), std::move(h.h3), std::move(r.g1), std::move(r.g3), next.sigma1, next.sigma3});
    rec.diagnostics.push_back(diagnostics_row(next));
    if (snap(n + 1)) rec.snapshots.push_back(next);
    s = std::move(next);
  }
  return rec;
}

inline RunRecord run(const SchemeInputs& in) { return run(make_scheme_config(in)); }

}  // namespace wnlo

#endif
