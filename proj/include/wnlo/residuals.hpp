#ifndef WNLO_RESIDUALS_HPP
#define WNLO_RESIDUALS_HPP

#include <cmath>
#include <numbers>
#include <vector>

#include "wnlo/error.hpp"
#include "wnlo/grid.hpp"
#include "wnlo/kernel.hpp"
#include "wnlo/scheme.hpp"

namespace wnlo {

/// Spatial factor of a test function: periodic mode or a cos² bump of width w centered at x0.
struct SpaceMode {
  enum class Kind { zero, cosine, sine, bump };
  Kind kind = Kind::zero;
  int k = 1;
  double x0 = 0.5;
  double w = 0.25;

  double value(double x) const {
    const double a = 2.0 * std::numbers::pi * k * x;
    switch (kind) {
      case Kind::zero: return 0.0;
      case Kind::cosine: return std::cos(a);
      case Kind::sine: return std::sin(a);
      case Kind::bump: {
        const double d = offset(x);
        if (std::abs(d) >= 0.5 * w) return 0.0;
        const double c = std::cos(std::numbers::pi * d / w);
        return c * c;
      }
    }
    return 0.0;
  }

  double derivative(double x) const {
    const double f = 2.0 * std::numbers::pi * k;
    switch (kind) {
      case Kind::zero: return 0.0;
      case Kind::cosine: return -f * std::sin(f * x);
      case Kind::sine: return f * std::cos(f * x);
      case Kind::bump: {
        const double d = offset(x);
        if (std::abs(d) >= 0.5 * w) return 0.0;
        return -(std::numbers::pi / w) * std::sin(2.0 * std::numbers::pi * d / w);
      }
    }
    return 0.0;
  }

 private:
  double offset(double x) const {
    double d = x - x0;
    d -= std::round(d);
    return d;
  }
};

/// Time factor b(t) = sin²(πt/T) on [0, T], zero afterwards.
struct TimeWindow {
  double T = 1.0;
  double value(double t) const {
    if (t <= 0.0 || t >= T) return 0.0;
    const double s = std::sin(std::numbers::pi * t / T);
    return s * s;
  }
  double derivative(double t) const {
    if (t <= 0.0 || t >= T) return 0.0;
    return (std::numbers::pi / T) * std::sin(2.0 * std::numbers::pi * t / T);
  }
};

/// φ1 = b(t)·phi1(x), φ3 = b(t)·phi3(x).
struct TestPair {
  SpaceMode phi1, phi3;
  TimeWindow window;
};

/// Fixed bank: cosine and sine modes k = 1..kmax for each family separately.
inline std::vector<TestPair> standard_bank(double T, int kmax = 2) {
  std::vector<TestPair> bank;
  for (int k = 1; k <= kmax; ++k)
    for (auto kind : {SpaceMode::Kind::cosine, SpaceMode::Kind::sine}) {
      bank.push_back({{kind, k}, {}, {T}});
      bank.push_back({{}, {kind, k}, {T}});
    }
  return bank;
}

/// Level states of a trajectory: σ on [nΔt, (n+1)Δt) at the left endpoint.
struct Trajectory {
  GridSpec grid;
  KernelTable kernel;
  std::vector<SolutionState> levels;
};

inline Trajectory trajectory_of(const RunRecord& r) {
  Trajectory tr{r.config.grid, r.config.kernel, {}};
  if (r.retained()) {
    tr.levels.reserve(r.levels.size());
    for (std::size_t n = 0; n < r.levels.size(); ++n)
      tr.levels.push_back({static_cast<long>(n), static_cast<double>(n) * r.config.grid.dt, r.levels[n].s1, r.levels[n].s3});
    return tr;
  }
  if (static_cast<long>(r.snapshots.size()) != r.last_level() + 1)
    throw MissingDataError("residuals need every level: retain levels or use snapshot stride 1");
  tr.levels = r.snapshots;
  return tr;
}

namespace detail {

template <class F>
void for_each_cell(const Trajectory& tr, F&& f) {
  const double h = 2.0 * tr.grid.dx;
  const long last = static_cast<long>(tr.levels.size()) - 1;
  for (long n = 0; n < last; ++n) {
    const auto& s = tr.levels[static_cast<std::size_t>(n)];
    const double t = static_cast<double>(n) * tr.grid.dt;
    const auto G1 = convolve(tr.kernel, s.sigma3, 1);   // ∫ K(x+y) σ3(y) dy
    const auto G3 = convolve(tr.kernel, s.sigma1, 1);   // ∫ K(x+y) σ1(y) dy
    for (long j = 0; j < s.sigma1.size(); ++j) {
      const double x = static_cast<double>(s.sigma1.center(j)) * tr.grid.dx;
      const auto u = static_cast<std::size_t>(j);
      f(t, x, s.sigma1.values()[u], s.sigma3.values()[u], G1[u], G3[u], h * tr.grid.dt);
    }
  }
}

}  // namespace detail

/// Quadrature of the weak-form left side for each test pair (initial term omitted:
/// every window vanishes at t = 0).
inline std::vector<double> weak_residual(const Trajectory& tr, const std::vector<TestPair>& bank) {
  if (bank.empty()) throw Error("weak_residual: empty test bank");
  std::vector<double> r(bank.size(), 0.0);
  const double a = tr.grid.alpha;
  detail::for_each_cell(tr, [&](double t, double x, double s1, double s3, double G1, double G3, double w) {
    for (std::size_t i = 0; i < bank.size(); ++i) {
      const auto& p = bank[i];
      const double b = p.window.value(t), bt = p.window.derivative(t);
      if (b == 0.0 && bt == 0.0) continue;
      const double f1 = p.phi1.value(x), f3 = p.phi3.value(x);
      const double d1 = p.phi1.derivative(x), d3 = p.phi3.derivative(x);
      r[i] += w * (s1 * bt * f1 + 0.5 * a * s1 * s1 * b * d1 - b * f1 * G1 +
                   s3 * bt * f3 - 0.5 * a * s3 * s3 * b * d3 + b * f3 * G3);
    }
  });
  return r;
}

inline std::vector<double> weak_residual(const RunRecord& r, const std::vector<TestPair>& bank) {
  return weak_residual(trajectory_of(r), bank);
}

/// Kruzhkov residual for one family with η = |σ - k| and ψ = ±(α/2)sgn(σ - k)(σ² - k²)
/// (+ for family 1, - for family 3); nonnegative for entropy solutions when φ ≥ 0.
inline double entropy_residual(const Trajectory& tr, int family, double k, const SpaceMode& phi,
                               const TimeWindow& window) {
  if (family != 1 && family != 3) throw Error("entropy_residual: family must be 1 or 3");
  if (phi.kind != SpaceMode::Kind::bump && phi.kind != SpaceMode::Kind::zero)
    throw Error("entropy_residual: test function must be a nonnegative bump");
  const double a = tr.grid.alpha;
  const double fs = family == 1 ? 1.0 : -1.0;
  double r = 0.0;
  detail::for_each_cell(tr, [&](double t, double x, double s1, double s3, double G1, double G3, double w) {
    const double b = window.value(t), bt = window.derivative(t);
    const double f = phi.value(x);
    const double d = phi.derivative(x);
    if (f == 0.0 && d == 0.0) return;
    const double s = family == 1 ? s1 : s3;
    const double g = family == 1 ? G1 : -G3;  // source g_i of σ_i,t + ... + g_i = 0
    const double sg = s > k ? 1.0 : (s < k ? -1.0 : 0.0);
    const double eta = std::abs(s - k);
    const double psi = fs * 0.5 * a * sg * (s * s - k * k);
    r += w * (eta * bt * f + psi * b * d - b * f * sg * g);
  });
  return r;
}

inline double entropy_residual(const RunRecord& r, int family, double k, const SpaceMode& phi,
                               const TimeWindow& window) {
  return entropy_residual(trajectory_of(r), family, k, phi, window);
}

struct GapRow {
  double t = 0.0;
  double d = 0.0;
};

/// d(t) = ‖σ1^a - σ1^b‖_L1 + ‖σ3^a - σ3^b‖_L1 at every common snapshot time.
inline std::vector<GapRow> stability_gap(const RunRecord& a, const RunRecord& b) {
  const auto& ca = a.config;
  const auto& cb = b.config;
  const bool same = ca.grid.N == cb.grid.N && ca.grid.lambda == cb.grid.lambda && ca.grid.alpha == cb.grid.alpha &&
                    ca.grid.beta == cb.grid.beta && ca.kernel.K == cb.kernel.K &&
                    ca.inputs.sampling == cb.inputs.sampling && ca.inputs.t_final == cb.inputs.t_final &&
                    ca.inputs.snapshot_stride == cb.inputs.snapshot_stride &&
                    ca.inputs.recenter_mean == cb.inputs.recenter_mean;
  if (!same) throw ConfigError("stability_gap: configurations differ beyond initial data");
  std::vector<GapRow> out;
  for (std::size_t i = 0; i < std::min(a.snapshots.size(), b.snapshots.size()); ++i) {
    const auto& x = a.snapshots[i];
    const auto& y = b.snapshots[i];
    out.push_back({x.t, l1_distance(x.sigma1, y.sigma1) + l1_distance(x.sigma3, y.sigma3)});
  }
  return out;
}

}  // namespace wnlo

#endif
