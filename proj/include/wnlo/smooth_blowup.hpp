#ifndef WNLO_SMOOTH_BLOWUP_HPP
#define WNLO_SMOOTH_BLOWUP_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "wnlo/error.hpp"
#include "wnlo/kernel.hpp"
#include "wnlo/periodic_function.hpp"
#include "wnlo/scheme.hpp"

namespace wnlo {

/// P Lagrangian labels z_j = j/P carried along the i-characteristics.
struct CharacteristicEnsemble {
  int family = 1;
  std::vector<double> z, x, u;

  long size() const { return static_cast<long>(z.size()); }

  /// Position of label j + k, unwrapped across the period.
  double position(long j, long k) const {
    const long P = size();
    const long i = j + k;
    const long w = static_cast<long>(std::floor(static_cast<double>(i) / static_cast<double>(P)));
    return x[static_cast<std::size_t>(i - w * P)] + static_cast<double>(w);
  }

  /// ∂x/∂z by centered periodic differences.
  std::vector<double> jacobian() const {
    const long P = size();
    std::vector<double> J(static_cast<std::size_t>(P));
    for (long j = 0; j < P; ++j)
      J[static_cast<std::size_t>(j)] = (position(j, 1) - position(j, -1)) * 0.5 * static_cast<double>(P);
    return J;
  }

  /// ∂u/∂z by centered periodic differences.
  std::vector<double> value_gradient() const {
    const long P = size();
    std::vector<double> d(static_cast<std::size_t>(P));
    for (long j = 0; j < P; ++j) {
      const double up = u[static_cast<std::size_t>((j + 1) % P)];
      const double dn = u[static_cast<std::size_t>((j + P - 1) % P)];
      d[static_cast<std::size_t>(j)] = (up - dn) * 0.5 * static_cast<double>(P);
    }
    return d;
  }

  /// ‖∂_x σ‖_{L1}: the discrete total variation of the values over one period.
  double l1_gradient() const {
    const long P = size();
    double s = 0.0;
    for (long j = 0; j < P; ++j)
      s += std::abs(u[static_cast<std::size_t>((j + 1) % P)] - u[static_cast<std::size_t>(j)]);
    return s;
  }

  /// (1/P) Σ u_j ∂x/∂z_j: the period mean of the field.
  double weighted_mean() const {
    const auto J = jacobian();
    double s = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) s += u[j] * J[j];
    return s / static_cast<double>(size());
  }
};

struct EnsemblePair {
  double t = 0.0;
  CharacteristicEnsemble e1, e3;
};

inline CharacteristicEnsemble make_ensemble(int family, const PeriodicFunction& f, long P) {
  CharacteristicEnsemble e;
  e.family = family;
  e.z.resize(static_cast<std::size_t>(P));
  e.u.resize(static_cast<std::size_t>(P));
  for (long j = 0; j < P; ++j) {
    const double z = static_cast<double>(j) / static_cast<double>(P);
    e.z[static_cast<std::size_t>(j)] = z;
    e.u[static_cast<std::size_t>(j)] = f.value(z);
  }
  e.x = e.z;
  return e;
}

inline EnsemblePair init_ensembles(const InitialData& init, long P) {
  if (P < 64) throw ConfigError("ensemble needs at least 64 labels");
  if (!init.sigma1.c1() || !init.sigma3.c1()) throw ConfigError("blow-up experiment needs C^1 (trig) initial data");
  return {0.0, make_ensemble(1, init.sigma1, P), make_ensemble(3, init.sigma3, P)};
}

/// F(x) = ∫_{-1}^{1} K(x + y) σ(y) dy by trapezoid quadrature over a moving ensemble.
/// Trig σ2 uses the separable form of K; piecewise-linear σ2 sums directly.
class NonlocalForce {
 public:
  NonlocalForce(const EntropyWaveSpec& s, double beta, unsigned threads = 1)
      : spec_(s), beta_(beta), threads_(std::max(1u, threads)) {
    const auto& f = s.function();
    separable_ = f.kind() == PeriodicFunction::Kind::trig;
    if (separable_)
      for (const auto& t : f.terms()) {
        const double w = beta * std::numbers::pi * t.k;
        modes_.push_back({t.k, w * t.s, -w * t.c});
      }
  }

  bool separable() const { return separable_; }

  /// F at each target position, the source ensemble carrying weights u·∂x/∂z / P.
  std::vector<double> apply(const std::vector<double>& targets, const CharacteristicEnsemble& src) const {
    std::vector<double> F(targets.size(), 0.0);
    if (beta_ == 0.0) return F;
    const auto J = src.jacobian();
    const double invP = 1.0 / static_cast<double>(src.size());
    std::vector<double> w(J.size());
    for (std::size_t j = 0; j < J.size(); ++j) w[j] = src.u[j] * J[j] * invP;
    constexpr double two_pi = 2.0 * std::numbers::pi;
    if (separable_) {
      std::vector<double> a(modes_.size()), b(modes_.size());
      for (std::size_t k = 0; k < modes_.size(); ++k) {
        double mc = 0.0, ms = 0.0;
        for (std::size_t j = 0; j < w.size(); ++j) {
          const double ph = two_pi * modes_[k].k * src.x[j];
          mc += w[j] * std::cos(ph);
          ms += w[j] * std::sin(ph);
        }
        a[k] = 2.0 * (modes_[k].A * mc + modes_[k].B * ms);
        b[k] = 2.0 * (modes_[k].B * mc - modes_[k].A * ms);
      }
      for (std::size_t i = 0; i < targets.size(); ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k < modes_.size(); ++k) {
          const double ph = two_pi * modes_[k].k * targets[i];
          s += a[k] * std::cos(ph) + b[k] * std::sin(ph);
        }
        F[i] = s;
      }
      return F;
    }
    auto work = [&](std::size_t i0, std::size_t i1) {
      for (std::size_t i = i0; i < i1; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < w.size(); ++j) s += kernel_value(spec_, targets[i] + src.x[j], beta_) * w[j];
        F[i] = 2.0 * s;
      }
    };
    const std::size_t nt = std::min<std::size_t>(threads_, std::max<std::size_t>(1, targets.size()));
    if (nt == 1) {
      work(0, targets.size());
    } else {
      std::vector<std::thread> pool;
      for (std::size_t t = 0; t < nt; ++t)
        pool.emplace_back(work, targets.size() * t / nt, targets.size() * (t + 1) / nt);
      for (auto& th : pool) th.join();
    }
    return F;
  }

 private:
  struct Mode {
    int k;
    double A, B;  // K(x) = Σ A cos(2πkx) + B sin(2πkx)
  };
  EntropyWaveSpec spec_;
  double beta_;
  unsigned threads_;
  bool separable_ = false;
  std::vector<Mode> modes_;
};

namespace detail {

struct PairRate {
  std::vector<double> dx1, du1, dx3, du3;
};

inline PairRate pair_rate(const EnsemblePair& s, const NonlocalForce& F, double alpha) {
  PairRate r;
  r.dx1.resize(s.e1.u.size());
  r.dx3.resize(s.e3.u.size());
  for (std::size_t j = 0; j < r.dx1.size(); ++j) r.dx1[j] = alpha * s.e1.u[j];
  for (std::size_t j = 0; j < r.dx3.size(); ++j) r.dx3[j] = -alpha * s.e3.u[j];
  r.du1 = F.apply(s.e1.x, s.e3);
  for (double& v : r.du1) v = -v;
  r.du3 = F.apply(s.e3.x, s.e1);
  return r;
}

inline EnsemblePair advance(const EnsemblePair& s, const PairRate& r, double h) {
  EnsemblePair o = s;
  o.t = s.t + h;
  for (std::size_t j = 0; j < o.e1.x.size(); ++j) {
    o.e1.x[j] += h * r.dx1[j];
    o.e1.u[j] += h * r.du1[j];
  }
  for (std::size_t j = 0; j < o.e3.x.size(); ++j) {
    o.e3.x[j] += h * r.dx3[j];
    o.e3.u[j] += h * r.du3[j];
  }
  return o;
}

inline EnsemblePair rk4(const EnsemblePair& s, const NonlocalForce& F, double alpha, double h) {
  const auto k1 = pair_rate(s, F, alpha);
  const auto k2 = pair_rate(advance(s, k1, 0.5 * h), F, alpha);
  const auto k3 = pair_rate(advance(s, k2, 0.5 * h), F, alpha);
  const auto k4 = pair_rate(advance(s, k3, h), F, alpha);
  EnsemblePair o = s;
  o.t = s.t + h;
  auto comb = [h](std::vector<double>& y, const std::vector<double>& a, const std::vector<double>& b,
                  const std::vector<double>& c, const std::vector<double>& d) {
    for (std::size_t j = 0; j < y.size(); ++j) y[j] += h / 6.0 * (a[j] + 2.0 * b[j] + 2.0 * c[j] + d[j]);
  };
  comb(o.e1.x, k1.dx1, k2.dx1, k3.dx1, k4.dx1);
  comb(o.e1.u, k1.du1, k2.du1, k3.du1, k4.du1);
  comb(o.e3.x, k1.dx3, k2.dx3, k3.dx3, k4.dx3);
  comb(o.e3.u, k1.du3, k2.du3, k3.du3, k4.du3);
  return o;
}

}  // namespace detail

/// Smallest Jacobian over both ensembles with its family and label.
struct JacobianMin {
  double value = 0.0;
  int family = 1;
  double z = 0.0;
};

inline JacobianMin min_jacobian(const EnsemblePair& s) {
  JacobianMin m{std::numeric_limits<double>::infinity(), 1, 0.0};
  for (const auto* e : {&s.e1, &s.e3}) {
    const auto J = e->jacobian();
    for (std::size_t j = 0; j < J.size(); ++j)
      if (J[j] < m.value) m = {J[j], e->family, e->z[j]};
  }
  return m;
}

/// One classical RK4 step of both ensembles. Raises BlowupSignal(t, t + dt) when the
/// updated Jacobian is not positive.
inline EnsemblePair step_rk4(const EnsemblePair& s, const NonlocalForce& F, double alpha, double dt) {
  if (!(dt > 0.0)) throw ConfigError("time step must be positive");
  if (min_jacobian(s).value <= 0.0) throw Error("ensemble is no longer classical");
  EnsemblePair o = detail::rk4(s, F, alpha, dt);
  if (min_jacobian(o).value <= 0.0) throw BlowupSignal("Jacobian reached zero", s.t, o.t);
  return o;
}

struct BlowupConfig {
  double alpha = 1.0;
  double beta = 0.0;
  EntropyWaveSpec sigma2 = EntropyWaveSpec::zero();
  InitialData init;
  long P = 512;
  std::optional<double> dt;     // default 10^-3/(α M_I)
  std::optional<double> t_max;  // default 2·6/(α M_I), or 10/α for flat data
  long record_stride = 1;
  unsigned threads = 1;
};

struct BlowupRow {
  double t = 0.0;
  double min_jacobian = 1.0;
  double argmin_z = 0.0;
  double l1_w1 = 0.0;
  double l1_w3 = 0.0;
};

struct BlowupCertificate {
  double M_I = 0.0;
  double Etilde = 0.0;
  double threshold = 0.0;  // (3/ln(13/12))·β/α
  bool hypothesis_met = false;
  double bound = 0.0;  // 6/(α M_I)
  bool crossed = false;
  double t_lo = 0.0, t_hi = 0.0;
  double T_b = 0.0;
  int crossing_family = 0;
  double crossing_z = 0.0;
  bool within_bound = false;
  int steepest_family = 0;
  double z_star = -1.0;
  double bootstrap_drift = 0.0;  // max |σ_z(t; z*) - σ_z(0; z*)| on [0, min(bound, T_b)]
  bool bootstrap_ok = false;
  double ode_jacobian_gap = 0.0;  // |∂x/∂z - (1 ± α∫σ_z)| at z*
  double c0_ratio = 0.0;           // max (‖w1‖ + ‖w3‖)/(M_I exp((β/2)Ẽt))
  std::string status;
};

struct BlowupReport {
  BlowupConfig config;
  std::vector<BlowupRow> rows;
  BlowupCertificate certificate;
  EnsemblePair final_state;
};

inline double blowup_threshold_constant() { return 3.0 / std::log(13.0 / 12.0); }

namespace detail {

inline BlowupRow blowup_row(const EnsemblePair& s) {
  const auto m = min_jacobian(s);
  return {s.t, m.value, m.z, s.e1.l1_gradient(), s.e3.l1_gradient()};
}

/// Periodic linear interpolation of per-label data at label z.
inline double label_interp(const std::vector<double>& v, double z) {
  const long P = static_cast<long>(v.size());
  const double s = (z - std::floor(z)) * static_cast<double>(P);
  const long j = static_cast<long>(std::floor(s)) % P;
  const double f = s - std::floor(s);
  return (1.0 - f) * v[static_cast<std::size_t>(j)] + f * v[static_cast<std::size_t>((j + 1) % P)];
}

}  // namespace detail

/// Integrates until the Jacobian first vanishes (bracketed by bisection) or t_max.
inline BlowupReport detect_blowup(const BlowupConfig& c) {
  if (!(c.alpha > 0.0) || !(c.beta >= 0.0)) throw ConfigError("alpha > 0 and beta >= 0 required");
  if (c.record_stride < 1) throw ConfigError("record_stride must be positive");
  if (!c.sigma2.c1()) throw ConfigError("blow-up experiment needs a C^1 (trig) sigma2");
  BlowupReport rep;
  rep.config = c;
  auto& cert = rep.certificate;
  cert.M_I = c.init.total_variation();
  cert.Etilde = c.sigma2.Etilde();
  cert.threshold = blowup_threshold_constant() * c.beta / c.alpha;
  cert.hypothesis_met = cert.M_I > 0.0 && (cert.Etilde == 0.0 || cert.M_I / cert.Etilde > cert.threshold);
  cert.bound = cert.M_I > 0.0 ? 6.0 / (c.alpha * cert.M_I) : std::numeric_limits<double>::infinity();
  const double dt = c.dt ? *c.dt : 1e-3 / (c.alpha * std::max(cert.M_I, 1.0));
  const double t_max = c.t_max ? *c.t_max : (cert.M_I > 0.0 ? 2.0 * cert.bound : 10.0 / c.alpha);
  if (!(dt > 0.0) || !(t_max > 0.0)) throw ConfigError("dt and t_max must be positive");

  const NonlocalForce F(c.sigma2, c.beta, c.threads);
  EnsemblePair s = init_ensembles(c.init, c.P);

  if (cert.M_I > 0.0) {
    const bool one = c.init.sigma1.total_variation() >= 0.5 * cert.M_I;
    cert.steepest_family = one ? 1 : 3;
    const auto& f0 = one ? c.init.sigma1 : c.init.sigma3;
    cert.z_star = f0.leftmost_derivative_level((one ? -0.25 : 0.25) * cert.M_I);
  }
  const bool track = cert.z_star >= 0.0;
  const double sign = cert.steepest_family == 3 ? -1.0 : 1.0;
  auto steep = [&](const EnsemblePair& e) -> const CharacteristicEnsemble& {
    return cert.steepest_family == 3 ? e.e3 : e.e1;
  };
  double uz0 = 0.0, uz_prev = 0.0, integral = 0.0;
  if (track) uz0 = uz_prev = detail::label_interp(steep(s).value_gradient(), cert.z_star);

  const double growth = 0.5 * c.beta * cert.Etilde;
  auto observe = [&](const EnsemblePair& e) {
    if (cert.M_I > 0.0) {
      const double env = cert.M_I * std::exp(growth * e.t);
      cert.c0_ratio = std::max(cert.c0_ratio, (e.e1.l1_gradient() + e.e3.l1_gradient()) / env);
    }
  };
  observe(s);
  rep.rows.push_back(detail::blowup_row(s));

  long k = 0;
  while (s.t < t_max * (1.0 - 1e-12)) {
    const double h = std::min(dt, t_max - s.t);
    EnsemblePair next = detail::rk4(s, F, c.alpha, h);
    if (min_jacobian(next).value <= 0.0) {
      double lo = 0.0, hi = h;
      for (int it = 0; it < 60 && hi - lo > 1e-14 * std::max(1.0, s.t); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (min_jacobian(detail::rk4(s, F, c.alpha, mid)).value <= 0.0)
          hi = mid;
        else
          lo = mid;
      }
      const auto at = detail::rk4(s, F, c.alpha, hi);
      const auto m = min_jacobian(at);
      cert.crossed = true;
      cert.t_lo = s.t + lo;
      cert.t_hi = s.t + hi;
      cert.T_b = 0.5 * (cert.t_lo + cert.t_hi);
      cert.crossing_family = m.family;
      cert.crossing_z = m.z;
      rep.rows.push_back(detail::blowup_row(at));
      break;
    }
    if (track) {
      const double uz = detail::label_interp(steep(next).value_gradient(), cert.z_star);
      integral += 0.5 * h * (uz_prev + uz);
      uz_prev = uz;
      const double J = detail::label_interp(steep(next).jacobian(), cert.z_star);
      cert.ode_jacobian_gap = std::max(cert.ode_jacobian_gap, std::abs(J - (1.0 + sign * c.alpha * integral)));
      if (next.t <= cert.bound) cert.bootstrap_drift = std::max(cert.bootstrap_drift, std::abs(uz - uz0));
    }
    s = std::move(next);
    observe(s);
    ++k;
    if (k % c.record_stride == 0 || s.t >= t_max * (1.0 - 1e-12)) rep.rows.push_back(detail::blowup_row(s));
  }
  rep.final_state = s;

  cert.within_bound = cert.crossed && cert.T_b <= cert.bound;
  cert.bootstrap_ok = track && cert.bootstrap_drift < cert.M_I / 12.0;
  if (!cert.crossed)
    cert.status = "no crossing";
  else
    cert.status = cert.within_bound ? "T_b <= 6/(alpha M_I)" : "T_b > 6/(alpha M_I)";
  if (!cert.hypothesis_met) cert.status += " (outside hypothesis)";
  return rep;
}

}  // namespace wnlo

#endif
