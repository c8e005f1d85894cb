#ifndef WNLO_GRID_HPP
#define WNLO_GRID_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "wnlo/error.hpp"

namespace wnlo {

struct GridSpec {
  int N = 3;
  double dx = 0.125;
  double lambda = 1.0;
  double dt = 0.125;
  double alpha = 1.0;
  double beta = 0.0;

  long cells() const { return 1L << (N - 1); }
  long nodes() const { return 1L << N; }
};

inline GridSpec make_grid(int N, double lambda, double alpha, double beta) {
  if (N < 3 || N > 30) throw ConfigError("grid level N must lie in [3, 30]");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ConfigError("lambda must be positive");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ConfigError("alpha must be positive");
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw ConfigError("beta must be nonnegative");
  GridSpec g;
  g.N = N;
  g.dx = std::ldexp(1.0, -N);
  g.lambda = lambda;
  g.dt = g.dx / lambda;
  g.alpha = alpha;
  g.beta = beta;
  return g;
}

/// Floor modulus for periodic index arithmetic.
inline long wrap(long i, long n) {
  const long r = i % n;
  return r < 0 ? r + n : r;
}

/// Piecewise-constant periodic field on one staggered level. Cell j has center
/// m_j = 2j + 1 - parity (in units of dx) and spans [(m_j - 1)dx, (m_j + 1)dx).
class PeriodicProfile {
 public:
  PeriodicProfile() = default;
  PeriodicProfile(int N, int parity, std::vector<double> values)
      : N_(N), parity_(parity), values_(std::move(values)) {
    if (N < 2) throw DimensionError("profile level must be at least 2");
    if (parity != 0 && parity != 1) throw ParityError("parity must be 0 or 1");
    if (values_.size() != static_cast<std::size_t>(1L << (N - 1)))
      throw DimensionError("profile must hold exactly 2^(N-1) cells");
  }

  static PeriodicProfile constant(int N, int parity, double c) {
    return PeriodicProfile(N, parity, std::vector<double>(std::size_t(1) << (N - 1), c));
  }

  int N() const { return N_; }
  int parity() const { return parity_; }
  long size() const { return static_cast<long>(values_.size()); }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }
  double operator[](long j) const { return values_[static_cast<std::size_t>(wrap(j, size()))]; }
  double dx() const { return std::ldexp(1.0, -N_); }

  /// Center index m (units of dx) of cell j.
  long center(long j) const { return 2 * j + 1 - parity_; }

  /// Cell whose center index is m; m must have the profile's center parity.
  long cell_of_center(long m) const {
    if (wrap(m + parity_, 2) != 1) throw ParityError("index parity does not match profile");
    return wrap((m - 1 + parity_) / 2, size());
  }

  /// Value at center index m (periodic).
  double at_center(long m) const { return values_[static_cast<std::size_t>(cell_of_center(m))]; }

  /// Right-continuous point value at x.
  double value(double x) const {
    const double h = dx();
    const double s = x / h + parity_;  // offset from the left edge of cell 0, in dx
    const long j = static_cast<long>(std::floor(s / 2.0));
    return (*this)[j];
  }

 private:
  int N_ = 3;
  int parity_ = 0;
  std::vector<double> values_;
};

struct SolutionState {
  long n = 0;
  double t = 0.0;
  PeriodicProfile sigma1;
  PeriodicProfile sigma3;
};

struct DiagnosticsRow {
  double t = 0.0;
  double tv1 = 0.0, tv3 = 0.0;
  double sup1 = 0.0, sup3 = 0.0;
  double mean1 = 0.0, mean3 = 0.0;
};

inline double total_variation(const PeriodicProfile& p) {
  const auto& v = p.values();
  double tv = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) tv += std::abs(v[(j + 1) % v.size()] - v[j]);
  return tv;
}

inline double sup_norm(const PeriodicProfile& p) {
  double s = 0.0;
  for (double v : p.values()) s = std::max(s, std::abs(v));
  return s;
}

/// Integral over one period.
inline double period_mean(const PeriodicProfile& p) {
  double s = 0.0;
  for (double v : p.values()) s += v;
  return 2.0 * p.dx() * s;
}

/// Exact L1 distance over [0,1); profiles may sit on different parities.
inline double l1_distance(const PeriodicProfile& p, const PeriodicProfile& q) {
  if (p.N() != q.N()) throw DimensionError("l1_distance: mismatched N");
  const long nodes = 1L << p.N();
  const double h = p.dx();
  double s = 0.0;
  // Each dx-wide slab [k dx, (k+1) dx) lies inside one cell of either parity.
  for (long k = 0; k < nodes; ++k) {
    const double x = (static_cast<double>(k) + 0.5) * h;
    s += std::abs(p.value(x) - q.value(x));
  }
  return s * h;
}

inline DiagnosticsRow diagnostics_row(const SolutionState& s) {
  return {s.t,
          total_variation(s.sigma1), total_variation(s.sigma3),
          sup_norm(s.sigma1),        sup_norm(s.sigma3),
          period_mean(s.sigma1),     period_mean(s.sigma3)};
}

}  // namespace wnlo

#endif
