#ifndef WNLO_KERNEL_HPP
#define WNLO_KERNEL_HPP

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <thread>
#include <vector>

#include "wnlo/error.hpp"
#include "wnlo/grid.hpp"
#include "wnlo/periodic_function.hpp"

namespace wnlo {

/// The entropy wave σ2: a closed-form function of period 1/2 that is absolutely continuous.
class EntropyWaveSpec {
 public:
  explicit EntropyWaveSpec(PeriodicFunction f) : f_(std::move(f)) {
    if (f_.period() != 0.5) throw ConfigError("sigma2 must have period 1/2");
    if (!f_.continuous()) throw ConfigError("sigma2 must be continuous");
  }

  /// Terms (k, c, s) mean c*cos(4πk x) + s*sin(4πk x).
  static EntropyWaveSpec trig(std::vector<TrigTerm> terms, double constant = 0.0) {
    return EntropyWaveSpec(PeriodicFunction::trig(0.5, constant, std::move(terms)));
  }

  static EntropyWaveSpec piecewise_linear(std::vector<Node> nodes) {
    return EntropyWaveSpec(PeriodicFunction::piecewise_linear(0.5, std::move(nodes)));
  }

  static EntropyWaveSpec zero() { return trig({}); }

  const PeriodicFunction& function() const { return f_; }
  double value(double x) const { return f_.value(x); }
  double derivative(double x) const { return f_.derivative(x); }

  /// ∫_0^{1/2} |σ2'|.
  double E() const { return f_.total_variation(); }
  /// max |σ2'|.
  double Etilde() const { return f_.max_abs_derivative(); }
  bool c1() const { return f_.c1(); }

 private:
  PeriodicFunction f_;
};

/// K(x) = (β/4) σ2'(x/2); right derivative at piecewise-linear kinks.
inline double kernel_value(const EntropyWaveSpec& s, double x, double beta) {
  return 0.25 * beta * s.derivative(0.5 * x);
}

struct KernelTable {
  int N = 3;
  double alpha = 1.0;
  double beta = 0.0;
  double E = 0.0;
  std::optional<double> Etilde;
  double Etilde_slope = 0.0;  // max |σ2'| for every representation
  std::vector<double> K;      // K_m^N for m = 0 .. 2^N - 1
  /// Trig σ2 only: K_m^N = Σ a cos(2πk mΔx) + b sin(2πk mΔx) exactly.
  struct Mode {
    int k;
    double a, b;
  };
  std::vector<Mode> modes;

  long period() const { return static_cast<long>(K.size()); }
  double at(long m) const { return K[static_cast<std::size_t>(wrap(m, period()))]; }

  /// Σ K_m over one period restricted to m ≡ parity (mod 2), compensated summation.
  double sum(int parity) const {
    double s = 0.0, c = 0.0;
    for (long m = parity; m < period(); m += 2) {
      const double k = K[static_cast<std::size_t>(m)];
      const double t = s + k;
      c += std::abs(s) >= std::abs(k) ? (s - t) + k : (k - t) + s;
      s = t;
    }
    return s + c;
  }

  double abs_sum(int parity) const {
    double s = 0.0;
    for (long m = parity; m < period(); m += 2) s += std::abs(K[static_cast<std::size_t>(m)]);
    return s;
  }

  double max_abs() const {
    double s = 0.0;
    for (double k : K) s = std::max(s, std::abs(k));
    return s;
  }
};

inline KernelTable build_kernel_table(const EntropyWaveSpec& s, const GridSpec& g) {
  KernelTable t;
  t.N = g.N;
  t.alpha = g.alpha;
  t.beta = g.beta;
  t.E = s.E();
  t.Etilde_slope = s.Etilde();
  if (s.c1()) t.Etilde = t.Etilde_slope;
  const long P = g.nodes();
  t.K.resize(static_cast<std::size_t>(P));
  for (long m = 0; m < P; ++m) {
    const double hi = s.value(0.5 * (static_cast<double>(m) + 1.0) * g.dx);
    const double lo = s.value(0.5 * (static_cast<double>(m) - 1.0) * g.dx);
    t.K[static_cast<std::size_t>(m)] = 0.5 * g.beta * (hi - lo);
  }
  if (s.c1() && g.beta != 0.0)
    for (const auto& term : s.function().terms()) {
      const double sd = std::sin(2.0 * std::numbers::pi * term.k * g.dx);
      t.modes.push_back({term.k, g.beta * term.s * sd, -g.beta * term.c * sd});
    }
  return t;
}

/// g_j = sign * Σ_{m̃ ∈ (-2^N, 2^N], same parity} K_{m_j + m̃} h_{m̃}, one value per cell of h.
/// Each output is a fixed-order sum, so the result does not depend on `threads`.
inline std::vector<double> convolve_direct(const KernelTable& table, const PeriodicProfile& h, int sign,
                                           unsigned threads = 1) {
  if (h.N() != table.N) throw DimensionError("convolve: profile and kernel levels differ");
  if (sign != 1 && sign != -1) throw Error("convolve: sign must be +1 or -1");
  const long M = h.size();
  std::vector<double> g(static_cast<std::size_t>(M), 0.0);
  if (table.beta == 0.0) return g;
  // m_j + m_i = 2(i + j + 1 - p); even-index kernel values, doubled for contiguous access.
  const long shift = 1 - h.parity();
  std::vector<double> Kd(static_cast<std::size_t>(2 * M));
  for (long k = 0; k < 2 * M; ++k) Kd[static_cast<std::size_t>(k)] = table.at(2 * (k % M + shift));
  const auto& hv = h.values();
  auto work = [&](long j0, long j1) {
    for (long j = j0; j < j1; ++j) {
      const double* kp = Kd.data() + j;
      double acc = 0.0;
      for (long i = 0; i < M; ++i) acc += kp[i] * hv[static_cast<std::size_t>(i)];
      g[static_cast<std::size_t>(j)] = sign * 2.0 * acc;
    }
  };
  const long nt = std::max<long>(1, std::min<long>(threads, M));
  if (nt == 1) {
    work(0, M);
  } else {
    std::vector<std::thread> pool;
    for (long t = 0; t < nt; ++t) pool.emplace_back(work, M * t / nt, M * (t + 1) / nt);
    for (auto& th : pool) th.join();
  }
  return g;
}

/// Same as convolve_direct in O(modes · cells) through the separable form of a trig kernel.
inline std::vector<double> convolve_separable(const KernelTable& table, const PeriodicProfile& h, int sign) {
  if (h.N() != table.N) throw DimensionError("convolve: profile and kernel levels differ");
  if (sign != 1 && sign != -1) throw Error("convolve: sign must be +1 or -1");
  const long M = h.size();
  std::vector<double> g(static_cast<std::size_t>(M), 0.0);
  if (table.beta == 0.0) return g;
  const double dx = std::ldexp(1.0, -table.N);
  const auto& hv = h.values();
  for (const auto& mode : table.modes) {
    const double w = 2.0 * std::numbers::pi * mode.k * dx;
    std::vector<double> c(static_cast<std::size_t>(M)), s(static_cast<std::size_t>(M));
    double C = 0.0, S = 0.0;
    for (long i = 0; i < M; ++i) {
      const double th = w * static_cast<double>(h.center(i));
      c[static_cast<std::size_t>(i)] = std::cos(th);
      s[static_cast<std::size_t>(i)] = std::sin(th);
      C += hv[static_cast<std::size_t>(i)] * c[static_cast<std::size_t>(i)];
      S += hv[static_cast<std::size_t>(i)] * s[static_cast<std::size_t>(i)];
    }
    const double p = mode.a * C + mode.b * S, q = mode.b * C - mode.a * S;
    for (std::size_t j = 0; j < g.size(); ++j) g[j] += p * c[j] + q * s[j];
  }
  for (double& v : g) v *= 2.0 * sign;
  return g;
}

/// Direct summation, or the separable form when the kernel carries trig modes.
inline std::vector<double> convolve(const KernelTable& table, const PeriodicProfile& h, int sign,
                                    unsigned threads = 1) {
  if (!table.modes.empty()) return convolve_separable(table, h, sign);
  return convolve_direct(table, h, sign, threads);
}

/// Σ_{m̃} K_{m + m̃} h_{m̃} at an arbitrary index m of either parity (quadrature helper).
inline double correlate_at(const KernelTable& table, const PeriodicProfile& h, long m) {
  double acc = 0.0;
  for (long i = 0; i < h.size(); ++i) acc += table.at(m + h.center(i)) * h.values()[static_cast<std::size_t>(i)];
  return 2.0 * acc;
}

}  // namespace wnlo

#endif
