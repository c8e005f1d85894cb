#ifndef WNLO_HOPF_LAX_HPP
#define WNLO_HOPF_LAX_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "wnlo/error.hpp"
#include "wnlo/periodic_function.hpp"

namespace wnlo {

/// Entropy solution of σ_t ± (α/2)(σ²)_x = 0 (no coupling) by the Lax–Oleinik formula:
/// u(x,t) = (x - y*)/(αt), y* minimizing U0(y) + (x - y)²/(2αt) with U0' = u0.
/// Family 3 is handled through x -> -x.
class HopfLaxOracle {
 public:
  HopfLaxOracle(PeriodicFunction u0, double alpha, int family, double search_step = 1.0 / 8192.0)
      : u0_(std::move(u0)), alpha_(alpha), family_(family), h_(search_step) {
    if (!(alpha > 0.0)) throw ConfigError("oracle: alpha must be positive");
    if (family != 1 && family != 3) throw ConfigError("oracle: family must be 1 or 3");
    for (int i = 0; i < 8192; ++i) sup_ = std::max(sup_, std::abs(u0_.value(i / 8192.0)));
    for (const auto& n : u0_.nodes()) sup_ = std::max(sup_, std::abs(n.v));
  }

  double value(double x, double t) const {
    if (family_ == 1) return value1(x, t);
    return value1(-x, t);
  }

  /// Values at the midpoints of P equal subintervals of [0, 1).
  std::vector<double> sample(double t, long P) const {
    std::vector<double> v(static_cast<std::size_t>(P));
    for (long i = 0; i < P; ++i) v[static_cast<std::size_t>(i)] = value((i + 0.5) / static_cast<double>(P), t);
    return v;
  }

 private:
  // Initial function in the family-1 frame.
  double U(double y) const { return family_ == 1 ? u0_.antiderivative(y) : -u0_.antiderivative(-y); }
  double u(double y) const { return family_ == 1 ? u0_.value(y) : u0_.value(-y); }

  double value1(double x, double t) const {
    if (t <= 0.0) return u(x);
    const double at = alpha_ * t;
    auto F = [&](double y) { return U(y) + (x - y) * (x - y) / (2.0 * at); };
    const double R = at * sup_ + 2.0 * h_;
    const long n = static_cast<long>(std::ceil(R / h_));
    double best = F(x), ybest = x;
    for (long i = -n; i <= n; ++i) {
      const double y = x + static_cast<double>(i) * h_;
      const double f = F(y);
      if (f < best) {
        best = f;
        ybest = y;
      }
    }
    // Golden-section refinement around the grid minimizer.
    double a = ybest - h_, b = ybest + h_;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = F(c), fd = F(d);
    for (int it = 0; it < 80 && b - a > 1e-15; ++it) {
      if (fc < fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - g * (b - a);
        fc = F(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + g * (b - a);
        fd = F(d);
      }
    }
    const double y = 0.5 * (a + b);
    return (x - y) / at;
  }

  PeriodicFunction u0_;
  double alpha_;
  int family_;
  double h_;
  double sup_ = 0.0;
};

/// ∫_0^1 |p(x) - q_i| over P midpoint samples q_i of a reference.
template <class Profile>
double l1_error_against(const Profile& p, const std::vector<double>& ref) {
  const double P = static_cast<double>(ref.size());
  double s = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) s += std::abs(p.value((static_cast<double>(i) + 0.5) / P) - ref[i]);
  return s / P;
}

}  // namespace wnlo

#endif
