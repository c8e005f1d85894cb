#ifndef WNLO_PERIODIC_FUNCTION_HPP
#define WNLO_PERIODIC_FUNCTION_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "wnlo/error.hpp"

namespace wnlo {

/// One Fourier mode c*cos(2πk x/P) + s*sin(2πk x/P) of a function with period P.
struct TrigTerm {
  int k = 1;
  double c = 0.0;
  double s = 0.0;
};

struct Node {
  double x = 0.0;
  double v = 0.0;
};

/// Closed-form periodic function: a trigonometric polynomial or a piecewise-linear
/// interpolant. Piecewise-linear nodes may repeat an abscissa to encode a jump; the
/// closing segment runs from the last node to the first node shifted by one period.
/// Point values are right limits and derivatives are right derivatives.
class PeriodicFunction {
 public:
  enum class Kind { trig, piecewise_linear };

  static PeriodicFunction trig(double period, double constant, std::vector<TrigTerm> terms) {
    if (!(period > 0.0)) throw ConfigError("period must be positive");
    for (const auto& t : terms)
      if (t.k < 1) throw ConfigError("trig frequency must be a positive integer");
    PeriodicFunction f;
    f.kind_ = Kind::trig;
    f.period_ = period;
    f.constant_ = constant;
    f.terms_ = std::move(terms);
    return f;
  }

  static PeriodicFunction piecewise_linear(double period, std::vector<Node> nodes) {
    if (!(period > 0.0)) throw ConfigError("period must be positive");
    if (nodes.empty()) throw ConfigError("piecewise-linear function needs at least one node");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (nodes[i].x < 0.0 || nodes[i].x > period)
        throw ConfigError("piecewise-linear node outside [0, period]");
      if (i > 0 && nodes[i].x < nodes[i - 1].x)
        throw ConfigError("piecewise-linear nodes must be sorted");
      if (i > 1 && nodes[i].x == nodes[i - 2].x)
        throw ConfigError("at most two nodes may share an abscissa");
    }
    if (nodes.back().x > nodes.front().x + period)
      throw ConfigError("piecewise-linear nodes span more than one period");
    PeriodicFunction f;
    f.kind_ = Kind::piecewise_linear;
    f.period_ = period;
    f.build_segments(nodes);
    f.nodes_ = std::move(nodes);
    return f;
  }

  Kind kind() const { return kind_; }
  double period() const { return period_; }
  double constant() const { return constant_; }
  const std::vector<TrigTerm>& terms() const { return terms_; }
  const std::vector<Node>& nodes() const { return nodes_; }

  double value(double x) const {
    if (kind_ == Kind::trig) {
      double v = constant_;
      for (const auto& t : terms_) {
        const double a = omega(t.k) * x;
        v += t.c * std::cos(a) + t.s * std::sin(a);
      }
      return v;
    }
    const auto& s = segments_[locate(x)];
    const double y = reduce(x);
    return s.va + s.slope * (y - s.a);
  }

  double derivative(double x) const {
    if (kind_ == Kind::trig) {
      double v = 0.0;
      for (const auto& t : terms_) {
        const double w = omega(t.k);
        const double a = w * x;
        v += w * (-t.c * std::sin(a) + t.s * std::cos(a));
      }
      return v;
    }
    return segments_[locate(x)].slope;
  }

  /// Second derivative; zero almost everywhere for piecewise-linear data.
  double second_derivative(double x) const {
    if (kind_ == Kind::piecewise_linear) return 0.0;
    double v = 0.0;
    for (const auto& t : terms_) {
      const double w = omega(t.k);
      const double a = w * x;
      v -= w * w * (t.c * std::cos(a) + t.s * std::sin(a));
    }
    return v;
  }

  /// ∫_0^x f.
  double antiderivative(double x) const {
    if (kind_ == Kind::trig) {
      double v = constant_ * x;
      for (const auto& t : terms_) {
        const double w = omega(t.k);
        const double a = w * x;
        v += (t.c * std::sin(a) + t.s * (1.0 - std::cos(a))) / w;
      }
      return v;
    }
    return anchored_integral(x) - anchored_integral(0.0);
  }

  double integral(double a, double b) const { return antiderivative(b) - antiderivative(a); }

  double mean() const {
    if (kind_ == Kind::trig) return constant_;
    return period_integral_ / period_;
  }

  bool continuous() const {
    if (kind_ == Kind::trig) return true;
    return jumps_.empty();
  }

  bool c1() const { return kind_ == Kind::trig; }

  /// Total variation over one period.
  double total_variation() const {
    if (kind_ == Kind::piecewise_linear) {
      double tv = 0.0;
      for (const auto& s : segments_) tv += std::abs(s.slope) * (s.b - s.a);
      for (double j : jumps_) tv += std::abs(j);
      return tv;
    }
    const auto ext = critical_points(1);
    if (ext.empty()) return 0.0;
    double tv = 0.0;
    for (std::size_t i = 0; i < ext.size(); ++i) {
      const double x0 = ext[i];
      const double x1 = (i + 1 < ext.size()) ? ext[i + 1] : ext[0] + period_;
      tv += std::abs(value(x1) - value(x0));
    }
    return tv;
  }

  double max_abs_derivative() const {
    if (kind_ == Kind::piecewise_linear) {
      double m = 0.0;
      for (const auto& s : segments_) m = std::max(m, std::abs(s.slope));
      return m;
    }
    double m = 0.0;
    for (double x : critical_points(2)) m = std::max(m, std::abs(derivative(x)));
    const int n = samples();
    for (int i = 0; i < n; ++i) m = std::max(m, std::abs(derivative(period_ * i / n)));
    return m;
  }

  /// Leftmost abscissa in [0, period) where the derivative attains `level` (trig only).
  /// Returns a negative value when the level is not attained.
  double leftmost_derivative_level(double level) const {
    const int n = samples() * 4;
    auto h = [&](double x) { return derivative(x) - level; };
    for (int i = 0; i < n; ++i) {
      const double a = period_ * i / n;
      const double b = period_ * (i + 1) / n;
      const double ha = h(a), hb = h(b);
      if (ha == 0.0) return a;
      if (ha * hb < 0.0) return solve(h, a, b);
    }
    const double gap = std::abs(level) * 1e-9 + 1e-300;
    for (int i = 0; i < n; ++i) {
      const double a = period_ * i / n;
      if (std::abs(h(a)) <= gap) return a;
    }
    return -1.0;
  }

  PeriodicFunction shifted(double c) const {
    PeriodicFunction f = *this;
    if (kind_ == Kind::trig) {
      f.constant_ += c;
      return f;
    }
    for (auto& n : f.nodes_) n.v += c;
    f.build_segments(f.nodes_);
    return f;
  }

  PeriodicFunction scaled(double a) const {
    PeriodicFunction f = *this;
    if (kind_ == Kind::trig) {
      f.constant_ *= a;
      for (auto& t : f.terms_) {
        t.c *= a;
        t.s *= a;
      }
      return f;
    }
    for (auto& n : f.nodes_) n.v *= a;
    f.build_segments(f.nodes_);
    return f;
  }

 private:
  struct Segment {
    double a, b, va, slope, prefix;  // prefix = ∫ from the first node to a
  };

  double omega(int k) const { return 2.0 * std::numbers::pi * k / period_; }

  int max_k() const {
    int k = 0;
    for (const auto& t : terms_) k = std::max(k, t.k);
    return k;
  }

  int samples() const { return 64 * (max_k() + 1); }

  double reduce(double x) const {
    const double x0 = nodes_.empty() ? 0.0 : nodes_.front().x;
    double y = x - x0;
    y -= period_ * std::floor(y / period_);
    if (y >= period_) y = 0.0;
    return x0 + y;
  }

  std::size_t locate(double x) const {
    const double y = reduce(x);
    auto it = std::upper_bound(segments_.begin(), segments_.end(), y,
                               [](double v, const Segment& s) { return v < s.a; });
    return it == segments_.begin() ? 0 : static_cast<std::size_t>(it - segments_.begin() - 1);
  }

  /// ∫ from the first node to x, for any real x.
  double anchored_integral(double x) const {
    const double x0 = nodes_.front().x;
    const double k = std::floor((x - x0) / period_);
    const double y = reduce(x);
    const auto& s = segments_[locate(x)];
    const double d = y - s.a;
    return k * period_integral_ + s.prefix + s.va * d + 0.5 * s.slope * d * d;
  }

  void build_segments(const std::vector<Node>& nodes) {
    segments_.clear();
    jumps_.clear();
    const std::size_t n = nodes.size();
    double prefix = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const Node& p = nodes[i];
      Node q = (i + 1 < n) ? nodes[i + 1] : Node{nodes[0].x + period_, nodes[0].v};
      const double w = q.x - p.x;
      if (w <= 0.0) {
        jumps_.push_back(q.v - p.v);
        continue;
      }
      const double slope = (q.v - p.v) / w;
      segments_.push_back({p.x, q.x, p.v, slope, prefix});
      prefix += 0.5 * (p.v + q.v) * w;
    }
    if (segments_.empty()) throw ConfigError("piecewise-linear function has zero extent");
    period_integral_ = prefix;
  }

  template <class F>
  static double solve(F f, double a, double b) {
    std::uintmax_t it = 200;
    auto r = boost::math::tools::toms748_solve(f, a, b, boost::math::tools::eps_tolerance<double>(52), it);
    return 0.5 * (r.first + r.second);
  }

  /// Zeros in [0, period) of the `order`-th derivative (order 1 or 2), sorted.
  std::vector<double> critical_points(int order) const {
    auto h = [&](double x) { return order == 1 ? derivative(x) : second_derivative(x); };
    std::vector<double> roots;
    const int n = samples();
    for (int i = 0; i < n; ++i) {
      const double a = period_ * i / n;
      const double b = period_ * (i + 1) / n;
      const double ha = h(a), hb = h(b);
      if (ha == 0.0) {
        roots.push_back(a);
      } else if (ha * hb < 0.0) {
        roots.push_back(solve(h, a, b));
      }
    }
    return roots;
  }

  Kind kind_ = Kind::trig;
  double period_ = 1.0;
  double constant_ = 0.0;
  std::vector<TrigTerm> terms_;
  std::vector<Node> nodes_;
  std::vector<Segment> segments_;
  std::vector<double> jumps_;
  double period_integral_ = 0.0;
};

}  // namespace wnlo

#endif
