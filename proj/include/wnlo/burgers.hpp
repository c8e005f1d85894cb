#ifndef WNLO_BURGERS_HPP
#define WNLO_BURGERS_HPP

#include <algorithm>
#include <cmath>

#include "wnlo/error.hpp"
#include "wnlo/grid.hpp"

namespace wnlo {

enum class Side { left, right };

inline Side flip(Side s) { return s == Side::left ? Side::right : Side::left; }

/// Riemann fan of σ_t ± (α/2)(σ²)_x = 0; family 1 takes +, family 3 takes -.
struct RiemannFan {
  enum class Structure { constant, shock, rarefaction };
  int family = 1;
  double ul = 0.0, ur = 0.0, alpha = 1.0;
  Structure structure = Structure::constant;
  double s = 0.0;              // shock speed
  double sl = 0.0, sr = 0.0;   // rarefaction edge speeds, sl <= sr
};

inline RiemannFan make_fan(int family, double ul, double ur, double alpha) {
  if (family != 1 && family != 3) throw Error("family must be 1 or 3");
  RiemannFan f{family, ul, ur, alpha};
  const double sign = family == 1 ? 1.0 : -1.0;
  const bool shock = family == 1 ? ul > ur : ul < ur;
  if (ul == ur) {
    f.structure = RiemannFan::Structure::constant;
    f.s = f.sl = f.sr = sign * alpha * ul;
  } else if (shock) {
    f.structure = RiemannFan::Structure::shock;
    f.s = sign * 0.5 * alpha * (ul + ur);
    f.sl = f.sr = f.s;
  } else {
    f.structure = RiemannFan::Structure::rarefaction;
    f.sl = sign * alpha * ul;
    f.sr = sign * alpha * ur;
  }
  return f;
}

namespace detail {

inline double eval1(double ul, double ur, double alpha, double xi, Side side) {
  if (ul > ur) {
    const double s = 0.5 * alpha * (ul + ur);
    if (xi < s) return ul;
    if (xi > s) return ur;
    return side == Side::right ? ur : ul;
  }
  if (ul == ur) return ul;
  if (xi <= alpha * ul) return ul;
  if (xi >= alpha * ur) return ur;
  return std::clamp(xi / alpha, ul, ur);
}

}  // namespace detail

/// One-sided limit of the self-similar solution at slope ξ, in physical orientation.
inline double riemann_limit(const RiemannFan& f, double xi, Side side) {
  if (f.family == 1) return detail::eval1(f.ul, f.ur, f.alpha, xi, side);
  return detail::eval1(f.ur, f.ul, f.alpha, -xi, flip(side));
}

/// Entropy solution at slope ξ. On a family-1 shock line this is the up-right limit;
/// family 3 is the family-1 rule applied to the reflected data at -ξ.
inline double riemann_eval(const RiemannFan& f, double xi) {
  if (f.family == 1) return detail::eval1(f.ul, f.ur, f.alpha, xi, Side::right);
  return detail::eval1(f.ur, f.ul, f.alpha, -xi, Side::right);
}

inline double max_wave_speed(const SolutionState& s, double alpha) {
  return alpha * std::max(sup_norm(s.sigma1), sup_norm(s.sigma3));
}

}  // namespace wnlo

#endif
