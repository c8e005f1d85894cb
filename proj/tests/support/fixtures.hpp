#ifndef WNLO_TEST_FIXTURES_HPP
#define WNLO_TEST_FIXTURES_HPP

#include <algorithm>
#include <random>
#include <vector>

#include "wnlo/periodic_function.hpp"
#include "wnlo/scheme.hpp"

namespace wnlo::testing {

/// Random zero-mean BV function of period 1: piecewise linear with a few jumps.
inline PeriodicFunction random_bv(std::mt19937_64& rng, int pieces = 6, double amp = 1.0) {
  std::uniform_real_distribution<double> ux(0.0, 1.0), uv(-amp, amp);
  std::bernoulli_distribution jump(0.4);
  std::vector<double> xs(static_cast<std::size_t>(pieces));
  for (auto& x : xs) x = ux(rng);
  std::sort(xs.begin(), xs.end());
  std::vector<Node> nodes;
  for (double x : xs) {
    nodes.push_back({x, uv(rng)});
    if (jump(rng)) nodes.push_back({x, uv(rng)});
  }
  const auto f = PeriodicFunction::piecewise_linear(1.0, nodes);
  return f.shifted(-f.mean());
}

/// Sawtooth x - 1/2 on [0, 1): a single stationary shock at x = 0.
inline PeriodicFunction sawtooth(double amp = 1.0) {
  return PeriodicFunction::piecewise_linear(1.0, {{0.0, -0.5 * amp}, {1.0, 0.5 * amp}});
}

/// Step -a on [0, 1/2), +a on [1/2, 1): a rarefaction at 1/2 and a shock at 0.
inline PeriodicFunction step_up(double a = 0.5) {
  return PeriodicFunction::piecewise_linear(1.0, {{0.0, -a}, {0.5, -a}, {0.5, a}, {1.0, a}});
}

inline PeriodicFunction sine(double amp = 0.5, int k = 1) { return PeriodicFunction::trig(1.0, 0.0, {{k, 0.0, amp}}); }

inline PeriodicFunction zero_fn() { return PeriodicFunction::trig(1.0, 0.0, {}); }

/// σ2 = ε cos(4πx), E = 4ε.
inline EntropyWaveSpec cos_wave(double eps) { return EntropyWaveSpec::trig({{1, eps, 0.0}}); }

}  // namespace wnlo::testing

#endif
