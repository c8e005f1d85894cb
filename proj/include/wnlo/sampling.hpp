#ifndef WNLO_SAMPLING_HPP
#define WNLO_SAMPLING_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "wnlo/error.hpp"

namespace wnlo {

enum class SamplingKind { seeded_uniform, van_der_corput, explicit_list };

inline std::string to_string(SamplingKind k) {
  switch (k) {
    case SamplingKind::seeded_uniform: return "seeded_uniform";
    case SamplingKind::van_der_corput: return "van_der_corput";
    case SamplingKind::explicit_list: return "explicit";
  }
  return "?";
}

/// SplitMix64 output number i + 1 for a given seed (counter form).
inline std::uint64_t splitmix64(std::uint64_t seed, std::uint64_t i) {
  std::uint64_t z = seed + (i + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline double unit_from_bits(std::uint64_t x) { return static_cast<double>(x >> 11) * 0x1.0p-53; }

/// Base-2 radical inverse of i, in [0, 1).
inline double radical_inverse2(std::uint64_t i) {
  std::uint64_t r = 0;
  for (int b = 0; b < 64; ++b) {
    r = (r << 1) | (i & 1U);
    i >>= 1;
  }
  return static_cast<double>(r >> 11) * 0x1.0p-53;
}

/// θ_n as a pure function of (kind, seed, n).
/// van_der_corput: θ_n = 2·frac(φ2(n+1) + u(seed)) - 1 with u(0) = 0 (plain sequence).
/// seeded_uniform: θ_n = 2·u_n - 1 with u_n the n-th SplitMix64 output mapped to [0,1).
struct SamplingSequence {
  SamplingKind kind = SamplingKind::van_der_corput;
  std::uint64_t seed = 0;
  std::vector<double> values;

  static SamplingSequence van_der_corput(std::uint64_t seed = 0) {
    return {SamplingKind::van_der_corput, seed, {}};
  }
  static SamplingSequence seeded_uniform(std::uint64_t seed) {
    return {SamplingKind::seeded_uniform, seed, {}};
  }
  static SamplingSequence explicit_list(std::vector<double> v) {
    for (double x : v)
      if (!(x >= -1.0 && x < 1.0)) throw ConfigError("explicit sampling values must lie in [-1, 1)");
    return {SamplingKind::explicit_list, 0, std::move(v)};
  }

  double theta(std::uint64_t n) const {
    switch (kind) {
      case SamplingKind::van_der_corput: {
        double u = radical_inverse2(n + 1);
        if (seed != 0) {
          u += unit_from_bits(splitmix64(seed, 0));
          if (u >= 1.0) u -= 1.0;
        }
        return 2.0 * u - 1.0;
      }
      case SamplingKind::seeded_uniform:
        return 2.0 * unit_from_bits(splitmix64(seed, n)) - 1.0;
      case SamplingKind::explicit_list:
        if (n >= values.size())
          throw SequenceExhausted("explicit sampling list exhausted at index " + std::to_string(n));
        return values[n];
    }
    return 0.0;
  }

  bool operator==(const SamplingSequence&) const = default;
};

inline double theta(const SamplingSequence& s, std::uint64_t n) { return s.theta(n); }

/// Star discrepancy of the first M samples mapped to [0,1).
inline double equidistribution_gap(const SamplingSequence& s, std::size_t M) {
  if (M == 0) throw Error("equidistribution_gap needs at least one sample");
  std::vector<double> u(M);
  for (std::size_t i = 0; i < M; ++i) u[i] = 0.5 * (s.theta(i) + 1.0);
  std::sort(u.begin(), u.end());
  double d = 0.0;
  const double m = static_cast<double>(M);
  for (std::size_t i = 0; i < M; ++i) {
    d = std::max(d, static_cast<double>(i + 1) / m - u[i]);
    d = std::max(d, u[i] - static_cast<double>(i) / m);
  }
  return d;
}

}  // namespace wnlo

#endif
