#ifndef WNLO_AUDIT_HPP
#define WNLO_AUDIT_HPP

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "wnlo/scheme.hpp"
#include "wnlo/wave_ledger.hpp"

namespace wnlo {

/// Violation counts of the diamond, half-diamond, region and no-crossing laws on one retained run.
struct LedgerAudit {
  std::size_t diamonds = 0;
  double max_identity_error = 0.0;
  std::size_t gamma_violations = 0;  // |γ| <= |α| + |β| + Δ - 2C
  std::size_t c_violations = 0;      // C <= min(|α|, |β|)
  std::size_t level_delta_violations = 0;
  std::size_t paths = 0;
  std::size_t pairs = 0;
  std::size_t half_diamonds = 0;
  std::size_t half_violations = 0;
  std::size_t crossings = 0;
  std::size_t regions = 0;
  std::size_t region_violations = 0;
  std::set<std::string> labels;
  std::vector<CharacteristicPath> family1_paths;

  bool clean() const {
    return max_identity_error <= 1e-12 && gamma_violations == 0 && c_violations == 0 &&
           level_delta_violations == 0 && half_violations == 0 && crossings == 0 && region_violations == 0;
  }
};

/// Start points of `count` characteristics: level-0 fans spread over the period, then later
/// levels once every level-0 fan is used.
inline std::vector<DiamondIndex> characteristic_starts(const RunRecord& r, int count) {
  const long P = r.config.grid.nodes();
  const long per_level = P / 2;
  std::vector<DiamondIndex> out;
  for (int i = 0; i < count; ++i) {
    const long lvl = i / per_level;
    const long k = i % per_level;
    const long slot = (k * 37) % per_level;  // coprime stride spreads consecutive starts
    long m = 2 * slot + (lvl % 2);
    if (lvl >= r.last_level()) break;
    out.push_back({m, lvl});
  }
  return out;
}

inline LedgerAudit ledger_audit(const RunRecord& r, int n_paths, int region_width, int region_levels,
                                double tol = 1e-12) {
  LedgerAudit a;
  const auto ds = build_diamonds(r);
  a.diamonds = ds.size();
  for (int f : {1, 3}) {
    const LedgerView v(r, f);
    for (const auto& d : ds) {
      const auto& x = d.family(f);
      a.max_identity_error = std::max(a.max_identity_error, v.identity_error(v.physical_m(d.m), d.n));
      if (std::abs(x.gamma) > std::abs(x.alpha) + std::abs(x.beta) + x.Delta - 2.0 * x.C + tol) ++a.gamma_violations;
      if (x.C > std::min(std::abs(x.alpha), std::abs(x.beta)) + tol) ++a.c_violations;
    }
    for (const auto& row : level_delta_sums(r, f))
      if (row.sum > row.bound * (1.0 + 1e-12) + 1e-15) ++a.level_delta_violations;

    std::vector<CharacteristicPath> paths;
    const auto starts = characteristic_starts(r, n_paths);
    for (std::size_t i = 0; i < starts.size(); ++i) {
      const double frac = std::fmod(0.6180339887498949 * static_cast<double>(i + 1), 1.0);
      const long m = f == 1 ? starts[i].m : -starts[i].m;
      paths.push_back(trace_characteristic(LedgerView(r, f), m, starts[i].n, frac));
    }
    for (const auto& p : paths)
      for (const auto& c : p.crossings) {
        ++a.half_diamonds;
        a.labels.insert(c.ledger.label);
        const double D = std::abs(c.data.gamma - c.data.alpha - c.data.beta);
        if (!half_ledger_violations(c.ledger, c.data.alpha, c.data.beta, D).empty()) ++a.half_violations;
      }
    a.paths += paths.size();
    a.pairs += paths.size() * (paths.size() - 1) / 2;
    a.crossings += crossing_check(paths).size();
    if (f == 1) a.family1_paths = std::move(paths);

    const long P = v.period();
    for (long n0 = 1; n0 < r.last_level(); n0 += region_levels) {
      const long levels = std::min<long>({region_levels, region_width + 1, r.last_level() - n0 + 1});
      for (long ma = n0 % 2; ma + 2 * region_width < P + (n0 % 2); ma += 2 * region_width) {
        const auto l = region_ledger(r, f, determinacy_domain(ma, ma + 2 * region_width, n0, levels));
        ++a.regions;
        if (!region_violations(l).empty()) ++a.region_violations;
      }
    }
  }
  return a;
}

}  // namespace wnlo

#endif
