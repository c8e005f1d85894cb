#ifndef WNLO_WAVE_LEDGER_HPP
#define WNLO_WAVE_LEDGER_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "wnlo/burgers.hpp"
#include "wnlo/error.hpp"
#include "wnlo/grid.hpp"
#include "wnlo/scheme.hpp"

namespace wnlo {

/// Wave data of one family in one diamond, in that family's own sign convention
/// (positive strength = rarefaction).
struct FamilyData {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double C = 0.0;      // ½(|α| + |β| - |α + β|)
  double Delta = 0.0;  // |source difference|·Δt
  double Q = 0.0;      // max(0, -α)·max(0, -β)
};

struct DiamondRecord {
  long m = 0;
  long n = 0;
  FamilyData f1, f3;
  const FamilyData& family(int i) const { return i == 1 ? f1 : f3; }
};

inline double cancellation(double a, double b) { return 0.5 * (std::abs(a) + std::abs(b) - std::abs(a + b)); }

/// A retained run seen as a family-1 problem. Family 3 is mapped through x -> -x:
/// σ'(n, m) = σ3(n, -m), ĥ'(n, m) = ĥ3(n, -m), g'(n, m) = g3(n, -m), θ'_n = -θ_n.
class LedgerView {
 public:
  LedgerView(const RunRecord& r, int family) : rec_(&r), family_(family) {
    if (family != 1 && family != 3) throw Error("family must be 1 or 3");
    if (!r.retained()) throw MissingDataError("ledger needs a run with retained levels");
  }

  int family() const { return family_; }
  const RunRecord& record() const { return *rec_; }
  const GridSpec& grid() const { return rec_->config.grid; }
  long last_level() const { return static_cast<long>(rec_->levels.size()) - 1; }
  double dx() const { return grid().dx; }
  double dt() const { return grid().dt; }
  double coef() const { return grid().alpha; }
  long period() const { return grid().nodes(); }

  /// Level-n state at the cell centered at m (m + n odd).
  double sigma(long n, long m) const { return prof(lv(n).s1, lv(n).s3).at_center(map(m)); }
  double hat(long n, long m) const { return prof(lv(n).h1, lv(n).h3).at_center(map(m)); }
  double g(long n, long m) const {
    const auto& p = prof(lv(n).s1, lv(n).s3);
    const auto& v = family_ == 1 ? lv(n).g1 : lv(n).g3;
    return v[static_cast<std::size_t>(p.cell_of_center(map(m)))];
  }
  double theta(long n) const {
    const double t = rec_->thetas[static_cast<std::size_t>(n)];
    return family_ == 1 ? t : -t;
  }
  /// View coordinate <-> physical coordinate (an involution).
  double physical_x(double x) const { return family_ == 1 ? x : -x; }
  long physical_m(long m) const { return family_ == 1 ? m : -m; }

  /// Diamond (m, n) of the view, m + n even, 1 <= n <= last level.
  FamilyData diamond(long m, long n) const {
    check_diamond(m, n);
    FamilyData d;
    const double mid = sigma(n - 1, m);
    d.alpha = mid - hat(n, m - 1);
    d.beta = hat(n, m + 1) - mid;
    d.gamma = sigma(n, m + 1) - sigma(n, m - 1);
    d.C = cancellation(d.alpha, d.beta);
    d.Delta = std::abs(g(n, m + 1) - g(n, m - 1)) * dt();
    d.Q = std::max(0.0, -d.alpha) * std::max(0.0, -d.beta);
    return d;
  }

  /// |γ - (α + β - (g_{m+1} - g_{m-1})Δt)|.
  double identity_error(long m, long n) const {
    const auto d = diamond(m, n);
    return std::abs(d.gamma - (d.alpha + d.beta - (g(n, m + 1) - g(n, m - 1)) * dt()));
  }

  void check_diamond(long m, long n) const {
    if (n < 1 || n > last_level()) throw GeometryError("diamond level out of range: " + std::to_string(n));
    if (((m + n) % 2 + 2) % 2 != 0) throw GeometryError("diamond index m + n must be even");
  }

 private:
  const LevelRecord& lv(long n) const {
    if (n < 0 || n > last_level()) throw GeometryError("level out of range: " + std::to_string(n));
    return rec_->levels[static_cast<std::size_t>(n)];
  }
  const PeriodicProfile& prof(const PeriodicProfile& a, const PeriodicProfile& b) const {
    return family_ == 1 ? a : b;
  }
  long map(long m) const { return family_ == 1 ? m : -m; }

  const RunRecord* rec_;
  int family_;
};

/// Every diamond of a retained run, level by level; m runs over [0, 2^N) with m + n even.
inline std::vector<DiamondRecord> build_diamonds(const RunRecord& r) {
  const LedgerView v1(r, 1), v3(r, 3);
  std::vector<DiamondRecord> out;
  const long P = v1.period();
  out.reserve(static_cast<std::size_t>(v1.last_level() * P / 2));
  for (long n = 1; n <= v1.last_level(); ++n)
    for (long m = n % 2; m < P; m += 2) {
      DiamondRecord d{m, n, v1.diamond(m, n), {}};
      const auto r3 = v3.diamond(-m, n);
      d.f3 = {r3.beta, r3.alpha, r3.gamma, r3.C, r3.Delta, r3.Q};
      out.push_back(d);
    }
  return out;
}

/// Σ_m Δ_i over each level and the bound βEΔt·TV(σ_j at nΔt-) (j the other family).
struct LevelDeltaRow {
  long n = 0;
  double sum = 0.0;
  double bound = 0.0;
};

inline std::vector<LevelDeltaRow> level_delta_sums(const RunRecord& r, int family) {
  const LedgerView v(r, family);
  const double bE = r.config.grid.beta * r.config.kernel.E;
  std::vector<LevelDeltaRow> rows;
  for (long n = 1; n <= v.last_level(); ++n) {
    LevelDeltaRow row{n, 0.0, 0.0};
    for (long m = n % 2; m < v.period(); m += 2) row.sum += v.diamond(m, n).Delta;
    const auto& prev = r.levels[static_cast<std::size_t>(n - 1)];
    row.bound = bE * v.dt() * total_variation(family == 1 ? prev.s3 : prev.s1);
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Half-diamond ledgers and the continuation tables.

enum class HalfSide { left, right };

struct HalfDiamondLedger {
  HalfSide side = HalfSide::left;
  double E_plus = 0.0;
  double E_minus = 0.0;
  double L_plus = 0.0;
  double S = 0.0;
  double C_plus = 0.0;
  double C_minus = 0.0;
  double delta = 0.0;
};

struct ContinuationCase {
  std::string label;
  HalfDiamondLedger left{HalfSide::left}, right{HalfSide::right};
  bool follows_shock = false;
  double s = 0.0;                   // leaving rarefaction strength left of the continuation
  double listed_delta_right = 0.0;  // right-half Δ as tabulated, before the complement rule
  bool listed_mismatch = false;     // tabulated value differs from Δ(◇) - Δ(left)
};

/// Continuation for a characteristic entering through the α edge, α = αL + αR split by the
/// entry point (ignored when α <= 0). Ties go to the first listed case: α <= 0 counts as
/// a shock entry, β <= 0 as an entering shock, γ <= 0 as a leaving shock.
inline ContinuationCase continuation_via_alpha(double a, double b, double gamma, double aL, double aR, double D,
                                               double tol = 1e-12) {
  ContinuationCase r;
  auto& L = r.left;
  auto& R = r.right;
  const double C = cancellation(a, b);
  const double ab = std::abs(b);
  double listed = D;
  if (gamma <= 0.0) {
    r.follows_shock = true;
    if (a <= 0.0 && b <= 0.0) {
      r.label = "I";
      R.E_minus = b;
      R.S = gamma - a;
      listed = D;
    } else if (a <= 0.0) {
      r.label = "II";
      R.E_plus = b;
      R.C_plus = C;
      R.S = std::min(0.0, gamma - a);
      listed = D;
    } else if (b <= 0.0) {
      L.E_plus = aL;
      R.E_plus = aR;
      R.E_minus = b;
      R.S = gamma;
      if (-b > a) {
        r.label = "III.I";
        L.C_plus = aL;
        L.delta = 0.0;
        R.C_plus = aR;
        R.C_minus = a;
        listed = D;
      } else if (-b > aR) {
        r.label = "III.II";
        L.C_plus = -b - aR;
        L.delta = a + b;
        R.C_plus = aR;
        R.C_minus = -b;
        listed = -gamma;
      } else {
        r.label = "III.III";
        L.delta = aL;
        R.C_plus = -b;
        R.C_minus = -b;
        listed = -gamma + aR - b;
      }
    } else {
      r.label = "IV";
      L.E_plus = aL;
      L.delta = aL;
      R.E_plus = aR + b;
      R.S = gamma;
      listed = -gamma + aR + b;
    }
  } else if (a <= 0.0 && b <= 0.0) {
    r.label = "V";
    R.E_minus = b;
    R.L_plus = gamma;
    r.s = 0.0;
    listed = gamma + ab;
  } else if (a <= 0.0) {
    r.label = "VI";
    R.E_plus = b;
    R.L_plus = gamma;
    R.C_plus = C;
    r.s = 0.0;
    listed = D;
  } else if (b <= 0.0) {
    L.E_plus = aL;
    R.E_plus = aR;
    R.E_minus = b;
    if (ab > a) {
      r.label = "VII.I";
      L.C_plus = aL;
      R.L_plus = gamma;
      R.C_plus = aR;
      R.C_minus = a;
      r.s = 0.0;
      listed = D;
    } else if (ab > aR) {
      r.label = "VII.II";
      L.L_plus = std::min(gamma, a - ab);
      L.C_plus = ab - aR;
      L.delta = std::max(0.0, a - ab - gamma);
      R.L_plus = std::max(gamma - a + ab, 0.0);
      R.C_plus = aR;
      R.C_minus = ab;
      r.s = std::min(gamma, a - ab);
      listed = std::max(0.0, gamma - a + ab);
    } else {
      r.label = "VII.III";
      L.L_plus = std::min(gamma, aL);
      L.delta = std::max(0.0, aL - gamma);
      R.L_plus = std::max(gamma - aL, 0.0);
      R.C_plus = ab;
      R.C_minus = ab;
      r.s = std::min(gamma, aL);
      listed = D - L.delta;
    }
  } else {
    L.E_plus = aL;
    R.E_plus = aR + b;
    if (gamma > aL + (aL / a) * b) {
      r.label = "VIII.I";
      L.L_plus = aL;
      L.delta = 0.0;
      R.L_plus = gamma - aL;
      r.s = aL;
      listed = D;
    } else {
      r.label = "VIII.II";
      L.L_plus = a / (a + b) * gamma;
      L.delta = aL - L.L_plus;
      R.L_plus = b / (a + b) * gamma;
      r.s = L.L_plus;
      listed = aR + b - R.L_plus;
    }
  }
  R.delta = D - L.delta;
  r.listed_delta_right = listed;
  r.listed_mismatch = std::abs(listed - R.delta) > tol * std::max(1.0, D);
  return r;
}

/// Entry through the β edge (β = βL + βR): the α-table applied to the mirrored diamond.
inline ContinuationCase continuation_via_beta(double a, double b, double gamma, double bL, double bR, double D,
                                              double tol = 1e-12) {
  auto m = continuation_via_alpha(b, a, gamma, bR, bL, D, tol);
  ContinuationCase r = m;
  r.label = m.label + "'";
  r.left = m.right;
  r.right = m.left;
  r.left.side = HalfSide::left;
  r.right.side = HalfSide::right;
  r.s = m.follows_shock ? 0.0 : gamma - m.s;
  return r;
}

/// Names of the violated half-diamond laws (empty when all hold).
inline std::vector<std::string> half_ledger_violations(const ContinuationCase& c, double a, double b, double D,
                                                       double tol = 1e-12) {
  std::vector<std::string> bad;
  const double C = cancellation(a, b);
  const double eps = tol * std::max({1.0, std::abs(a), std::abs(b), D});
  for (const auto* h : {&c.left, &c.right}) {
    const std::string side = h->side == HalfSide::left ? "L" : "R";
    if (std::abs(h->L_plus - h->E_plus + h->C_plus) > h->delta + eps) bad.push_back("star1_" + side);
    if (std::abs(h->S - h->E_minus - h->C_minus) > h->delta + eps) bad.push_back("star2_" + side);
    if (h->C_plus > h->E_plus + h->delta + eps) bad.push_back("c_bound_" + side);
    if (h->delta < -eps || h->C_plus < -eps || h->C_minus < -eps) bad.push_back("sign_" + side);
  }
  if (std::abs(c.left.C_plus + c.right.C_plus - C) > eps) bad.push_back("starstar1");
  if (c.left.C_minus + c.right.C_minus > C + eps) bad.push_back("starstar2");
  if (std::abs(c.left.delta + c.right.delta - D) > eps) bad.push_back("starstar3");
  return bad;
}

// ---------------------------------------------------------------------------
// Approximate characteristics.

/// Segment leaving the fan at view position p on level n with speed v.
struct Segment {
  long p = 0;
  long n = 0;
  double v = 0.0;
  double strength = 0.0;  // |shock strength| when following a shock, 0 otherwise
};

struct CrossedDiamond {
  long m = 0;  // physical index
  long n = 0;
  bool via_alpha = true;
  FamilyData data;  // view-frame data
  ContinuationCase ledger;
};

struct Continuation {
  Segment next;
  CrossedDiamond crossed;
  double x_end = 0.0;  // view position of the incoming segment at the next level
};

inline Segment start_segment(const LedgerView& v, long m, long n, double fraction = 0.0) {
  if (n < 0 || n > v.last_level()) throw GeometryError("start level out of range");
  if (((m + n) % 2 + 2) % 2 != 0) throw GeometryError("start point must satisfy m + n even");
  const double ul = v.sigma(n, m - 1), ur = v.sigma(n, m + 1);
  const double gam = ur - ul;
  if (gam <= 0.0) return {m, n, 0.5 * v.coef() * (ul + ur), -gam};
  return {m, n, v.coef() * (ul + std::clamp(fraction, 0.0, 1.0) * gam), 0.0};
}

/// One continuation through the diamond containing the end of `in`.
inline Continuation continue_characteristic(const LedgerView& v, const Segment& in) {
  const long n = in.n + 1;
  if (n > v.last_level()) throw GeometryError("segment ends beyond the last level");
  const double dx = v.dx();
  const double x0 = static_cast<double>(in.p) * dx;
  const double xe = x0 + in.v * v.dt();
  if (!(std::abs(xe - x0) < dx)) throw GeometryError("segment leaves its fan: speed exceeds the CFL speed");
  const double sample = (static_cast<double>(in.p) + v.theta(n)) * dx;
  const bool via_alpha = xe > sample;
  const long m = via_alpha ? in.p + 1 : in.p - 1;
  const FamilyData d = v.diamond(m, n);
  const double D = std::abs(d.gamma - d.alpha - d.beta);
  const double u = in.v / v.coef();
  ContinuationCase c;
  if (via_alpha) {
    const double aL = d.alpha > 0.0 ? std::clamp(u - v.hat(n, m - 1), 0.0, d.alpha) : 0.0;
    c = continuation_via_alpha(d.alpha, d.beta, d.gamma, aL, d.alpha > 0.0 ? d.alpha - aL : 0.0, D);
  } else {
    const double bL = d.beta > 0.0 ? std::clamp(u - v.sigma(n - 1, m), 0.0, d.beta) : 0.0;
    c = continuation_via_beta(d.alpha, d.beta, d.gamma, bL, d.beta > 0.0 ? d.beta - bL : 0.0, D);
  }
  const double ul = v.sigma(n, m - 1), ur = v.sigma(n, m + 1);
  Segment next{m, n, 0.0, 0.0};
  if (c.follows_shock) {
    next.v = 0.5 * v.coef() * (ul + ur);
    next.strength = std::abs(d.gamma);
  } else {
    next.v = v.coef() * (ul + c.s);
  }
  return {next, {v.physical_m(m), n, via_alpha, d, std::move(c)}, xe};
}

struct PathVertex {
  long n = 0;
  long m = 0;          // physical diamond-center index
  double t = 0.0;
  double x = 0.0;      // physical start of the segment leaving this level
  double x_end = 0.0;  // physical position reached by the previous segment at nΔt
  double speed = 0.0;  // physical speed of the leaving segment
  double strength = 0.0;
};

struct CharacteristicPath {
  int family = 1;
  std::vector<PathVertex> vertices;
  std::vector<CrossedDiamond> crossings;
};

inline CharacteristicPath trace_characteristic(const LedgerView& v, long m_phys, long n0, double fraction = 0.0,
                                               long n_end = -1) {
  if (n_end < 0 || n_end > v.last_level()) n_end = v.last_level();
  CharacteristicPath path;
  path.family = v.family();
  Segment s = start_segment(v, v.physical_m(m_phys), n0, fraction);
  const double sign = v.family() == 1 ? 1.0 : -1.0;
  auto vertex = [&](const Segment& seg, double xe_view) {
    return PathVertex{seg.n, v.physical_m(seg.p), static_cast<double>(seg.n) * v.dt(),
                      v.physical_x(static_cast<double>(seg.p) * v.dx()), v.physical_x(xe_view), sign * seg.v,
                      seg.strength};
  };
  path.vertices.push_back(vertex(s, static_cast<double>(s.p) * v.dx()));
  for (long n = n0 + 1; n <= n_end; ++n) {
    auto c = continue_characteristic(v, s);
    path.vertices.push_back(vertex(c.next, c.x_end));
    path.crossings.push_back(std::move(c.crossed));
    s = c.next;
  }
  return path;
}

inline CharacteristicPath trace_characteristic(const RunRecord& r, int family, long m, long n0, double fraction = 0.0) {
  return trace_characteristic(LedgerView(r, family), m, n0, fraction);
}

/// Largest excess of |χ(t1) - χ(t2)| over Λ|t1 - t2| + slack·Δx along the path (<= 0 when the
/// bound holds). With `one_sided` the segment ends χ(nΔt-) are included next to the centers χ(nΔt+).
inline double lipschitz_excess(const CharacteristicPath& p, const GridSpec& g, double slack = 1.0,
                               bool one_sided = true) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& q : p.vertices) {
    if (one_sided) pts.emplace_back(q.t, q.x_end);
    pts.emplace_back(q.t, q.x);
  }
  double worst = -1e300;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      worst = std::max(worst, std::abs(pts[j].second - pts[i].second) -
                                  (g.lambda * std::abs(pts[j].first - pts[i].first) + slack * g.dx));
  return worst;
}

struct CrossingViolation {
  std::size_t a = 0;
  std::size_t b = 0;
  long n = 0;
  long m_a = 0;
  long m_b = 0;
};

/// Strict order reversals between same-family paths, comparing positions at every common
/// level (segment end and continuation start) for all periodic images within one period.
inline std::vector<CrossingViolation> crossing_check(const std::vector<CharacteristicPath>& paths,
                                                     double tol = 1e-12) {
  std::vector<CrossingViolation> out;
  for (std::size_t a = 0; a < paths.size(); ++a)
    for (std::size_t b = a + 1; b < paths.size(); ++b) {
      const auto& A = paths[a].vertices;
      const auto& B = paths[b].vertices;
      if (A.empty() || B.empty()) continue;
      if (paths[a].family != paths[b].family) throw Error("crossing_check: paths of different families");
      const long n_lo = std::max(A.front().n, B.front().n), n_hi = std::min(A.back().n, B.back().n);
      for (double shift : {-1.0, 0.0, 1.0}) {
        int last = 0;
        for (long n = n_lo; n <= n_hi; ++n) {
          const auto& va = A[static_cast<std::size_t>(n - A.front().n)];
          const auto& vb = B[static_cast<std::size_t>(n - B.front().n)];
          bool crossed = false;
          const bool first = n == n_lo;
          for (double d : {first ? va.x - vb.x - shift : va.x_end - vb.x_end - shift, va.x - vb.x - shift}) {
            const int sg = d > tol ? 1 : (d < -tol ? -1 : 0);
            if (sg != 0 && last != 0 && sg != last) crossed = true;
            if (sg != 0) last = sg;
          }
          if (crossed) {
            out.push_back({a, b, n, va.m, vb.m});
            break;
          }
        }
      }
    }
  return out;
}

// ---------------------------------------------------------------------------
// Regions, signed strengths, widening.

struct DiamondIndex {
  long m = 0;
  long n = 0;
};

struct RegionLedger {
  std::size_t diamonds = 0;
  double E_plus = 0.0, E_minus = 0.0;
  double L_plus = 0.0, L_minus = 0.0;
  double C = 0.0, Delta = 0.0;
  double X_plus = 0.0, X_minus = 0.0;  // entering strength through the region's bottom
};

/// Determinacy domain of the mesh interval [m_a, m_b] at level n0 over `levels` levels.
inline std::vector<DiamondIndex> determinacy_domain(long m_a, long m_b, long n0, long levels) {
  if (((m_a + n0) % 2 + 2) % 2 != 0 || ((m_b + n0) % 2 + 2) % 2 != 0)
    throw GeometryError("determinacy domain endpoints must satisfy m + n0 even");
  if (m_b < m_a) throw GeometryError("determinacy domain needs m_a <= m_b");
  std::vector<DiamondIndex> out;
  for (long k = 0; k < levels; ++k)
    for (long m = m_a + k; m <= m_b - k; m += 2) out.push_back({m, n0 + k});
  return out;
}

/// Aggregated ledger of a union of whole diamonds (physical indices) for one family.
/// Waves entering through α/β edges from outside count as entering, γ parts leaving to
/// diamonds outside (or past the last level) count as leaving.
inline RegionLedger region_ledger(const RunRecord& r, int family, const std::vector<DiamondIndex>& region) {
  const LedgerView v(r, family);
  const long P = v.period();
  auto key = [&](long m, long n) { return static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(P) +
                                          static_cast<std::uint64_t>(wrap(m, P)); };
  std::unordered_set<std::uint64_t> set;
  for (const auto& d : region) {
    v.check_diamond(d.m, d.n);
    if (!set.insert(key(d.m, d.n)).second) throw GeometryError("region lists a diamond twice");
  }
  auto in = [&](long m, long n) { return n >= 1 && n <= v.last_level() && set.count(key(m, n)) > 0; };
  RegionLedger out;
  out.diamonds = region.size();
  auto add = [](double x, double& pos, double& neg) { (x > 0.0 ? pos : neg) += x; };
  for (const auto& d : region) {
    const long m = v.physical_m(d.m), n = d.n;
    const auto f = v.diamond(m, n);
    out.C += f.C;
    out.Delta += f.Delta;
    const long mm = v.physical_m(m - 1), mp = v.physical_m(m + 1);
    if (!in(mm, n - 1)) add(f.alpha, out.E_plus, out.E_minus);
    if (!in(mp, n - 1)) add(f.beta, out.E_plus, out.E_minus);
    if (n == v.last_level()) {
      add(f.gamma, out.L_plus, out.L_minus);
    } else {
      if (!in(mm, n + 1)) add(v.diamond(m - 1, n + 1).beta, out.L_plus, out.L_minus);
      if (!in(mp, n + 1)) add(v.diamond(m + 1, n + 1).alpha, out.L_plus, out.L_minus);
    }
  }
  out.X_plus = out.E_plus;
  out.X_minus = out.E_minus;
  return out;
}

inline std::vector<std::string> region_violations(const RegionLedger& l, double tol = 1e-10) {
  std::vector<std::string> bad;
  if (std::abs(l.L_plus - l.E_plus + l.C) > l.Delta + tol) bad.push_back("L_plus");
  if (std::abs(l.L_minus - l.E_minus - l.C) > l.Delta + tol) bad.push_back("L_minus");
  if (l.C > l.X_plus + l.Delta + tol) bad.push_back("C_bound");
  return bad;
}

struct SignedStrength {
  double plus = 0.0;
  double minus = 0.0;
};

/// Positive and negative variation over [xl, xr] (view coordinates) of the fan composite
/// at nΔt- built on level n-1, with right limits at both ends.
inline SignedStrength x1_signed_view(const LedgerView& v, long n, double xl, double xr) {
  if (n < 1 || n > v.last_level()) throw GeometryError("x1_signed: level out of range");
  SignedStrength out;
  if (!(xr > xl)) return out;
  const double dx = v.dx(), dt = v.dt(), a = v.coef();
  const long par = (n - 1) % 2;  // fans of level n-1 sit at p with p + n - 1 even
  long p = static_cast<long>(std::floor(xl / dx)) - 2;
  if (((p + par) % 2 + 2) % 2 != 0) ++p;
  for (; static_cast<double>(p - 1) * dx < xr; p += 2) {
    const double lo = std::max(xl, static_cast<double>(p - 1) * dx);
    const double hi = std::min(xr, static_cast<double>(p + 1) * dx);
    if (!(hi > lo)) continue;
    const double ul = v.sigma(n - 1, p - 1), ur = v.sigma(n - 1, p + 1);
    auto f = [&](double x) { return detail::eval1(ul, ur, a, (x - static_cast<double>(p) * dx) / dt, Side::right); };
    const double fb = hi >= static_cast<double>(p + 1) * dx ? ur : f(hi);
    const double d = fb - f(lo);
    (d > 0.0 ? out.plus : out.minus) += d;
  }
  return out;
}

/// Same, for the piecewise-constant level-n state (time nΔt+): jumps at interfaces in (xl, xr].
inline SignedStrength x1_signed_state_view(const LedgerView& v, long n, double xl, double xr) {
  SignedStrength out;
  const double dx = v.dx();
  long p = static_cast<long>(std::floor(xl / dx)) - 2;
  if (((p + n) % 2 + 2) % 2 != 0) ++p;
  for (; static_cast<double>(p) * dx <= xr; p += 2) {
    const double x = static_cast<double>(p) * dx;
    if (!(x > xl)) continue;
    const double d = v.sigma(n, p + 1) - v.sigma(n, p - 1);
    (d > 0.0 ? out.plus : out.minus) += d;
  }
  return out;
}

/// X_i^± over the physical interval [xl, xr] at time nΔt-.
inline SignedStrength x1_signed(const RunRecord& r, int family, long n, double xl, double xr) {
  const LedgerView v(r, family);
  if (family == 1) return x1_signed_view(v, n, xl, xr);
  return x1_signed_view(v, n, -xr, -xl);
}

struct DecayRow {
  std::size_t pair = 0;
  long n = 0;
  double t = 0.0;
  double D = 0.0;
  double X_plus = 0.0;
  double X_minus_T0 = 0.0;
  double delta_sum = 0.0;
  double slack = 0.0;
  double rhs = 0.0;
  double tv = 0.0;
  bool active = false;
  bool holds = true;
};

struct DecayReport {
  double T0 = 0.0;
  double Tstar = 0.0;
  double M_B = 0.0;
  long n0 = 0;
  long n_end = 0;
  std::vector<CharacteristicPath> paths;
  std::vector<DecayRow> rows;
  std::vector<std::string> notes;
  std::size_t violations = 0;
};

/// Widening bound X1+(I(t)) <= D/(α(t-T0)) - X1-(I(T0)) + Δ1(between paths) + |I(T0)|·M_B/400
/// for consecutive family-1 characteristics started at the given physical mesh indices.
inline DecayReport decay_report(const RunRecord& r, double T0, double Tstar, double M_B, std::vector<long> starts,
                                long row_stride = 1) {
  const LedgerView v(r, 1);
  DecayReport rep;
  rep.T0 = T0;
  rep.Tstar = Tstar;
  rep.M_B = M_B;
  rep.n0 = static_cast<long>(std::llround(T0 / v.dt()));
  if (rep.n0 > v.last_level()) throw GeometryError("decay_report: T0 beyond the run");
  rep.n_end = std::min(v.last_level(), rep.n0 + static_cast<long>(std::ceil(Tstar / v.dt())));
  if (rep.n_end < rep.n0 + static_cast<long>(std::ceil(Tstar / v.dt())))
    rep.notes.push_back("run ends before T0 + T*; report truncated");
  for (auto& m : starts)
    if (((m + rep.n0) % 2 + 2) % 2 != 0) ++m;
  std::sort(starts.begin(), starts.end());
  starts.erase(std::unique(starts.begin(), starts.end()), starts.end());
  for (long m : starts) rep.paths.push_back(trace_characteristic(v, m, rep.n0, 0.0, rep.n_end));
  const double a = v.coef(), dt = v.dt();
  for (std::size_t i = 0; i + 1 < rep.paths.size(); ++i) {
    const auto& A = rep.paths[i].vertices;
    const auto& B = rep.paths[i + 1].vertices;
    const double xa0 = A.front().x, xb0 = B.front().x;
    const double Xm0 = x1_signed_state_view(v, rep.n0, xa0, xb0).minus;
    const double slack = (xb0 - xa0) * M_B / 400.0;
    double dsum = 0.0;
    for (std::size_t k = 1; k < A.size(); ++k) {
      const long n = A[k].n;
      for (long m = A[k].m; m <= B[k].m; m += 2) dsum += v.diamond(m, n).Delta;
      const double D = B[k].x_end - A[k].x_end;
      if (!(D > 0.0)) {
        rep.notes.push_back("pair " + std::to_string(i) + " coalesced at t = " + std::to_string(A[k].t) + "; skipped");
        break;
      }
      if (static_cast<long>(k) % row_stride != 0 && k + 1 != A.size()) continue;
      DecayRow row;
      row.pair = i;
      row.n = n;
      row.t = static_cast<double>(n) * dt;
      row.D = D;
      row.X_plus = x1_signed_view(v, n, A[k].x_end, B[k].x_end).plus;
      row.X_minus_T0 = Xm0;
      row.delta_sum = dsum;
      row.slack = slack;
      row.rhs = D / (a * (row.t - T0)) - Xm0 + dsum + slack;
      row.tv = total_variation(r.levels[static_cast<std::size_t>(n - 1)].s1);
      row.active = row.rhs < row.tv;
      row.holds = row.X_plus <= row.rhs + 1e-12;
      if (!row.holds) ++rep.violations;
      rep.rows.push_back(row);
    }
  }
  return rep;
}

}  // namespace wnlo

#endif
