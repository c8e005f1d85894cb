#ifndef WNLO_EXPERIMENTS_HPP
#define WNLO_EXPERIMENTS_HPP

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wnlo/audit.hpp"
#include "wnlo/config.hpp"
#include "wnlo/hopf_lax.hpp"
#include "wnlo/io.hpp"
#include "wnlo/scheme.hpp"
#include "wnlo/smooth_blowup.hpp"
#include "wnlo/wave_ledger.hpp"

namespace wnlo {

/// Stable process exit codes.
enum ExitCode : int {
  exit_ok = 0,
  exit_check_failed = 1,
  exit_config = 2,
  exit_cfl = 3,
  exit_nonfinite = 4,
  exit_other = 5,
};

/// Machine-parsable verdicts: one `CHECK <name> PASS|FAIL <detail>` line each.
class Report {
 public:
  void check(const std::string& name, bool pass, const std::string& detail = "") {
    lines_.push_back("CHECK " + name + (pass ? " PASS" : " FAIL") + (detail.empty() ? "" : " " + detail));
    all_ &= pass;
  }
  void note(const std::string& line) { lines_.push_back(line); }
  bool all_pass() const { return all_; }
  std::string text() const {
    std::string s;
    for (const auto& l : lines_) s += l + '\n';
    return s;
  }

 private:
  std::vector<std::string> lines_;
  bool all_ = true;
};

struct CommandOptions {
  std::string config_path;
  std::optional<std::string> out;
  std::vector<int> levels;
  std::optional<int> seeds;
  std::optional<unsigned> threads;
  std::vector<std::string> plots;
};

/// --out, then WNLO_OUTPUT_DIR, then the config's output.dir.
inline std::filesystem::path resolve_output_dir(const ExperimentConfig& c, const CommandOptions& o) {
  if (o.out) return *o.out;
  if (const char* env = std::getenv("WNLO_OUTPUT_DIR"); env && *env) return env;
  return c.output_dir;
}

inline std::string padded(long n, int width = 6) {
  std::string s = std::to_string(n);
  return std::string(static_cast<std::size_t>(std::max(0, width - static_cast<int>(s.size()))), '0') + s;
}

inline SamplingSequence seeded(const SamplingSequence& base, std::uint64_t seed) {
  switch (base.kind) {
    case SamplingKind::van_der_corput:
      return SamplingSequence::van_der_corput(seed);
    case SamplingKind::seeded_uniform:
      return SamplingSequence::seeded_uniform(seed);
    case SamplingKind::explicit_list:
      if (seed == 0) return base;
      throw ConfigError("explicit sampling lists cannot be reseeded");
  }
  return base;
}

inline double median(std::vector<double> v) {
  if (v.empty()) throw Error("median of an empty set");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

/// Growth laws on a diagnostics series: TV and sup bounded by their initial values times exp(βEt).
inline void growth_checks(const RunRecord& rec, Report& rep) {
  const auto& d = rec.diagnostics;
  const double bE = rec.config.grid.beta * rec.config.kernel.E;
  const double tv0 = d.front().tv1 + d.front().tv3, sup0 = d.front().sup1 + d.front().sup3;
  double tv_worst = 0.0, sup_worst = 0.0;
  for (const auto& r : d) {
    const double env = std::exp(bE * r.t) * (1.0 + 1e-10);
    tv_worst = std::max(tv_worst, (r.tv1 + r.tv3) - tv0 * env);
    sup_worst = std::max(sup_worst, (r.sup1 + r.sup3) - sup0 * env);
  }
  rep.check("growth_tv", tv_worst <= 1e-14, "max_excess=" + fmt(tv_worst));
  rep.check("growth_sup", sup_worst <= 1e-14, "max_excess=" + fmt(sup_worst));
  if (rec.config.grid.beta == 0.0) {
    std::size_t ups = 0;
    for (std::size_t i = 1; i < d.size(); ++i) {
      if (d[i].tv1 > d[i - 1].tv1 * (1.0 + 1e-13) + 1e-15) ++ups;
      if (d[i].tv3 > d[i - 1].tv3 * (1.0 + 1e-13) + 1e-15) ++ups;
    }
    rep.check("tv_nonincreasing", ups == 0, "increases=" + std::to_string(ups));
  }
}

inline void cmd_run(const ExperimentConfig& c, ArtifactSet& art, Report& rep) {
  SchemeInputs in = c.scheme;
  in.retain_levels = c.retain_ledger;
  const auto rec = run(in);
  art.add("diagnostics.csv", diagnostics_csv(rec.diagnostics));
  for (const auto& s : rec.snapshots) art.add("snapshot_" + padded(s.n) + ".csv", snapshot_csv(s));
  if (rec.retained()) art.add("ledger.csv", ledger_csv(build_diamonds(rec)));
  rep.note("RUN steps=" + std::to_string(rec.last_level()) + " lambda=" + fmt(rec.config.grid.lambda) +
           " dt=" + fmt(rec.config.grid.dt));
  growth_checks(rec, rep);
}

/// ∫_0^1 |p - q| for two profiles whose cell edges lie on the dyadic grid of `P` points.
inline double profile_l1(const PeriodicProfile& p, const PeriodicProfile& q, long P) {
  double s = 0.0;
  for (long i = 0; i < P; ++i) {
    const double x = (static_cast<double>(i) + 0.5) / static_cast<double>(P);
    s += std::abs(p.value(x) - q.value(x));
  }
  return s / static_cast<double>(P);
}

struct ConvergenceRow {
  int N = 0;
  int seed = 0;
  double t = 0.0;
  double error = 0.0;
};

struct ConvergenceStudy {
  bool oracle = true;
  double t = 0.0;
  std::vector<ConvergenceRow> rows;
  std::vector<std::pair<int, double>> medians;
};

/// L1 errors at a common final time against the Lax–Oleinik oracle (β = 0) or the finest reference run.
inline ConvergenceStudy convergence_study(const SchemeInputs& base, std::vector<int> levels, int seeds,
                                          int reference_N, long oracle_points) {
  if (levels.size() < 2) throw ConfigError("converge needs at least two levels");
  std::sort(levels.begin(), levels.end());
  ConvergenceStudy st;
  st.oracle = base.beta == 0.0;
  const auto probe = make_scheme_config([&] {
    SchemeInputs in = base;
    in.N = levels.front();
    return in;
  }());
  const double dtc = probe.grid.dt;
  st.t = std::ceil(base.t_final / dtc - 1e-9) * dtc;
  std::vector<double> ref1, ref3;
  if (st.oracle) {
    ref1 = HopfLaxOracle(base.init.sigma1, base.alpha, 1).sample(st.t, oracle_points);
    ref3 = HopfLaxOracle(base.init.sigma3, base.alpha, 3).sample(st.t, oracle_points);
  } else if (reference_N <= levels.back()) {
    throw ConfigError("reference level must exceed every studied level");
  }
  for (int s = 0; s < seeds; ++s) {
    SchemeInputs in = base;
    in.t_final = st.t;
    in.lambda = probe.grid.lambda;
    in.sampling = seeded(base.sampling, static_cast<std::uint64_t>(s));
    std::optional<SolutionState> ref;
    if (!st.oracle) {
      in.N = reference_N;
      ref = run(in).snapshots.back();
    }
    for (int N : levels) {
      in.N = N;
      const auto fin = run(in).snapshots.back();
      double e = 0.0;
      if (st.oracle) {
        e = l1_error_against(fin.sigma1, ref1) + l1_error_against(fin.sigma3, ref3);
      } else {
        const long P = 1L << reference_N;
        e = profile_l1(fin.sigma1, ref->sigma1, P) + profile_l1(fin.sigma3, ref->sigma3, P);
      }
      st.rows.push_back({N, s, fin.t, e});
    }
  }
  for (int N : levels) {
    std::vector<double> v;
    for (const auto& r : st.rows)
      if (r.N == N) v.push_back(r.error);
    st.medians.push_back({N, median(v)});
  }
  return st;
}

inline void cmd_converge(const ExperimentConfig& c, const CommandOptions& o, ArtifactSet& art, Report& rep) {
  const auto levels = o.levels.empty() ? c.converge.levels : o.levels;
  const int seeds = o.seeds ? *o.seeds : c.converge.seeds;
  if (seeds < 1) throw ConfigError("seeds must be positive");
  const auto st = convergence_study(c.scheme, levels, seeds, c.converge.reference_N, c.converge.oracle_points);
  CsvWriter w({"N", "seed", "t", "error"});
  for (const auto& r : st.rows) w.row({static_cast<double>(r.N), static_cast<double>(r.seed), r.t, r.error});
  art.add("converge.csv", w.str());
  rep.note(std::string("CONVERGE mode=") + (st.oracle ? "oracle" : "self") + " t=" + fmt(st.t));
  for (const auto& [N, e] : st.medians) rep.note("LEVEL " + std::to_string(N) + " median_error=" + fmt(e));
  if (st.oracle) {
    bool mono = st.medians.size() >= 4;
    for (std::size_t i = 1; i < st.medians.size(); ++i) mono &= st.medians[i].second < st.medians[i - 1].second ||
                                                                 st.medians[i - 1].second == 0.0;
    rep.check("monotone_decrease", mono, "levels=" + std::to_string(st.medians.size()));
    const double tv0 = c.scheme.init.total_variation();
    const double fin = st.medians.back().second;
    rep.check("finest_error_small", fin <= 0.02 * tv0, "error=" + fmt(fin) + " limit=" + fmt(0.02 * tv0));
  } else {
    bool ok = true;
    std::string det;
    for (std::size_t i = 1; i < st.medians.size(); ++i) {
      const double r = st.medians[i - 1].second > 0.0 ? st.medians[i].second / st.medians[i - 1].second : 0.0;
      ok &= r >= 0.25 && r <= 0.75;
      det += (i > 1 ? "," : "ratios=") + fmt(r);
    }
    rep.check("halving", ok, det);
  }
}

inline void cmd_ledger(const ExperimentConfig& c, ArtifactSet& art, Report& rep) {
  SchemeInputs in = c.scheme;
  in.retain_levels = true;
  const auto rec = run(in);
  const auto a = ledger_audit(rec, c.ledger.paths, c.ledger.region_width, c.ledger.region_levels);
  art.add("diagnostics.csv", diagnostics_csv(rec.diagnostics));
  art.add("ledger.csv", ledger_csv(build_diamonds(rec)));
  art.add("paths.csv", paths_csv(a.family1_paths));
  auto count = [](std::size_t bad, std::size_t of) { return "violations=" + std::to_string(bad) + "/" + std::to_string(of); };
  rep.check("diamond_identity", a.max_identity_error <= 1e-12, "max_error=" + fmt(a.max_identity_error));
  rep.check("gamma_bound", a.gamma_violations == 0, count(a.gamma_violations, 2 * a.diamonds));
  rep.check("cancellation_bound", a.c_violations == 0, count(a.c_violations, 2 * a.diamonds));
  rep.check("level_delta_sum", a.level_delta_violations == 0, "violations=" + std::to_string(a.level_delta_violations));
  rep.check("half_diamond_laws", a.half_violations == 0, count(a.half_violations, a.half_diamonds));
  rep.check("region_law", a.region_violations == 0, count(a.region_violations, a.regions));
  rep.check("no_crossing", a.crossings == 0,
            "crossings=" + std::to_string(a.crossings) + " pairs=" + std::to_string(a.pairs));
}

struct DecaySetup {
  double M_B = 0.0;
  double Tstar = 0.0;
  std::vector<long> starts;
};

inline DecaySetup decay_setup(const ExperimentConfig& c, const RunRecord& rec) {
  DecaySetup s;
  s.M_B = c.decay.M_B ? *c.decay.M_B : 1.25 * c.scheme.init.total_variation();
  if (!(s.M_B > 0.0)) throw ConfigError("decay needs M_B > 0");
  s.Tstar = c.decay.Tstar ? *c.decay.Tstar : 60.0 / (c.scheme.alpha * s.M_B);
  const long P = rec.config.grid.nodes();
  for (int i = 0; i < c.decay.paths; ++i) s.starts.push_back(P * i / c.decay.paths);
  return s;
}

inline void cmd_decay(const ExperimentConfig& c, ArtifactSet& art, Report& rep) {
  SchemeInputs in = c.scheme;
  in.retain_levels = true;
  const auto rec = run(in);
  const auto s = decay_setup(c, rec);
  const auto d = decay_report(rec, c.decay.T0, s.Tstar, s.M_B, s.starts, c.decay.row_stride);
  art.add("diagnostics.csv", diagnostics_csv(rec.diagnostics));
  art.add("decay.csv", decay_csv(d));
  art.add("paths.csv", paths_csv(d.paths));
  for (const auto& n : d.notes) rep.note("NOTE " + n);
  rep.check("widening_bound", d.violations == 0,
            "violations=" + std::to_string(d.violations) + "/" + std::to_string(d.rows.size()));
  const auto tv_at = [&](long n) {
    const auto& l = rec.levels[static_cast<std::size_t>(n)];
    return total_variation(l.s1) + total_variation(l.s3);
  };
  const double tv0 = tv_at(d.n0);
  const double lo = 239.0 / 300.0 * s.M_B, hi = 0.8 * s.M_B;
  if (tv0 >= lo && tv0 <= hi) {
    const long need = d.n0 + static_cast<long>(std::ceil(s.Tstar / rec.config.grid.dt));
    if (need <= rec.last_level()) {
      const double tv1 = tv_at(need);
      rep.check("decay_drop", tv1 < lo, "tv_start=" + fmt(tv0) + " tv_end=" + fmt(tv1) + " limit=" + fmt(lo));
    } else {
      rep.check("decay_drop", false, "run ends before T0 + T*");
    }
  } else {
    rep.note("SKIP decay_drop tv_start=" + fmt(tv0) + " outside [" + fmt(lo) + ", " + fmt(hi) + "]");
  }
}

inline BlowupConfig blowup_config(const ExperimentConfig& c) {
  BlowupConfig b;
  b.alpha = c.scheme.alpha;
  b.beta = c.scheme.beta;
  b.sigma2 = c.scheme.sigma2;
  b.init = c.scheme.init;
  b.P = c.blowup.P;
  b.dt = c.blowup.dt;
  b.t_max = c.blowup.t_max;
  b.record_stride = c.blowup.record_stride;
  b.threads = c.scheme.threads;
  return b;
}

inline void cmd_blowup(const ExperimentConfig& c, ArtifactSet& art, Report& rep) {
  const auto r = detect_blowup(blowup_config(c));
  const auto& k = r.certificate;
  art.add("blowup.csv", blowup_csv(r));
  rep.note("CERTIFICATE " + k.status);
  rep.note("BLOWUP M_I=" + fmt(k.M_I) + " Etilde=" + fmt(k.Etilde) + " threshold=" + fmt(k.threshold) +
           " T_b=" + fmt(k.T_b) + " bound=" + fmt(k.bound));
  if (k.M_I == 0.0) {
    rep.check("no_crossing", !k.crossed, "t_max=" + fmt(r.rows.back().t));
    return;
  }
  rep.check("jacobian_crossing", k.crossed, "T_b=" + fmt(k.T_b));
  rep.check("tb_bound", k.crossed && k.T_b <= k.bound * 1.05,
            "T_b=" + fmt(k.T_b) + " bound=" + fmt(k.bound) + (k.hypothesis_met ? "" : " outside_hypothesis"));
  rep.check("c0_estimate", k.c0_ratio <= 1.05, "max_ratio=" + fmt(k.c0_ratio));
  if (k.hypothesis_met && k.z_star >= 0.0)
    rep.check("bootstrap_window", k.bootstrap_ok, "drift=" + fmt(k.bootstrap_drift) + " limit=" + fmt(k.M_I / 12.0));
}

/// Zero-sum and |.|-sum properties of the cell integrals K_m^N.
struct KernelVerdict {
  double sum[2] = {0.0, 0.0};
  double max_abs = 0.0;
  double abs_sum = 0.0;  // one parity class = one period of cells
  double quarter = 0.0;  // (β/4)E
  double half = 0.0;     // (β/2)E
};

inline KernelVerdict kernel_verdict(const KernelTable& t) {
  KernelVerdict v;
  v.sum[0] = t.sum(0);
  v.sum[1] = t.sum(1);
  v.max_abs = t.max_abs();
  v.abs_sum = t.abs_sum(0);
  v.quarter = 0.25 * t.beta * t.E;
  v.half = 0.5 * t.beta * t.E;
  return v;
}

inline bool within_rel(double a, double b, double tol) { return b == 0.0 ? a == 0.0 : std::abs(a / b - 1.0) <= tol; }

inline void cmd_verify_kernel(const ExperimentConfig& c, ArtifactSet& art, Report& rep) {
  const auto g = make_grid(c.scheme.N, 1.0, c.scheme.alpha, c.scheme.beta);
  const auto t = build_kernel_table(c.scheme.sigma2, g);
  art.add("kernel.csv", kernel_csv(t));
  const auto v = kernel_verdict(t);
  const double tol = c.scheme.N >= 11 ? 0.005 : 0.02;
  for (int p : {0, 1})
    rep.check("zero_sum_parity" + std::to_string(p), std::abs(v.sum[p]) <= 1e-12 * v.max_abs,
              "sum=" + fmt(v.sum[p]) + " max=" + fmt(v.max_abs));
  rep.check("abs_sum_quarter_E", within_rel(v.abs_sum, v.quarter, tol),
            "abs_sum=" + fmt(v.abs_sum) + " target=" + fmt(v.quarter) + " tol=" + fmt(tol));
  rep.check("abs_sum_half_E", within_rel(v.abs_sum, v.half, tol),
            "abs_sum=" + fmt(v.abs_sum) + " target=" + fmt(v.half) + " tol=" + fmt(tol));
  bool wrap_ok = true;
  for (long m = 0; m < t.period(); ++m) wrap_ok &= t.at(m + t.period()) == t.at(m) && t.at(m - t.period()) == t.at(m);
  rep.check("periodic_wrap", wrap_ok);
}

// ---------------------------------------------------------------------------
// Plots.

/// Reads an artifact from memory or, failing that, from the artifact directory.
inline Table artifact_table(const ArtifactSet& art, const std::map<std::string, std::string>& mem,
                            const std::string& name) {
  const auto it = mem.find(name);
  if (it != mem.end()) return parse_table(it->second, name);
  return parse_table(read_file(art.dir() / name), name);
}

/// Builds the selected SVG charts (and their raw data) from artifacts in memory or on disk.
inline std::map<std::string, std::string> emit_plots(const ArtifactSet& art, const std::map<std::string, std::string>& mem,
                                                     const std::vector<std::string>& selection,
                                                     const ExperimentConfig& c) {
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  std::map<std::string, std::string> out;
  for (const auto& sel : selection) {
    if (sel == "tv") {
      const std::string f = "diagnostics.csv";
      const auto t = artifact_table(art, mem, f);
      const auto ts = t.values("t", f), a = t.values("tv1", f), b = t.values("tv3", f);
      const double bE = c.scheme.beta * c.scheme.sigma2.E();
      Series tv{"TV1 + TV3", ts, {}, palette[0]}, env{"initial * exp(beta E t)", ts, {}, palette[1], true};
      CsvWriter w({"t", "tv", "envelope"});
      for (std::size_t i = 0; i < ts.size(); ++i) {
        tv.y.push_back(a[i] + b[i]);
        env.y.push_back((a[0] + b[0]) * std::exp(bE * ts[i]));
        w.row({ts[i], tv.y.back(), env.y.back()});
      }
      out["plot_tv.svg"] = svg_chart("Total variation", "t", "TV", {tv, env});
      out["plot_tv.csv"] = w.str();
    } else if (sel == "profiles") {
      std::vector<std::string> names;
      for (const auto& [n, body] : mem)
        if (n.rfind("snapshot_", 0) == 0) names.push_back(n);
      if (names.empty() && std::filesystem::is_directory(art.dir()))
        for (const auto& e : std::filesystem::directory_iterator(art.dir())) {
          const auto n = e.path().filename().string();
          if (n.rfind("snapshot_", 0) == 0 && e.path().extension() == ".csv") names.push_back(n);
        }
      std::sort(names.begin(), names.end());
      if (names.empty()) throw MissingDataError("no snapshot_*.csv files in '" + art.dir().string() + "'");
      std::vector<std::string> pick;
      const std::size_t k = std::min<std::size_t>(4, names.size());
      for (std::size_t i = 0; i < k; ++i) pick.push_back(names[k == 1 ? 0 : i * (names.size() - 1) / (k - 1)]);
      std::vector<Series> ss;
      CsvWriter w({"snapshot", "x", "sigma1", "sigma3"});
      for (std::size_t i = 0; i < pick.size(); ++i) {
        const auto t = artifact_table(art, mem, pick[i]);
        const auto xl = t.values("x_left", pick[i]), xr = t.values("x_right", pick[i]);
        const auto s1 = t.values("sigma1", pick[i]), s3 = t.values("sigma3", pick[i]);
        Series a{pick[i] + " sigma1", {}, {}, palette[i % 6]}, b{"", {}, {}, palette[i % 6], true};
        for (std::size_t j = 0; j < xl.size(); ++j) {
          a.x.insert(a.x.end(), {xl[j], xr[j]});
          a.y.insert(a.y.end(), {s1[j], s1[j]});
          b.x.insert(b.x.end(), {xl[j], xr[j]});
          b.y.insert(b.y.end(), {s3[j], s3[j]});
          w.row({static_cast<double>(i), 0.5 * (xl[j] + xr[j]), s1[j], s3[j]});
        }
        ss.push_back(std::move(a));
        ss.push_back(std::move(b));
      }
      out["plot_profiles.svg"] = svg_chart("Profiles (sigma3 dashed)", "x", "sigma", ss);
      out["plot_profiles.csv"] = w.str();
    } else if (sel == "fan") {
      const std::string f = "paths.csv";
      const auto t = artifact_table(art, mem, f);
      const auto id = t.values("path", f), ts = t.values("t", f), xs = t.values("x", f);
      std::map<long, Series> by;
      CsvWriter w({"path", "t", "x"});
      for (std::size_t i = 0; i < id.size(); ++i) {
        auto& s = by[static_cast<long>(id[i])];
        s.color = palette[static_cast<std::size_t>(id[i]) % 6];
        s.x.push_back(xs[i]);
        s.y.push_back(ts[i]);
        w.row({id[i], ts[i], xs[i]});
      }
      std::vector<Series> ss;
      for (auto& [k, s] : by) ss.push_back(std::move(s));
      out["plot_fan.svg"] = svg_chart("Approximate characteristics", "x", "t", ss);
      out["plot_fan.csv"] = w.str();
    } else if (sel == "jacobian") {
      const std::string f = "blowup.csv";
      const auto t = artifact_table(art, mem, f);
      Series s{"min dx/dz", t.values("t", f), t.values("min_jacobian", f), palette[0]};
      CsvWriter w({"t", "min_jacobian"});
      for (std::size_t i = 0; i < s.x.size(); ++i) w.row({s.x[i], s.y[i]});
      out["plot_jacobian.svg"] = svg_chart("Minimum Jacobian", "t", "min dx/dz", {s});
      out["plot_jacobian.csv"] = w.str();
    } else {
      throw ConfigError("unknown plot '" + sel + "' (tv, profiles, fan, jacobian)");
    }
  }
  return out;
}

/// Loads the config, runs one command, writes artifacts and the report; returns the exit code.
inline int run_command(const std::string& command, const CommandOptions& o, std::ostream& out, std::ostream& err) {
  try {
    std::string bytes;
    try {
      bytes = read_file(o.config_path);
    } catch (const MissingDataError&) {
      throw ConfigError("cannot read config '" + o.config_path + "'");
    }
    std::istringstream in(bytes);
    ExperimentConfig c = parse_config(in);
    if (o.threads) c.scheme.threads = *o.threads;
    ArtifactSet art(resolve_output_dir(c, o));
    Report rep;
    if (command == "run") {
      cmd_run(c, art, rep);
    } else if (command == "converge") {
      cmd_converge(c, o, art, rep);
    } else if (command == "ledger") {
      cmd_ledger(c, art, rep);
    } else if (command == "decay") {
      cmd_decay(c, art, rep);
    } else if (command == "blowup") {
      cmd_blowup(c, art, rep);
    } else if (command == "verify-kernel") {
      cmd_verify_kernel(c, art, rep);
    } else if (command == "plot") {
      // plots only, from artifacts already on disk
    } else {
      throw ConfigError("unknown command '" + command + "'");
    }
    const auto selection = o.plots.empty() ? c.plots : o.plots;
    std::map<std::string, std::string> mem;
    if (command != "plot") {
      art.add("report.txt", rep.text());
      mem = art.contents();
    }
    for (auto& [name, body] : emit_plots(art, mem, selection, c)) art.add(name, std::move(body));
    art.flush(command, bytes, command == "plot" ? "manifest_plot.txt" : "manifest.txt");
    out << rep.text();
    return rep.all_pass() ? exit_ok : exit_check_failed;
  } catch (const CflError& e) {
    err << "error: " << e.what() << " (lambda must exceed " << e.lambda_needed << ")\n";
    return exit_cfl;
  } catch (const NonFiniteError& e) {
    err << "error: " << e.what() << '\n';
    return exit_nonfinite;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const SequenceExhausted& e) {
    err << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_other;
  }
}

}  // namespace wnlo

#endif
