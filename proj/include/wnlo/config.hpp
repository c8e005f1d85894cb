#ifndef WNLO_CONFIG_HPP
#define WNLO_CONFIG_HPP

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "wnlo/error.hpp"
#include "wnlo/kernel.hpp"
#include "wnlo/periodic_function.hpp"
#include "wnlo/sampling.hpp"
#include "wnlo/scheme.hpp"

namespace wnlo {

/// Function literal: `zero`, `trig [c0] k:c:s ...` or `pl x:v x:v ...` with the given period.
inline PeriodicFunction parse_function(const std::string& text, double period) {
  std::vector<std::string> tok;
  const std::string trimmed = boost::algorithm::trim_copy(text);
  boost::algorithm::split(tok, trimmed, boost::algorithm::is_space(), boost::algorithm::token_compress_on);
  if (tok.empty() || tok[0].empty()) throw ConfigError("empty function literal");
  auto num = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || !std::isfinite(v)) throw ConfigError("bad number '" + s + "' in '" + text + "'");
    return v;
  };
  auto fields = [&](const std::string& s, std::size_t n) {
    std::vector<std::string> f;
    boost::algorithm::split(f, s, boost::algorithm::is_any_of(":"));
    if (f.size() != n) throw ConfigError("expected " + std::to_string(n) + " ':'-separated fields in '" + s + "'");
    return f;
  };
  const std::string kind = boost::algorithm::to_lower_copy(tok[0]);
  if (kind == "zero") {
    if (tok.size() != 1) throw ConfigError("'zero' takes no arguments");
    return PeriodicFunction::trig(period, 0.0, {});
  }
  if (kind == "trig") {
    double c0 = 0.0;
    std::vector<TrigTerm> terms;
    for (std::size_t i = 1; i < tok.size(); ++i) {
      if (tok[i].find(':') == std::string::npos) {
        if (i != 1) throw ConfigError("trig constant must come first in '" + text + "'");
        c0 = num(tok[i]);
        continue;
      }
      const auto f = fields(tok[i], 3);
      const double k = num(f[0]);
      if (k != std::floor(k) || k < 1) throw ConfigError("trig frequency must be a positive integer");
      terms.push_back({static_cast<int>(k), num(f[1]), num(f[2])});
    }
    return PeriodicFunction::trig(period, c0, std::move(terms));
  }
  if (kind == "pl") {
    std::vector<Node> nodes;
    for (std::size_t i = 1; i < tok.size(); ++i) {
      const auto f = fields(tok[i], 2);
      nodes.push_back({num(f[0]), num(f[1])});
    }
    return PeriodicFunction::piecewise_linear(period, std::move(nodes));
  }
  throw ConfigError("unknown function kind '" + tok[0] + "'");
}

inline std::vector<int> parse_int_list(const std::string& s) {
  std::vector<std::string> f;
  const std::string t = boost::algorithm::trim_copy(s);
  if (t.empty()) return {};
  boost::algorithm::split(f, t, boost::algorithm::is_any_of(", "), boost::algorithm::token_compress_on);
  std::vector<int> out;
  for (const auto& x : f) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(x, &used);
      if (used != x.size()) throw ConfigError("");
      out.push_back(v);
    } catch (const std::exception&) {
      throw ConfigError("bad integer list '" + s + "'");
    }
  }
  return out;
}

inline std::vector<std::string> parse_word_list(const std::string& s) {
  std::vector<std::string> f;
  const std::string t = boost::algorithm::trim_copy(s);
  if (t.empty()) return {};
  boost::algorithm::split(f, t, boost::algorithm::is_any_of(", "), boost::algorithm::token_compress_on);
  return f;
}

struct ConvergeOptions {
  std::vector<int> levels{6, 7, 8, 9, 10};
  int seeds = 5;
  int reference_N = 12;
  long oracle_points = 4096;
};

struct LedgerOptions {
  int paths = 200;        // characteristic starts on level 0
  int region_width = 8;   // bottom width of determinacy regions, in diamonds
  int region_levels = 6;
};

struct DecayOptions {
  double T0 = 0.0;
  std::optional<double> Tstar;  // default 60/(α M_B)
  std::optional<double> M_B;    // default (5/4)·M_I
  int paths = 16;
  long row_stride = 10;
};

struct BlowupOptions {
  long P = 512;
  std::optional<double> dt;
  std::optional<double> t_max;
  long record_stride = 10;
};

/// A parsed experiment file.
struct ExperimentConfig {
  SchemeInputs scheme;
  std::string sigma2_text = "zero";
  std::string sigma1_text = "zero";
  std::string sigma3_text = "zero";
  bool center = false;
  std::string output_dir = "out";
  bool retain_ledger = false;
  ConvergeOptions converge;
  LedgerOptions ledger;
  DecayOptions decay;
  BlowupOptions blowup;
  std::vector<std::string> plots;
};

namespace detail {

template <class T>
T get_or(const boost::property_tree::ptree& t, const std::string& key, T def) {
  const auto v = t.get_optional<std::string>(key);
  if (!v) return def;
  try {
    if constexpr (std::is_same_v<T, std::string>) {
      return boost::algorithm::trim_copy(*v);
    } else if constexpr (std::is_same_v<T, bool>) {
      const auto s = boost::algorithm::to_lower_copy(boost::algorithm::trim_copy(*v));
      if (s == "true" || s == "1" || s == "yes") return true;
      if (s == "false" || s == "0" || s == "no") return false;
      throw ConfigError("");
    } else {
      std::istringstream in(*v);
      T x{};
      in >> x;
      if (in.fail()) throw ConfigError("");
      in >> std::ws;
      if (!in.eof()) throw ConfigError("");
      return x;
    }
  } catch (const std::exception&) {
    throw ConfigError("bad value for '" + key + "': '" + *v + "'");
  }
}

template <class T>
std::optional<T> get_opt(const boost::property_tree::ptree& t, const std::string& key) {
  if (!t.get_optional<std::string>(key)) return std::nullopt;
  return get_or<T>(t, key, T{});
}

}  // namespace detail

inline ExperimentConfig parse_config(std::istream& in) {
  namespace pt = boost::property_tree;
  pt::ptree t;
  try {
    pt::read_ini(in, t);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  static const std::vector<std::string> known{"grid", "coeffs", "sigma2", "init", "sampling", "time",
                                               "output", "converge", "ledger", "decay", "blowup", "plots"};
  for (const auto& [name, sub] : t) {
    if (std::find(known.begin(), known.end(), name) == known.end())
      throw ConfigError("unknown config section [" + name + "]");
    if (sub.empty()) throw ConfigError("config keys must sit inside a section");
  }
  using detail::get_or;
  using detail::get_opt;
  ExperimentConfig c;
  auto& s = c.scheme;
  s.N = get_or<int>(t, "grid.N", 8);
  if (s.N < 3 || s.N > 24) throw ConfigError("grid.N must lie in [3, 24]");
  const auto lam = get_or<std::string>(t, "grid.lambda", "auto");
  if (lam != "auto") {
    s.lambda = get_or<double>(t, "grid.lambda", 0.0);
    if (!(*s.lambda > 0.0)) throw ConfigError("grid.lambda must be positive or 'auto'");
  }
  s.threads = get_or<unsigned>(t, "grid.threads", 1u);
  s.alpha = get_or<double>(t, "coeffs.alpha", 1.0);
  s.beta = get_or<double>(t, "coeffs.beta", 0.0);
  if (!(s.alpha > 0.0)) throw ConfigError("coeffs.alpha must be positive");
  if (!(s.beta >= 0.0)) throw ConfigError("coeffs.beta must be nonnegative");

  const auto kind = get_or<std::string>(t, "sigma2.kind", "zero");
  const auto params = get_or<std::string>(t, "sigma2.params", "");
  c.sigma2_text = kind == "zero" ? "zero" : kind + " " + params;
  s.sigma2 = EntropyWaveSpec(parse_function(c.sigma2_text, 0.5));

  c.sigma1_text = get_or<std::string>(t, "init.sigma1", "zero");
  c.sigma3_text = get_or<std::string>(t, "init.sigma3", "zero");
  c.center = get_or<bool>(t, "init.center", false);
  InitialData init{parse_function(c.sigma1_text, 1.0), parse_function(c.sigma3_text, 1.0)};
  const double tol = 1e-12 * std::max(1.0, init.total_variation());
  if (!c.center && (std::abs(init.sigma1.mean()) > tol || std::abs(init.sigma3.mean()) > tol))
    throw ConfigError("initial data must have zero mean (set init.center = true to center it)");
  s.init = c.center ? init.centered() : init;

  const auto sk = get_or<std::string>(t, "sampling.kind", "van_der_corput");
  const auto seed = get_or<std::uint64_t>(t, "sampling.seed", 0);
  if (sk == "van_der_corput") {
    s.sampling = SamplingSequence::van_der_corput(seed);
  } else if (sk == "seeded_uniform") {
    s.sampling = SamplingSequence::seeded_uniform(seed);
  } else if (sk == "explicit") {
    std::vector<double> v;
    for (const auto& w : parse_word_list(get_or<std::string>(t, "sampling.values", ""))) {
      try {
        v.push_back(std::stod(w));
      } catch (const std::exception&) {
        throw ConfigError("bad sampling value '" + w + "'");
      }
    }
    s.sampling = SamplingSequence::explicit_list(std::move(v));
  } else {
    throw ConfigError("unknown sampling.kind '" + sk + "'");
  }

  s.t_final = get_or<double>(t, "time.t_final", 1.0);
  if (!(s.t_final >= 0.0) || !std::isfinite(s.t_final)) throw ConfigError("time.t_final must be nonnegative");
  s.snapshot_stride = get_or<long>(t, "time.snapshot_stride", 0);
  if (s.snapshot_stride < 0) throw ConfigError("time.snapshot_stride must be nonnegative");

  c.output_dir = get_or<std::string>(t, "output.dir", "out");
  c.retain_ledger = get_or<bool>(t, "output.retain_ledger", false);

  if (const auto l = get_opt<std::string>(t, "converge.levels")) c.converge.levels = parse_int_list(*l);
  c.converge.seeds = get_or<int>(t, "converge.seeds", 5);
  c.converge.reference_N = get_or<int>(t, "converge.reference", 12);
  c.converge.oracle_points = get_or<long>(t, "converge.oracle_points", 4096);
  if (c.converge.seeds < 1 || c.converge.oracle_points < 16) throw ConfigError("converge: bad seeds/oracle_points");

  c.ledger.paths = get_or<int>(t, "ledger.paths", 200);
  c.ledger.region_width = get_or<int>(t, "ledger.region_width", 8);
  c.ledger.region_levels = get_or<int>(t, "ledger.region_levels", 6);
  if (c.ledger.paths < 0 || c.ledger.region_width < 1 || c.ledger.region_levels < 1)
    throw ConfigError("ledger: bad paths/region sizes");

  c.decay.T0 = get_or<double>(t, "decay.T0", 0.0);
  c.decay.Tstar = get_opt<double>(t, "decay.Tstar");
  c.decay.M_B = get_opt<double>(t, "decay.M_B");
  c.decay.paths = get_or<int>(t, "decay.paths", 16);
  c.decay.row_stride = get_or<long>(t, "decay.row_stride", 10);
  if (c.decay.paths < 2 || c.decay.row_stride < 1 || c.decay.T0 < 0.0) throw ConfigError("decay: bad options");

  c.blowup.P = get_or<long>(t, "blowup.P", 512);
  c.blowup.dt = get_opt<double>(t, "blowup.dt");
  c.blowup.t_max = get_opt<double>(t, "blowup.t_max");
  c.blowup.record_stride = get_or<long>(t, "blowup.record_stride", 10);

  c.plots = parse_word_list(get_or<std::string>(t, "plots.select", ""));
  return c;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  return parse_config(in);
}

}  // namespace wnlo

#endif
