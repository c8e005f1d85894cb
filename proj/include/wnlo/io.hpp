#ifndef WNLO_IO_HPP
#define WNLO_IO_HPP

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include "wnlo/error.hpp"
#include "wnlo/grid.hpp"
#include "wnlo/kernel.hpp"
#include "wnlo/scheme.hpp"
#include "wnlo/smooth_blowup.hpp"
#include "wnlo/wave_ledger.hpp"

namespace wnlo {

/// Shortest round-trip decimal form of a double.
inline std::string fmt(double v) {
  if (v == 0.0) return "0";
  std::array<char, 32> buf{};
  const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), r.ptr);
}

/// Fixed-point form with `digits` decimals (for SVG coordinates).
inline std::string fmt_fixed(double v, int digits = 2) {
  std::array<char, 64> buf{};
  if (std::abs(v) < 0.5 * std::pow(10.0, -digits)) v = 0.0;
  const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed, digits);
  return std::string(buf.data(), r.ptr);
}

/// Comma-separated table built row by row.
class CsvWriter {
 public:
  explicit CsvWriter(const std::vector<std::string>& header) { row_strings(header); }

  void row(std::initializer_list<double> vals) {
    bool first = true;
    for (double v : vals) {
      if (!first) out_ << ',';
      out_ << fmt(v);
      first = false;
    }
    out_ << '\n';
  }
  void row_strings(const std::vector<std::string>& vals) {
    for (std::size_t i = 0; i < vals.size(); ++i) out_ << (i ? "," : "") << vals[i];
    out_ << '\n';
  }
  void comment(const std::string& line) { out_ << "# " << line << '\n'; }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

inline void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot write '" + p.string() + "'");
  f << content;
  if (!f) throw Error("write failed for '" + p.string() + "'");
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f) throw MissingDataError("cannot read '" + p.string() + "'");
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

inline std::string snapshot_csv(const SolutionState& s) {
  CsvWriter w({"x_left", "x_right", "sigma1", "sigma3"});
  const double dx = s.sigma1.dx();
  for (long j = 0; j < s.sigma1.size(); ++j) {
    const double m = static_cast<double>(s.sigma1.center(j));
    w.row({(m - 1.0) * dx, (m + 1.0) * dx, s.sigma1[j], s.sigma3[j]});
  }
  return w.str();
}

inline std::string diagnostics_csv(const std::vector<DiagnosticsRow>& rows) {
  CsvWriter w({"t", "tv1", "tv3", "sup1", "sup3", "mean1", "mean3"});
  for (const auto& r : rows) w.row({r.t, r.tv1, r.tv3, r.sup1, r.sup3, r.mean1, r.mean3});
  return w.str();
}

inline std::string kernel_csv(const KernelTable& t) {
  CsvWriter w({"m", "K_m"});
  for (long m = 0; m < t.period(); ++m) w.row({static_cast<double>(m), t.at(m)});
  return w.str();
}

inline std::string ledger_csv(const std::vector<DiamondRecord>& ds) {
  CsvWriter w({"m", "n", "family", "alpha", "beta", "gamma", "C", "Delta", "Q1"});
  for (const auto& d : ds)
    for (int f : {1, 3}) {
      const auto& x = d.family(f);
      w.row({static_cast<double>(d.m), static_cast<double>(d.n), static_cast<double>(f), x.alpha, x.beta, x.gamma,
             x.C, x.Delta, x.Q});
    }
  return w.str();
}

/// All paths in one table; the leading `path` column identifies the polyline.
inline std::string paths_csv(const std::vector<CharacteristicPath>& paths) {
  CsvWriter w({"path", "t", "x", "speed", "strength"});
  for (std::size_t i = 0; i < paths.size(); ++i)
    for (const auto& v : paths[i].vertices) w.row({static_cast<double>(i), v.t, v.x, v.speed, v.strength});
  return w.str();
}

inline std::string blowup_csv(const BlowupReport& r) {
  CsvWriter w({"t", "min_jacobian", "argmin_z", "l1_w1", "l1_w3"});
  for (const auto& row : r.rows) w.row({row.t, row.min_jacobian, row.argmin_z, row.l1_w1, row.l1_w3});
  const auto& c = r.certificate;
  w.comment("certificate status=\"" + c.status + "\" T_b=" + fmt(c.T_b) + " t_lo=" + fmt(c.t_lo) +
            " t_hi=" + fmt(c.t_hi) + " bound=" + fmt(c.bound) + " z=" + fmt(c.crossing_z) +
            " family=" + std::to_string(c.crossing_family));
  return w.str();
}

inline std::string decay_csv(const DecayReport& r) {
  CsvWriter w({"pair", "n", "t", "D", "X_plus", "X_minus_T0", "delta_sum", "slack", "rhs", "tv", "active", "holds"});
  for (const auto& x : r.rows)
    w.row({static_cast<double>(x.pair), static_cast<double>(x.n), x.t, x.D, x.X_plus, x.X_minus_T0, x.delta_sum,
           x.slack, x.rhs, x.tv, x.active ? 1.0 : 0.0, x.holds ? 1.0 : 0.0});
  return w.str();
}

/// Parsed numeric table; '#' lines are skipped.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string& name, const std::string& file) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw MissingDataError("'" + file + "' has no column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  }
  std::vector<double> values(const std::string& name, const std::string& file) const {
    const auto c = column(name, file);
    std::vector<double> v;
    for (const auto& r : rows) v.push_back(r[c]);
    return v;
  }
};

/// Parses CSV text; `name` identifies the source in error messages.
inline Table parse_table(const std::string& body, const std::string& name) {
  std::istringstream in(body);
  Table t;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (t.header.empty()) {
      t.header = cells;
      continue;
    }
    if (cells.size() != t.header.size()) throw MissingDataError("'" + name + "' has a ragged row");
    std::vector<double> row;
    for (const auto& c : cells) {
      double v = 0.0;
      const auto r = std::from_chars(c.data(), c.data() + c.size(), v);
      if (r.ec != std::errc() || r.ptr != c.data() + c.size())
        throw MissingDataError("'" + name + "' has a non-numeric cell '" + c + "'");
      row.push_back(v);
    }
    t.rows.push_back(std::move(row));
  }
  if (t.header.empty()) throw MissingDataError("'" + name + "' is empty");
  return t;
}

inline Table read_table(const std::filesystem::path& p) { return parse_table(read_file(p), p.string()); }

/// Git-style blob hash: SHA-1 of "blob <size>\0" followed by the bytes.
inline std::string blob_sha1(const std::string& bytes) {
  const std::string head = "blob " + std::to_string(bytes.size()) + std::string(1, '\0');
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx) throw Error("sha1: context allocation failed");
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  const bool ok = EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr) == 1 &&
                  EVP_DigestUpdate(ctx, head.data(), head.size()) == 1 &&
                  EVP_DigestUpdate(ctx, bytes.data(), bytes.size()) == 1 &&
                  EVP_DigestFinal_ex(ctx, md, &len) == 1;
  EVP_MD_CTX_free(ctx);
  if (!ok) throw Error("sha1: digest failed");
  static const char* hex = "0123456789abcdef";
  std::string s;
  for (unsigned int i = 0; i < len; ++i) {
    s += hex[md[i] >> 4];
    s += hex[md[i] & 15];
  }
  return s;
}

/// Files written by one command, kept in memory until `flush` so the manifest can list them.
class ArtifactSet {
 public:
  explicit ArtifactSet(std::filesystem::path dir) : dir_(std::move(dir)) {}

  void add(const std::string& name, std::string content) { files_[name] = std::move(content); }
  bool has(const std::string& name) const { return files_.count(name) > 0; }
  const std::filesystem::path& dir() const { return dir_; }
  const std::map<std::string, std::string>& contents() const { return files_; }

  /// Writes every file and a manifest (name-sorted, content hashes only).
  void flush(const std::string& command, const std::string& config_bytes,
             const std::string& manifest = "manifest.txt") {
    std::filesystem::create_directories(dir_);
    std::ostringstream m;
    m << "wnlo manifest 1\n"
      << "command " << command << '\n'
      << "config " << blob_sha1(config_bytes) << '\n';
    for (const auto& [name, content] : files_) {
      write_file(dir_ / name, content);
      m << "file " << blob_sha1(content) << ' ' << content.size() << ' ' << name << '\n';
    }
    write_file(dir_ / manifest, m.str());
  }

 private:
  std::filesystem::path dir_;
  std::map<std::string, std::string> files_;
};

// ---------------------------------------------------------------------------
// SVG line charts.

struct Series {
  std::string label;
  std::vector<double> x, y;
  std::string color = "#1f77b4";
  bool dashed = false;
};

/// Self-contained SVG chart of one or more polylines with axes, ticks and a legend; series longer
/// than `max_points` are drawn at a uniform stride.
inline std::string svg_chart(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                             const std::vector<Series>& series, std::size_t max_points = 2000) {
  const double W = 640, H = 400, L = 70, R = 20, T = 40, B = 50;
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  if (x0 > x1) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 - x0 < 1e-300) x1 = x0 + 1.0;
  if (y1 - y0 < 1e-300) {
    y0 -= 0.5;
    y1 += 0.5;
  }
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
    << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << title << "</text>\n"
    << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = x0 + (x1 - x0) * i / 4.0, yv = y0 + (y1 - y0) * i / 4.0;
    o << "<text x=\"" << fmt_fixed(px(xv)) << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\">"
      << fmt_fixed(xv, 3) << "</text>\n"
      << "<text x=\"" << L - 6 << "\" y=\"" << fmt_fixed(py(yv) + 4) << "\" text-anchor=\"end\">" << fmt_fixed(yv, 3)
      << "</text>\n";
  }
  o << "<text x=\"" << W / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\">" << xlabel << "</text>\n"
    << "<text x=\"16\" y=\"" << H / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << H / 2 << ")\">"
    << ylabel << "</text>\n";
  int labels = 0;
  for (const auto& s : series) {
    const std::size_t stride = (s.x.size() + max_points - 1) / max_points;
    o << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\""
      << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << " points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if ((i % stride != 0 && i + 1 != s.x.size()) || !std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      o << (i ? " " : "") << fmt_fixed(px(s.x[i])) << ',' << fmt_fixed(py(s.y[i]));
    }
    o << "\"/>\n";
    if (!s.label.empty())
      o << "<text x=\"" << L + 10 << "\" y=\"" << T + 16 + 15 * labels++ << "\" fill=\"" << s.color
        << "\">" << s.label << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace wnlo

#endif
