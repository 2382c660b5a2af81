// Copyright 2026 The Glassbox Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "glassbox/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "glassbox/common.hpp"
#include "glassbox/rng.hpp"

namespace glassbox {

using nlohmann::json;

namespace {

constexpr double kW = 860.0, kH = 520.0;
constexpr double kLeft = 150.0, kRight = 70.0, kTop = 50.0, kBottom = 60.0;
const double kPlotW = kW - kLeft - kRight;
const double kPlotH = kH - kTop - kBottom;

std::string f2(double v) { return format_fixed(v, 2); }

// blue -> red diverging color for normalized [0,1]; negatives render gray.
std::string heat_color(double t) {
  if (t < 0.0) return "#9aa0a6";
  t = std::clamp(t, 0.0, 1.0);
  int r = static_cast<int>(30 + t * (220 - 30));
  int g = static_cast<int>(90 - t * 40);
  int b = static_cast<int>(220 - t * (220 - 60));
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
  return buf;
}

struct Canvas {
  std::ostringstream out;

  void open(const std::string& title) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
        << "\" viewBox=\"0 0 " << kW << " " << kH << "\">\n";
    out << "<rect width=\"" << kW << "\" height=\"" << kH << "\" fill=\"#ffffff\"/>\n";
    text(kW / 2, 24, title, 16, "middle", "#202124");
  }
  void close() { out << "</svg>\n"; }

  void text(double x, double y, const std::string& s, int size, const char* anchor,
            const char* fill) {
    out << "<text x=\"" << f2(x) << "\" y=\"" << f2(y) << "\" font-family=\"sans-serif\""
        << " font-size=\"" << size << "\" text-anchor=\"" << anchor << "\" fill=\"" << fill
        << "\">" << escape(s) << "</text>\n";
  }
  void line(double x1, double y1, double x2, double y2, const char* stroke, double width) {
    out << "<line x1=\"" << f2(x1) << "\" y1=\"" << f2(y1) << "\" x2=\"" << f2(x2) << "\" y2=\""
        << f2(y2) << "\" stroke=\"" << stroke << "\" stroke-width=\"" << width << "\"/>\n";
  }
  void rect(double x, double y, double w, double h, const std::string& fill) {
    out << "<rect x=\"" << f2(x) << "\" y=\"" << f2(y) << "\" width=\"" << f2(std::max(0.5, w))
        << "\" height=\"" << f2(std::max(0.5, h)) << "\" fill=\"" << fill << "\"/>\n";
  }
  void circle(double x, double y, double r, const std::string& fill) {
    out << "<circle cx=\"" << f2(x) << "\" cy=\"" << f2(y) << "\" r=\"" << f2(r) << "\" fill=\""
        << fill << "\" fill-opacity=\"0.75\"/>\n";
  }
  void poly(const std::vector<std::pair<double, double>>& pts, const char* stroke) {
    out << "<polyline points=\"";
    for (const auto& [x, y] : pts) out << f2(x) << "," << f2(y) << " ";
    out << "\" fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"2\"/>\n";
  }

  static std::string escape(const std::string& s) {
    std::string r;
    for (char c : s) {
      switch (c) {
        case '&': r += "&amp;"; break;
        case '<': r += "&lt;"; break;
        case '>': r += "&gt;"; break;
        case '"': r += "&quot;"; break;
        default: r += c;
      }
    }
    return r;
  }
};

struct Axis {
  double lo = 0.0, hi = 1.0;

  void fit(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  static Axis of(const std::vector<double>& vs) {
    Axis a{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (double v : vs) a.fit(v);
    if (!(a.hi > a.lo)) {
      a.lo -= 1.0;
      a.hi += 1.0;
    }
    double pad = 0.04 * (a.hi - a.lo);
    a.lo -= pad;
    a.hi += pad;
    return a;
  }
  double x(double v) const { return kLeft + (v - lo) / (hi - lo) * kPlotW; }
  double y(double v) const { return kTop + kPlotH - (v - lo) / (hi - lo) * kPlotH; }
};

void draw_frame_axes(Canvas& c, const Axis& xa, const Axis& ya, const std::string& xlabel,
                     const std::string& ylabel) {
  c.line(kLeft, kTop + kPlotH, kLeft + kPlotW, kTop + kPlotH, "#5f6368", 1.0);
  c.line(kLeft, kTop, kLeft, kTop + kPlotH, "#5f6368", 1.0);
  c.text(kLeft, kH - 18, format_double(xa.lo), 11, "start", "#5f6368");
  c.text(kLeft + kPlotW, kH - 18, format_double(xa.hi), 11, "end", "#5f6368");
  c.text(kLeft - 8, kTop + kPlotH, format_double(ya.lo), 11, "end", "#5f6368");
  c.text(kLeft - 8, kTop + 10, format_double(ya.hi), 11, "end", "#5f6368");
  c.text(kLeft + kPlotW / 2, kH - 18, xlabel, 12, "middle", "#202124");
  c.text(18, kTop - 14, ylabel, 12, "start", "#202124");
}

std::vector<double> column_values(const CsvTable& t, int col) {
  std::vector<double> out;
  out.reserve(t.rows.size());
  for (const auto& r : t.rows) out.push_back(parse_double(r[col]));
  return out;
}

int need_column(const CsvTable& t, const std::string& name) {
  int c = t.column(name);
  if (c < 0) throw DataError("plot data is missing column '" + name + "'");
  return c;
}

std::string meta_str(const json& meta, const char* key, const std::string& fallback) {
  if (meta.contains(key)) return meta[key].get<std::string>();
  return fallback;
}

std::string render_importance(const CsvTable& t, const json& meta) {
  Canvas c;
  c.open(meta_str(meta, "title", "Mean |SHAP value|"));
  const int fcol = need_column(t, "feature");
  const int vcol = need_column(t, "mean_abs_shap");
  const size_t n = std::min<size_t>(t.rows.size(), 30);
  double vmax = 1e-12;
  for (size_t i = 0; i < n; ++i) vmax = std::max(vmax, parse_double(t.rows[i][vcol]));
  const double rowh = kPlotH / static_cast<double>(n);
  for (size_t i = 0; i < n; ++i) {
    double v = parse_double(t.rows[i][vcol]);
    double y = kTop + i * rowh;
    c.rect(kLeft, y + rowh * 0.15, v / vmax * kPlotW, rowh * 0.7, "#3c78d8");
    c.text(kLeft - 8, y + rowh * 0.65, t.rows[i][fcol], 11, "end", "#202124");
    c.text(kLeft + v / vmax * kPlotW + 6, y + rowh * 0.65, format_double(v), 10, "start",
           "#5f6368");
  }
  c.close();
  return c.out.str();
}

std::string render_beeswarm(const CsvTable& t, const json& meta) {
  Canvas c;
  c.open(meta_str(meta, "title", "SHAP value plot"));
  const int fcol = need_column(t, "feature");
  const int scol = need_column(t, "shap_value");
  const int ccol = need_column(t, "color_value");

  std::vector<std::string> features;
  for (const auto& r : t.rows) {
    if (features.empty() || features.back() != r[fcol]) {
      if (std::find(features.begin(), features.end(), r[fcol]) == features.end()) {
        features.push_back(r[fcol]);
      }
    }
  }
  const size_t nf = std::min<size_t>(features.size(), 25);
  auto shaps = column_values(t, scol);
  Axis xa = Axis::of(shaps);
  const double rowh = kPlotH / static_cast<double>(nf);
  c.line(xa.x(0.0), kTop, xa.x(0.0), kTop + kPlotH, "#bdc1c6", 1.0);
  uint64_t jitter_state = 42;
  for (size_t fi = 0; fi < nf; ++fi) {
    double ymid = kTop + fi * rowh + rowh / 2;
    c.text(kLeft - 8, ymid + 4, features[fi], 11, "end", "#202124");
    for (const auto& r : t.rows) {
      if (r[fcol] != features[fi]) continue;
      double jitter = (static_cast<double>(splitmix64(jitter_state) >> 11) * 0x1.0p-53 - 0.5) *
                      rowh * 0.7;
      c.circle(xa.x(parse_double(r[scol])), ymid + jitter, 2.2,
               heat_color(parse_double(r[ccol])));
    }
  }
  c.text(kLeft + kPlotW / 2, kH - 18, "SHAP value (margin space)", 12, "middle", "#202124");
  c.close();
  return c.out.str();
}

std::string render_dependence(const CsvTable& t, const json& meta) {
  Canvas c;
  const std::string feature = meta_str(meta, "feature", "feature");
  const std::string partner = meta_str(meta, "partner", "partner");
  c.open("Dependence: " + feature + " (colored by " + partner + ")");
  const int xcol = need_column(t, "x");
  const int scol = need_column(t, "shap_value");
  const int pcol = need_column(t, "partner_value");
  auto xs = column_values(t, xcol);
  auto ss = column_values(t, scol);
  auto ps = column_values(t, pcol);
  Axis xa = Axis::of(xs), ya = Axis::of(ss);
  double plo = *std::min_element(ps.begin(), ps.end());
  double phi_ = *std::max_element(ps.begin(), ps.end());
  draw_frame_axes(c, xa, ya, feature, "SHAP value");
  for (size_t i = 0; i < xs.size(); ++i) {
    double tcol = phi_ > plo ? (ps[i] - plo) / (phi_ - plo) : 0.5;
    c.circle(xa.x(xs[i]), ya.y(ss[i]), 2.4, heat_color(tcol));
  }
  if (meta.contains("h_statistic")) {
    c.text(kLeft + kPlotW, kTop - 14, "H = " + f2(meta["h_statistic"].get<double>()), 12, "end",
           "#5f6368");
  }
  c.close();
  return c.out.str();
}

std::string render_decision(const CsvTable& t, const json& meta) {
  Canvas c;
  c.open(meta_str(meta, "title", "Decision plot"));
  const int fcol = need_column(t, "feature");
  const int rcol = need_column(t, "raw_value");
  const int ccol = need_column(t, "cumulative");
  const double base = meta.contains("base_value") ? meta["base_value"].get<double>() : 0.0;
  auto cum = column_values(t, ccol);
  std::vector<double> all = cum;
  all.push_back(base);
  Axis xa = Axis::of(all);
  const size_t n = t.rows.size();
  const double rowh = kPlotH / static_cast<double>(n + 1);
  c.line(xa.x(base), kTop, xa.x(base), kTop + kPlotH, "#9aa0a6", 1.0);
  c.text(xa.x(base), kTop - 6, "base " + format_double(base), 11, "middle", "#5f6368");
  std::vector<std::pair<double, double>> pts;
  pts.emplace_back(xa.x(base), kTop + kPlotH - rowh / 2);
  // Bottom-up accumulation: first feature at the bottom.
  for (size_t i = 0; i < n; ++i) {
    double y = kTop + kPlotH - (i + 1.5) * rowh;
    pts.emplace_back(xa.x(cum[i]), y);
    c.text(kLeft - 8, y + 4, t.rows[i][fcol] + " = " + t.rows[i][rcol], 10, "end", "#202124");
  }
  c.poly(pts, "#d93025");
  c.text(pts.back().first, kTop - 6, "prediction " + format_double(cum.back()), 11, "middle",
         "#d93025");
  c.close();
  return c.out.str();
}

std::string render_histogram(const CsvTable& t, const json& meta) {
  Canvas c;
  c.open(meta_str(meta, "title", "Histogram"));
  const int lcol = need_column(t, "bin_lo");
  const int hcol = need_column(t, "bin_hi");
  const int vcol = t.column("probability") >= 0 ? t.column("probability")
                                                : need_column(t, "count");
  auto los = column_values(t, lcol);
  auto his = column_values(t, hcol);
  auto vals = column_values(t, vcol);
  const bool logx = meta.contains("x_scale") && meta["x_scale"] == "log";
  auto tx = [&](double v) { return logx ? std::log10(std::max(v, 0.1)) : v; };
  std::vector<double> edges;
  for (double v : los) edges.push_back(tx(v));
  for (double v : his) edges.push_back(tx(v));
  Axis xa = Axis::of(edges);
  Axis ya{0.0, *std::max_element(vals.begin(), vals.end()) * 1.05};
  if (!(ya.hi > 0)) ya.hi = 1.0;
  draw_frame_axes(c, xa, ya, meta_str(meta, "x_label", logx ? "log scale" : "value"),
                  meta_str(meta, "y_label", "probability"));
  for (size_t i = 0; i < vals.size(); ++i) {
    double x0 = xa.x(tx(los[i]));
    double x1 = xa.x(tx(his[i]));
    c.rect(x0, ya.y(vals[i]), x1 - x0 - 0.4, kTop + kPlotH - ya.y(vals[i]), "#3c78d8");
  }
  c.close();
  return c.out.str();
}

std::string render_cdf(const CsvTable& t, const json& meta) {
  Canvas c;
  c.open(meta_str(meta, "title", "CDF"));
  const int xcol = need_column(t, "x");
  const int ccol = need_column(t, "cum");
  auto xs = column_values(t, xcol);
  auto cs = column_values(t, ccol);
  const bool logx = meta.contains("x_scale") && meta["x_scale"] == "log";
  auto tx = [&](double v) { return logx ? std::log10(std::max(v, 0.1)) : v; };
  std::vector<double> txs;
  for (double v : xs) txs.push_back(tx(v));
  Axis xa = Axis::of(txs);
  Axis ya{0.0, 1.02};
  draw_frame_axes(c, xa, ya, meta_str(meta, "x_label", "value"), "cumulative fraction");
  std::vector<std::pair<double, double>> pts;
  for (size_t i = 0; i < xs.size(); ++i) pts.emplace_back(xa.x(txs[i]), ya.y(cs[i]));
  c.poly(pts, "#3c78d8");
  c.close();
  return c.out.str();
}

std::string render_heatmap(const CsvTable& t, const json& meta) {
  Canvas c;
  c.open(meta_str(meta, "title", "Conditional distribution"));
  const int rcol = need_column(t, "level");
  const int bcol = need_column(t, "bin");
  const int vcol = need_column(t, "probability");
  std::vector<std::string> rows, cols;
  for (const auto& r : t.rows) {
    if (std::find(rows.begin(), rows.end(), r[rcol]) == rows.end()) rows.push_back(r[rcol]);
    if (std::find(cols.begin(), cols.end(), r[bcol]) == cols.end()) cols.push_back(r[bcol]);
  }
  double vmax = 1e-12;
  for (const auto& r : t.rows) vmax = std::max(vmax, parse_double(r[vcol]));
  const double cw = kPlotW / static_cast<double>(cols.size());
  const double ch = kPlotH / static_cast<double>(rows.size());
  for (const auto& r : t.rows) {
    size_t ri = std::find(rows.begin(), rows.end(), r[rcol]) - rows.begin();
    size_t ci = std::find(cols.begin(), cols.end(), r[bcol]) - cols.begin();
    c.rect(kLeft + ci * cw, kTop + ri * ch, cw, ch, heat_color(parse_double(r[vcol]) / vmax));
  }
  for (size_t ri = 0; ri < rows.size(); ++ri) {
    c.text(kLeft - 8, kTop + ri * ch + ch / 2 + 4, rows[ri], 11, "end", "#202124");
  }
  c.text(kLeft, kH - 18, cols.front(), 10, "start", "#5f6368");
  c.text(kLeft + kPlotW, kH - 18, cols.back(), 10, "end", "#5f6368");
  c.close();
  return c.out.str();
}

std::string render_elbow(const CsvTable& t, const json& meta) {
  Canvas c;
  c.open(meta_str(meta, "title", "Inertia vs K"));
  const int kcol = need_column(t, "k");
  const int icol = need_column(t, "inertia");
  auto ks = column_values(t, kcol);
  auto is = column_values(t, icol);
  Axis xa = Axis::of(ks), ya = Axis::of(is);
  draw_frame_axes(c, xa, ya, "k", "inertia");
  std::vector<std::pair<double, double>> pts;
  for (size_t i = 0; i < ks.size(); ++i) pts.emplace_back(xa.x(ks[i]), ya.y(is[i]));
  c.poly(pts, "#3c78d8");
  if (meta.contains("chosen_k")) {
    double ck = meta["chosen_k"].get<double>();
    for (size_t i = 0; i < ks.size(); ++i) {
      if (ks[i] == ck) c.circle(pts[i].first, pts[i].second, 5.0, "#d93025");
    }
  }
  c.close();
  return c.out.str();
}

}  // namespace

std::string render_svg(const CsvTable& data, const json& meta) {
  const std::string kind = meta.contains("plot_kind") ? meta["plot_kind"].get<std::string>() : "";
  if (kind == "importance") return render_importance(data, meta);
  if (kind == "beeswarm") return render_beeswarm(data, meta);
  if (kind == "dependence") return render_dependence(data, meta);
  if (kind == "decision") return render_decision(data, meta);
  if (kind == "histogram1d") return render_histogram(data, meta);
  if (kind == "cdf") return render_cdf(data, meta);
  if (kind == "heatmap") return render_heatmap(data, meta);
  if (kind == "elbow") return render_elbow(data, meta);
  throw ValidationError("unsupported plot_kind '" + kind +
                        "' (expected importance, beeswarm, dependence, decision, histogram1d, "
                        "cdf, heatmap or elbow)");
}

std::string render_svg_files(const std::string& csv_path, const std::string& json_path) {
  CsvTable data = read_csv(csv_path);
  std::ifstream in(json_path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + json_path);
  json meta = json::parse(in);
  return render_svg(data, meta);
}

}  // namespace glassbox
