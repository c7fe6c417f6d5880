#include "gfa/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <stdexcept>

#include "gfa/io.hpp"

namespace gfa {

namespace {

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
                          "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#aec7e8", "#ffbb78"};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

struct Series {
  std::string label;
  std::vector<std::pair<double, const SweepRow*>> pts;  // sorted by x
};

struct Rect {
  double x0, y0, w, h;
};

void text_at(std::string& svg, double x, double y, const std::string& anchor,
             const std::string& content, int size = 12) {
  svg += "<text x=\"" + px(x) + "\" y=\"" + px(y) + "\" font-family=\"monospace\" font-size=\"" +
         std::to_string(size) + "\" text-anchor=\"" + anchor + "\">" + content + "</text>\n";
}

void line_at(std::string& svg, double x1, double y1, double x2, double y2,
             const std::string& stroke, const std::string& width = "1") {
  svg += "<line x1=\"" + px(x1) + "\" y1=\"" + px(y1) + "\" x2=\"" + px(x2) + "\" y2=\"" +
         px(y2) + "\" stroke=\"" + stroke + "\" stroke-width=\"" + width + "\"/>\n";
}

// One panel: linear x over the given tick positions; y either a fixed [0,1]
// probability axis or log10 with integer-exponent ticks.
void draw_panel(std::string& svg, const Rect& rc, const std::string& title,
                const std::string& xlabel, const std::vector<double>& xticks, bool log_y,
                double (*value)(const SweepRow&), const std::vector<Series>& series) {
  const double xmin = xticks.front(), xmax = xticks.back();
  auto sx = [&](double v) { return rc.x0 + (v - xmin) / (xmax - xmin) * rc.w; };

  double ymin = 0.0, ymax = 1.0;
  int emin = 0, emax = 1;
  if (log_y) {
    bool any = false;
    double lo = 0.0, hi = 0.0;
    for (const Series& s : series) {
      for (const auto& [x, row] : s.pts) {
        double v = std::log10(std::max(value(*row), 1.0));
        if (!any || v < lo) lo = v;
        if (!any || v > hi) hi = v;
        any = true;
      }
    }
    emin = static_cast<int>(std::floor(lo));
    emax = static_cast<int>(std::ceil(hi));
    if (emax == emin) ++emax;
    ymin = emin;
    ymax = emax;
  }
  auto sy = [&](double v) {
    double t = log_y ? std::log10(std::max(v, 1.0)) : v;
    return rc.y0 + rc.h - (t - ymin) / (ymax - ymin) * rc.h;
  };

  text_at(svg, rc.x0 + rc.w / 2, rc.y0 - 10, "middle", title, 13);
  line_at(svg, rc.x0, rc.y0, rc.x0, rc.y0 + rc.h, "#000000");
  line_at(svg, rc.x0, rc.y0 + rc.h, rc.x0 + rc.w, rc.y0 + rc.h, "#000000");

  for (double t : xticks) {
    double x = sx(t);
    line_at(svg, x, rc.y0 + rc.h, x, rc.y0 + rc.h + 4, "#000000");
    text_at(svg, x, rc.y0 + rc.h + 18, "middle", format_g6(t), 11);
  }
  text_at(svg, rc.x0 + rc.w / 2, rc.y0 + rc.h + 36, "middle", xlabel, 12);

  if (log_y) {
    for (int e = emin; e <= emax; ++e) {
      double y = sy(std::pow(10.0, e));
      line_at(svg, rc.x0, y, rc.x0 + rc.w, y, "#dddddd");
      text_at(svg, rc.x0 - 6, y + 4, "end", format_g6(std::pow(10.0, e)), 11);
    }
  } else {
    for (int i = 0; i <= 5; ++i) {
      double v = i / 5.0;
      double y = sy(v);
      line_at(svg, rc.x0, y, rc.x0 + rc.w, y, "#dddddd");
      text_at(svg, rc.x0 - 6, y + 4, "end", format_g6(v), 11);
    }
  }

  for (std::size_t i = 0; i < series.size(); ++i) {
    std::string points;
    for (const auto& [xv, row] : series[i].pts) {
      if (!points.empty()) points += ' ';
      points += px(sx(xv)) + "," + px(sy(value(*row)));
    }
    svg += "<polyline fill=\"none\" stroke=\"" + std::string(kPalette[i % kPaletteSize]) +
           "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
  }
}

double v_access(const SweepRow& r) { return r.access_prob; }
double v_wr(const SweepRow& r) { return r.mean_wr; }
double v_dec(const SweepRow& r) { return r.mean_dec; }
double v_sto(const SweepRow& r) { return r.mean_peak_storage; }

}  // namespace

std::string plot_rows(const std::vector<SweepRow>& rows) {
  if (rows.size() < 2)
    throw std::invalid_argument("plot: need at least two rows to form a line");

  std::set<double> gammas;
  std::set<std::uint64_t> alphas_raw;
  bool all_alpha_finite = true;
  for (const SweepRow& row : rows) {
    gammas.insert(row.gamma);
    if (row.alpha.is_unbounded()) {
      all_alpha_finite = false;
      alphas_raw.insert(~std::uint64_t{0});
    } else {
      alphas_raw.insert(row.alpha.value());
    }
  }
  const bool x_is_alpha = all_alpha_finite && alphas_raw.size() > gammas.size();
  const std::string xlabel = x_is_alpha ? "alpha" : "gamma";

  // Series key = the two non-x grid variables; x values must repeat across
  // every series exactly once.
  std::map<std::pair<std::uint32_t, std::string>, std::map<double, const SweepRow*>> grid;
  std::set<double> xs;
  for (const SweepRow& row : rows) {
    double x = x_is_alpha ? static_cast<double>(row.alpha.value()) : row.gamma;
    std::string aux = x_is_alpha ? "gamma=" + format_g6(row.gamma) : "alpha=" + row.alpha.str();
    auto key = std::make_pair(row.k, aux);
    if (grid[key].count(x))
      throw std::invalid_argument("plot: duplicate row for k=" + std::to_string(row.k) + " " +
                                  aux + " x=" + format_g6(x));
    grid[key][x] = &row;
    xs.insert(x);
  }
  if (xs.size() < 2) throw std::invalid_argument("plot: need at least two " + xlabel + " values");
  for (const auto& [key, pts] : grid) {
    if (pts.size() != xs.size())
      throw std::invalid_argument("plot: rows do not form a grid (series k=" +
                                  std::to_string(key.first) + " " + key.second + " covers " +
                                  std::to_string(pts.size()) + " of " +
                                  std::to_string(xs.size()) + " x values)");
  }

  std::vector<double> xticks(xs.begin(), xs.end());
  std::vector<Series> series;
  for (const auto& [key, pts] : grid) {
    Series s;
    s.label = "k=" + std::to_string(key.first) + " " + key.second;
    for (const auto& [x, row] : pts) s.pts.emplace_back(x, row);
    series.push_back(std::move(s));
  }

  struct Panel {
    const char* title;
    bool log_y;
    double (*value)(const SweepRow&);
  };
  std::vector<Panel> panels;
  if (x_is_alpha) {
    panels = {{"access_prob", false, v_access},
              {"mean_wr", true, v_wr},
              {"mean_dec", true, v_dec},
              {"mean_peak_storage", true, v_sto}};
  } else {
    panels = {{"access_prob", false, v_access}};
  }

  const double pw = x_is_alpha ? 380.0 : 560.0;
  const double ph = x_is_alpha ? 260.0 : 380.0;
  const double ml = 70.0, mt = 40.0, mr = 24.0, mb = 60.0;
  const int cols = x_is_alpha ? 2 : 1;
  const int rows_n = x_is_alpha ? 2 : 1;
  const double cell_w = ml + pw + mr;
  const double cell_h = mt + ph + mb;
  const double legend_w = 200.0;
  const double doc_w = cols * cell_w + legend_w;
  const double doc_h = rows_n * cell_h;

  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + px(doc_w) +
                    "\" height=\"" + px(doc_h) + "\" viewBox=\"0 0 " + px(doc_w) + " " +
                    px(doc_h) + "\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"" + px(doc_w) + "\" height=\"" + px(doc_h) +
         "\" fill=\"#ffffff\"/>\n";

  for (std::size_t p = 0; p < panels.size(); ++p) {
    Rect rc{(p % cols) * cell_w + ml, (p / cols) * cell_h + mt, pw, ph};
    draw_panel(svg, rc, panels[p].title, xlabel, xticks, panels[p].log_y, panels[p].value,
               series);
  }

  double lx = cols * cell_w + 16.0;
  double ly = 40.0;
  text_at(svg, lx, ly - 16, "start", "series", 12);
  for (std::size_t i = 0; i < series.size(); ++i) {
    line_at(svg, lx, ly + 18.0 * static_cast<double>(i) - 4, lx + 22, ly + 18.0 * i - 4,
            kPalette[i % kPaletteSize], "2");
    text_at(svg, lx + 28, ly + 18.0 * static_cast<double>(i), "start", series[i].label, 11);
  }

  svg += "</svg>\n";
  return svg;
}

}  // namespace gfa
