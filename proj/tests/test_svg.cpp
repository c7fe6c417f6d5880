#include <doctest.h>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "gfa/svg.hpp"

using namespace gfa;

namespace {

SweepRow make_row(double gamma, std::uint32_t k, Alpha alpha, double access,
                  double wr = 100, double dec = 50, double sto = 20) {
  SweepRow row;
  row.gamma = gamma;
  row.n = static_cast<std::uint32_t>(gamma * 100);
  row.r = 100;
  row.k = k;
  row.alpha = alpha;
  row.windows = 100;
  row.access_prob = access;
  row.ci95 = 0.01;
  row.mean_wr = wr;
  row.mean_dec = dec;
  row.mean_peak_storage = sto;
  return row;
}

std::vector<SweepRow> load_grid_rows() {
  std::vector<SweepRow> rows;
  std::vector<Alpha> alphas = {Alpha::finite(1), Alpha::finite(2), Alpha::unbounded()};
  for (double g : {0.1, 0.5, 0.9})
    for (std::uint32_t k : {2, 3, 4, 5})
      for (Alpha a : alphas)
        rows.push_back(make_row(g, k, a, 1.0 - g / (1.0 + k)));
  return rows;
}

std::vector<SweepRow> depth_grid_rows() {
  std::vector<SweepRow> rows;
  for (std::uint32_t a = 1; a <= 5; ++a)
    for (std::uint32_t k : {2, 4})
      for (double g : {0.3, 0.6, 0.9})
        rows.push_back(make_row(g, k, Alpha::finite(a), 0.5 + 0.05 * a,
                                100.0 * a, 40.0 * a, a == 1 ? 0.0 : 15.0 * a));
  return rows;
}

std::size_t count_of(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t pos = hay.find(needle); pos != std::string::npos;
       pos = hay.find(needle, pos + needle.size()))
    ++n;
  return n;
}

}  // namespace

TEST_CASE("load sweeps draw one access panel with a line per (k, alpha)") {
  std::string svg = plot_rows(load_grid_rows());
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(count_of(svg, "<polyline") == 12);
  CHECK(count_of(svg, ">access_prob<") == 1);
  CHECK(svg.find(">gamma<") != std::string::npos);
  CHECK(svg.find("k=2 alpha=inf") != std::string::npos);
  CHECK(svg.find("k=5 alpha=1") != std::string::npos);
  CHECK(svg.find("mean_wr") == std::string::npos);
}

TEST_CASE("depth sweeps draw four panels with log-scaled counters") {
  std::string svg = plot_rows(depth_grid_rows());
  // 6 series, 4 panels
  CHECK(count_of(svg, "<polyline") == 24);
  CHECK(count_of(svg, ">access_prob<") == 1);
  CHECK(svg.find(">mean_wr<") != std::string::npos);
  CHECK(svg.find(">mean_dec<") != std::string::npos);
  CHECK(svg.find(">mean_peak_storage<") != std::string::npos);
  CHECK(svg.find(">alpha<") != std::string::npos);
  CHECK(svg.find("k=2 gamma=0.3") != std::string::npos);
  CHECK(svg.find("k=4 gamma=0.9") != std::string::npos);
}

TEST_CASE("plot bytes are a pure function of the rows") {
  std::vector<SweepRow> rows = load_grid_rows();
  CHECK(plot_rows(rows) == plot_rows(rows));
  std::string before = plot_rows(rows);
  rows[0].access_prob += 0.001;
  CHECK(plot_rows(rows) != before);
}

TEST_CASE("rows that cannot form lines are rejected") {
  std::vector<SweepRow> grid = load_grid_rows();

  CHECK_THROWS_AS(plot_rows({}), std::invalid_argument);
  CHECK_THROWS_AS(plot_rows({grid[0]}), std::invalid_argument);

  // Same x twice in one series.
  std::vector<SweepRow> dup = {grid[0], grid[0]};
  CHECK_THROWS_AS(plot_rows(dup), std::invalid_argument);

  // A hole in the grid.
  std::vector<SweepRow> holey = grid;
  holey.pop_back();
  CHECK_THROWS_AS(plot_rows(holey), std::invalid_argument);

  // Two rows differing only in a non-grid variable still collide.
  std::vector<SweepRow> clash = {grid[0], grid[0]};
  clash[1].windows = 999;
  CHECK_THROWS_AS(plot_rows(clash), std::invalid_argument);
}

TEST_CASE("single-variable sweeps plot against gamma by default") {
  // Two gamma points, one (k, alpha) series: minimal valid input.
  std::vector<SweepRow> rows = {
      make_row(0.1, 2, Alpha::finite(2), 0.9),
      make_row(0.2, 2, Alpha::finite(2), 0.8),
  };
  std::string svg = plot_rows(rows);
  CHECK(count_of(svg, "<polyline") == 1);
  CHECK(svg.find(">gamma<") != std::string::npos);
}
