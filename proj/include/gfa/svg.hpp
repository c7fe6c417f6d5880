#pragma once

#include <string>
#include <vector>

#include "gfa/harness.hpp"

namespace gfa {

// Renders sweep rows as a standalone SVG line chart. The x axis is chosen
// from the data: if every alpha is finite and alpha takes more distinct
// values than gamma, x = alpha and four panels are drawn (access
// probability plus the three counters on log10 axes, zeros pinned to the
// 10^0 line); otherwise x = gamma with a single access-probability panel.
// Series are the remaining two grid variables. Rows must form a complete
// grid over (x, series) with at least two x values; anything else throws
// std::invalid_argument. Output bytes depend only on the rows.
std::string plot_rows(const std::vector<SweepRow>& rows);

}  // namespace gfa
