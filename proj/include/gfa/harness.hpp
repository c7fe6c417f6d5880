#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "gfa/decoder.hpp"
#include "gfa/metrics.hpp"
#include "gfa/model.hpp"

namespace gfa {

// One aggregated grid point; field order mirrors the CSV schema.
struct SweepRow {
  double gamma = 0.0;
  std::uint32_t n = 0;
  std::uint32_t r = 0;
  std::uint32_t k = 0;
  Alpha alpha;
  std::uint64_t windows = 0;
  double access_prob = 0.0;
  double ci95 = 0.0;
  double mean_wr = 0.0;
  double mean_dec = 0.0;
  double mean_peak_storage = 0.0;
  std::uint64_t seed = 0;
};

// run_point plus the per-window record, for bound checks and paired tests.
struct PointResult {
  SweepRow row;
  std::vector<WindowStats> windows;
  std::uint64_t budget_hits = 0;
  std::uint64_t cap_hits = 0;
};

// A sweep grid: either gamma values over a fixed R (N = round(gamma * R))
// or explicit (N, R) pairs, crossed with K and alpha lists.
struct SweepSpec {
  std::vector<double> gamma_values;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> nr_pairs;
  std::uint32_t fixed_r = 100;
  std::vector<std::uint32_t> k_values;
  std::vector<Alpha> alpha_values;
  std::uint64_t windows = 10000;
  std::uint64_t base_seed = 0;
  std::size_t pool_levels = 3;
  ChannelParams channel;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<std::uint64_t> budget_hits;  // parallel to rows
  std::vector<std::uint64_t> cap_hits;
};

// Worker count: explicit argument, else GFA_THREADS, else the OpenMP
// default. Rejects a non-numeric or non-positive GFA_THREADS.
int resolve_threads(int requested = 0);

// Monte Carlo over config.windows frames. Window w draws its frame from
// derive_seed(config.seed, w) and runs independently; aggregation walks the
// windows in index order, so every thread count produces the same result.
// A set trace callback forces single-threaded execution (coherent stream).
PointResult run_point_detailed(const SystemConfig& config, const EngineOptions& options = {},
                               int threads = 0);
SweepRow run_point(const SystemConfig& config, const EngineOptions& options = {},
                   int threads = 0);

// Plain-loop reference with the identical contract; bench baseline.
PointResult run_point_serial(const SystemConfig& config, const EngineOptions& options = {});

// Grid expansion in emission order: gamma (or (N, R) pair) outermost, then
// K, then alpha. Point p gets seed derive_seed(spec.base_seed, p).
std::vector<SystemConfig> expand_grid(const SweepSpec& spec);

// Runs every grid point in order. Windows parallelize inside each point.
SweepResult run_sweep(const SweepSpec& spec, const EngineOptions& options = {},
                      int threads = 0);

}  // namespace gfa
