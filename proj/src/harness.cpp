#include "gfa/harness.hpp"

#include <omp.h>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "gfa/framegen.hpp"
#include "gfa/rng.hpp"

namespace gfa {

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("GFA_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1 || v > 4096)
      throw std::invalid_argument("GFA_THREADS must be a positive integer, got \"" +
                                  std::string(env) + "\"");
    return static_cast<int>(v);
  }
  return omp_get_max_threads();
}

namespace {

PointResult reduce_stats(const SystemConfig& config, std::vector<WindowStats> stats) {
  PointResult out;
  std::vector<std::uint32_t> counts(stats.size());
  std::uint64_t wr = 0, dec = 0, sto = 0;
  for (std::size_t w = 0; w < stats.size(); ++w) {
    counts[w] = stats[w].decoded_count;
    wr += stats[w].counters.wr_ops;
    dec += stats[w].counters.dec_ops;
    sto += stats[w].counters.peak_storage;
    out.budget_hits += stats[w].budget_hit ? 1 : 0;
    out.cap_hits += stats[w].cap_hit ? 1 : 0;
  }
  AccessStat acc = estimate_access(counts, config.n_devices);

  auto windows = static_cast<double>(stats.size());
  out.row.gamma = config.gamma();
  out.row.n = config.n_devices;
  out.row.r = config.n_rbs;
  out.row.k = config.k_repetitions;
  out.row.alpha = config.alpha;
  out.row.windows = stats.size();
  out.row.access_prob = acc.mean_access_prob;
  out.row.ci95 = acc.ci95_halfwidth;
  out.row.mean_wr = static_cast<double>(wr) / windows;
  out.row.mean_dec = static_cast<double>(dec) / windows;
  out.row.mean_peak_storage = static_cast<double>(sto) / windows;
  out.row.seed = config.seed;
  out.windows = std::move(stats);
  return out;
}

}  // namespace

PointResult run_point_detailed(const SystemConfig& config, const EngineOptions& options,
                               int threads) {
  validate_config(config);
  const int t = options.trace ? 1 : resolve_threads(threads);
  const auto n_windows = static_cast<std::int64_t>(config.windows);
  std::vector<WindowStats> stats(config.windows);

  std::atomic<bool> failed{false};
  std::string error_msg;

#pragma omp parallel num_threads(t)
  {
    EngineRunner runner(config, options);
    AccessMap map;
    std::vector<std::uint32_t> scratch;
#pragma omp for schedule(dynamic)
    for (std::int64_t w = 0; w < n_windows; ++w) {
      if (failed.load(std::memory_order_relaxed)) continue;
      try {
        Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(w)));
        generate_access_map_into(config, rng, scratch, map);
        stats[w] = runner.run_stats(map);
      } catch (const std::exception& e) {
#pragma omp critical
        {
          if (!failed.load()) error_msg = e.what();
          failed.store(true);
        }
      }
    }
  }
  if (failed.load()) throw std::runtime_error("run_point: " + error_msg);
  return reduce_stats(config, std::move(stats));
}

SweepRow run_point(const SystemConfig& config, const EngineOptions& options, int threads) {
  return run_point_detailed(config, options, threads).row;
}

PointResult run_point_serial(const SystemConfig& config, const EngineOptions& options) {
  validate_config(config);
  std::vector<WindowStats> stats(config.windows);
  EngineRunner runner(config, options);
  AccessMap map;
  std::vector<std::uint32_t> scratch;
  for (std::uint64_t w = 0; w < config.windows; ++w) {
    Rng rng(derive_seed(config.seed, w));
    generate_access_map_into(config, rng, scratch, map);
    stats[w] = runner.run_stats(map);
  }
  return reduce_stats(config, std::move(stats));
}

std::vector<SystemConfig> expand_grid(const SweepSpec& spec) {
  const bool by_gamma = !spec.gamma_values.empty();
  const bool by_pairs = !spec.nr_pairs.empty();
  if (by_gamma == by_pairs)
    throw std::invalid_argument("sweep: exactly one of gamma values or (n, r) pairs required");
  if (spec.k_values.empty()) throw std::invalid_argument("sweep: k list empty");
  if (spec.alpha_values.empty()) throw std::invalid_argument("sweep: alpha list empty");
  if (spec.windows == 0) throw std::invalid_argument("sweep: windows must be >= 1");

  std::vector<std::pair<std::uint32_t, std::uint32_t>> nr = spec.nr_pairs;
  if (by_gamma) {
    for (double g : spec.gamma_values) {
      auto n = static_cast<std::int64_t>(std::llround(g * spec.fixed_r));
      if (!(g > 0.0) || n < 1)
        throw std::invalid_argument("sweep: gamma " + std::to_string(g) +
                                    " rounds to no devices at r=" + std::to_string(spec.fixed_r));
      nr.emplace_back(static_cast<std::uint32_t>(n), spec.fixed_r);
    }
  }

  PowerPool pool = build_power_pool(spec.pool_levels, spec.channel);
  std::vector<SystemConfig> out;
  for (const auto& [n, r] : nr) {
    for (std::uint32_t k : spec.k_values) {
      for (Alpha alpha : spec.alpha_values) {
        SystemConfig config;
        config.n_devices = n;
        config.n_rbs = r;
        config.k_repetitions = k;
        config.alpha = alpha;
        config.channel = spec.channel;
        config.pool = pool;
        config.windows = spec.windows;
        config.seed = derive_seed(spec.base_seed, out.size());
        validate_config(config);
        out.push_back(std::move(config));
      }
    }
  }
  return out;
}

SweepResult run_sweep(const SweepSpec& spec, const EngineOptions& options, int threads) {
  SweepResult out;
  for (const SystemConfig& config : expand_grid(spec)) {
    PointResult p = run_point_detailed(config, options, threads);
    out.rows.push_back(p.row);
    out.budget_hits.push_back(p.budget_hits);
    out.cap_hits.push_back(p.cap_hits);
  }
  return out;
}

}  // namespace gfa
