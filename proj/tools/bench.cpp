// Compares the plain serial Monte Carlo loop against the OpenMP runner on a
// few representative points and checks that both produce identical rows.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "gfa/harness.hpp"
#include "gfa/io.hpp"
#include "gfa/model.hpp"

namespace {

struct BenchPoint {
  std::uint32_t n, r, k;
  gfa::Alpha alpha;
};

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

int main(int argc, char** argv) {
  std::uint64_t windows = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 500;
  int threads = argc > 2 ? std::atoi(argv[2]) : 0;

  std::vector<BenchPoint> points = {
      {30, 100, 3, gfa::Alpha::finite(2)},
      {60, 100, 4, gfa::Alpha::finite(3)},
      {20, 100, 2, gfa::Alpha::unbounded()},
  };

  std::printf("%-24s %8s %12s %12s %9s %10s\n", "point", "windows", "serial_ms",
              "parallel_ms", "speedup", "identical");

  bool all_match = true;
  for (const auto& p : points) {
    gfa::SystemConfig config;
    config.n_devices = p.n;
    config.n_rbs = p.r;
    config.k_repetitions = p.k;
    config.alpha = p.alpha;
    config.pool = gfa::build_power_pool(3, config.channel);
    config.windows = windows;
    config.seed = 42;

    auto t0 = std::chrono::steady_clock::now();
    gfa::PointResult serial = gfa::run_point_serial(config);
    double serial_ms = ms_since(t0);

    t0 = std::chrono::steady_clock::now();
    gfa::PointResult parallel = gfa::run_point_detailed(config, {}, threads);
    double parallel_ms = ms_since(t0);

    bool identical = gfa::rows_to_csv({serial.row}) == gfa::rows_to_csv({parallel.row});
    all_match = all_match && identical;

    std::string label = "n=" + std::to_string(p.n) + " k=" + std::to_string(p.k) +
                        " alpha=" + p.alpha.str();
    std::printf("%-24s %8llu %12.1f %12.1f %8.2fx %10s\n", label.c_str(),
                static_cast<unsigned long long>(windows), serial_ms, parallel_ms,
                parallel_ms > 0 ? serial_ms / parallel_ms : 0.0,
                identical ? "yes" : "NO");
  }

  if (!all_match) {
    std::fprintf(stderr, "mismatch between serial and parallel rows\n");
    return 1;
  }
  return 0;
}
