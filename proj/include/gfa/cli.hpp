#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gfa/harness.hpp"
#include "gfa/model.hpp"

namespace gfa {

// Fully parsed and validated command line.
struct CliConfig {
  enum class Cmd { None, Run, Sweep, Oracle, Fixtures };
  Cmd cmd = Cmd::None;
  bool help_shown = false;  // --help/--version handled; do not execute
  bool quiet = false;

  SystemConfig config;  // run and oracle parameters
  SweepSpec sweep;      // sweep grid

  std::uint64_t budget_cells = 1'000'000;
  std::uint32_t max_iterations = 64;
  int threads = 0;  // 0 = GFA_THREADS or OpenMP default

  std::string out_path;
  std::string format = "csv";
  std::string plot_path;
  std::string trace_path;
  std::string fixture_path;
  std::string fixtures_dir = "fixtures";
};

// argv[0] is the program name. A --config JSON file, when present, supplies
// defaults that explicit flags override. Throws std::invalid_argument on
// any usage problem, listing every offending flag.
CliConfig parse_args(const std::vector<std::string>& args);

// Runs a parsed command; returns the process exit code (0 on success) and
// throws on failures (std::invalid_argument for config-level problems,
// other exceptions for runtime/I/O errors).
int execute(const CliConfig& config);

// parse + execute with the exit-code contract: 0 success, 1 runtime/I/O
// error, 2 usage error.
int cli_main(int argc, const char* const* argv);

}  // namespace gfa
