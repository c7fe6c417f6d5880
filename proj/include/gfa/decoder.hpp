#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "gfa/framegen.hpp"
#include "gfa/metrics.hpp"
#include "gfa/model.hpp"

namespace gfa {

// Decoded signals known to the receiver, with the iteration in which each
// device was first decoded (parallel arrays, pool order = discovery order).
struct MaiPool {
  std::vector<DecodedSignal> signals;
  std::vector<std::uint32_t> first_iteration;
};

enum class Termination {
  AlphaReached,   // iteration cap hit (configured alpha, or the safety cap)
  AllRecovered,   // every ground-truth device decoded
  Exhausted,      // no undeduplicated expansion left, or matrix budget spent
};

const char* termination_name(Termination t);

struct EngineOutcome {
  std::vector<std::uint32_t> decoded;  // ascending device ids
  std::uint32_t iterations_run = 0;
  Counters counters;
  Termination terminated_by = Termination::Exhausted;
  bool budget_hit = false;  // matrix budget stopped expansion
  bool cap_hit = false;     // safety iteration cap stopped an unbounded run
  MaiPool pool;
};

// One line of the optional per-iteration trace.
struct TraceRecord {
  std::uint32_t iteration = 0;
  std::uint64_t new_matrices = 0;
  std::vector<std::uint32_t> new_decoded;  // ascending
  std::uint64_t pool_size = 0;
};

struct EngineOptions {
  // Expansion stops once materialized matrices (M0 included, final-iteration
  // transients included) exceed this many RB cells; the window terminates
  // Exhausted with budget_hit set.
  std::uint64_t matrix_budget_cells = 1'000'000;
  // Safety cap for unbounded alpha; reported via cap_hit.
  std::uint32_t max_iterations = 64;
  std::function<void(const TraceRecord&)> trace;
  // Enumerate (frontier matrix, MAI) candidates in reverse within each
  // iteration; the decoded set must not change (order-independence testing).
  bool reverse_within_iteration = false;
};

// Per-RB power-domain SIC. Repeatedly decode the strongest real component
// whose power / (other reals + ghosts + noise) >= tau, remove it, repeat.
// Ghosts are never decodable and never removed. A shared top power stops
// the chain: no component is decodable under an exact power tie.
struct SicResult {
  std::vector<DecodedSignal> decoded;  // in decode order
  RbSignal residual;
};
SicResult sic_decode_rb(const RbSignal& rb, const ChannelParams& channel);

// Scans all R RBs of a matrix, unions the per-RB decodes (dedup by
// device_id, ascending), and admits only signals passing the CRC oracle:
// the device exists in the ground truth with that exact power.
// Adds R to counters.dec_ops.
std::vector<DecodedSignal> dec_crc(const SignalMatrix& matrix, const ChannelParams& channel,
                                   const AccessMap& truth, Counters& counters);

// Blind subtraction of one decoded signal from every RB: removes the real
// component where present, leaves a ghost of equal power where not.
// born_iteration is the engine iteration creating the branch.
// Adds 2R to counters.wr_ops. Throws std::logic_error on double subtraction.
SignalMatrix ic(const SignalMatrix& matrix, const DecodedSignal& mai,
                std::uint32_t born_iteration, Counters& counters);

// Full blind-IC iterative decode of one window.
//   Iteration 1: scan m0.
//   Iteration i: expand every frontier matrix (born i-1) by every pool
//   signal not in its lineage; lineage sets are canonical, so a set seen
//   anywhere before is skipped. New decodes join the pool at iteration end.
//   Stops on AlphaReached / AllRecovered / Exhausted (AllRecovered checked
//   first, as soon as coverage completes mid-iteration).
// m0 must be the raw superposition of truth (empty lineage); counters
// account the abstract process exactly (+R dec per matrix scanned, +2R wr
// per matrix materialized, peak storage sampled at iteration boundaries as
// frontier cells + pool size).
EngineOutcome run_engine(const SignalMatrix& m0, const SystemConfig& config,
                         const AccessMap& truth, const EngineOptions& options);
EngineOutcome run_engine(const SignalMatrix& m0, const SystemConfig& config,
                         const AccessMap& truth);

// Light per-window result for Monte Carlo aggregation.
struct WindowStats {
  std::uint32_t decoded_count = 0;
  std::uint32_t iterations_run = 0;
  Counters counters;
  Termination terminated_by = Termination::Exhausted;
  bool budget_hit = false;
  bool cap_hit = false;
};

// Reusable engine bound to one (config, options): builds the scaled tables
// once and recycles all search buffers across windows, so hot loops do not
// allocate. One runner per thread; a run is sequential and deterministic.
class EngineRunner {
 public:
  explicit EngineRunner(const SystemConfig& config, const EngineOptions& options = {});
  ~EngineRunner();
  EngineRunner(EngineRunner&&) noexcept;
  EngineRunner& operator=(EngineRunner&&) noexcept;

  WindowStats run_stats(const AccessMap& truth);
  EngineOutcome run_full(const AccessMap& truth);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// estimate_access over engine outcomes (adapter to the counts overload).
AccessStat estimate_access(const std::vector<EngineOutcome>& outcomes, std::uint32_t n);

}  // namespace gfa
