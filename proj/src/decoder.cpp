#include "gfa/decoder.hpp"

#include <algorithm>
#include <cstring>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "gfa/rng.hpp"

namespace gfa {

const char* termination_name(Termination t) {
  switch (t) {
    case Termination::AlphaReached: return "AlphaReached";
    case Termination::AllRecovered: return "AllRecovered";
    case Termination::Exhausted: return "Exhausted";
  }
  return "?";
}

namespace {

bool sic_order(const DecodedSignal& a, const DecodedSignal& b) {
  if (a.power != b.power) return b.power < a.power;
  return a.device_id < b.device_id;
}

}  // namespace

SicResult sic_decode_rb(const RbSignal& rb, const ChannelParams& channel) {
  SicResult out;
  std::vector<DecodedSignal> work = rb.real_components;
  std::sort(work.begin(), work.end(), sic_order);
  Rational interference(0);
  for (const Rational& g : rb.ghost_components) interference += g;
  Rational remaining(0);
  for (const DecodedSignal& c : work) remaining += c.power;

  std::size_t taken = 0;
  while (taken < work.size()) {
    const DecodedSignal& top = work[taken];
    // A shared top power is never decodable, regardless of tau.
    if (taken + 1 < work.size() && work[taken + 1].power == top.power) break;
    Rational denom = remaining - top.power + interference + channel.noise_power;
    if (top.power >= channel.tau * denom) {
      out.decoded.push_back(top);
      remaining -= top.power;
      ++taken;
    } else {
      break;
    }
  }

  out.residual.ghost_components = rb.ghost_components;
  for (const DecodedSignal& c : rb.real_components) {
    bool removed = false;
    for (std::size_t i = 0; i < taken && !removed; ++i)
      removed = work[i].device_id == c.device_id;
    if (!removed) out.residual.real_components.push_back(c);
  }
  return out;
}

std::vector<DecodedSignal> dec_crc(const SignalMatrix& matrix, const ChannelParams& channel,
                                   const AccessMap& truth, Counters& counters) {
  counters.dec_ops += matrix.rbs.size();
  std::vector<DecodedSignal> out;
  for (const RbSignal& rb : matrix.rbs) {
    SicResult res = sic_decode_rb(rb, channel);
    for (const DecodedSignal& sig : res.decoded) {
      // CRC oracle: only signals matching the ground truth validate.
      if (sig.device_id >= truth.devices.size()) continue;
      if (!(truth.devices[sig.device_id].power_level == sig.power)) continue;
      out.push_back(sig);
    }
  }
  std::sort(out.begin(), out.end(), [](const DecodedSignal& a, const DecodedSignal& b) {
    return a.device_id < b.device_id;
  });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const DecodedSignal& a, const DecodedSignal& b) {
                          return a.device_id == b.device_id;
                        }),
            out.end());
  return out;
}

SignalMatrix ic(const SignalMatrix& matrix, const DecodedSignal& mai,
                std::uint32_t born_iteration, Counters& counters) {
  if (std::find(matrix.lineage.begin(), matrix.lineage.end(), mai.device_id) !=
      matrix.lineage.end())
    throw std::logic_error("ic: double subtraction of device " + std::to_string(mai.device_id));

  SignalMatrix out;
  out.rbs.reserve(matrix.rbs.size());
  for (const RbSignal& rb : matrix.rbs) {
    RbSignal next;
    bool present = false;
    for (const DecodedSignal& c : rb.real_components) {
      if (c.device_id == mai.device_id) {
        present = true;  // perfect CSI: exact cancellation
        continue;
      }
      next.real_components.push_back(c);
    }
    next.ghost_components = rb.ghost_components;
    if (!present) next.ghost_components.push_back(mai.power);
    out.rbs.push_back(std::move(next));
  }
  out.lineage = matrix.lineage;
  out.lineage.insert(std::upper_bound(out.lineage.begin(), out.lineage.end(), mai.device_id),
                     mai.device_id);
  out.born_iteration = born_iteration;
  counters.wr_ops += 2 * matrix.rbs.size();
  return out;
}

// ---------------------------------------------------------------------------
// Engine internals. The search state lives on scaled integers: every power
// is expressed in units of 1/D watts for D = lcm of the pool and noise
// denominators, so the threshold test
//     power >= tau * (interference + noise)
// becomes  tau_den * u >= tau_num * (rest + ghosts + noise_u)  in __int128.
// A hypothesis matrix is represented by its lineage bitset plus the total
// subtracted units; per-RB contents are reconstructed from the ground-truth
// occupant lists, which is exact because a child differs from M0 only by
// removed reals (lineage members) and added ghosts (lineage sum minus the
// members present in the RB).
// ---------------------------------------------------------------------------

namespace {

constexpr std::uint32_t kEmptySlot = std::numeric_limits<std::uint32_t>::max();

std::int64_t lcm_checked(std::int64_t a, std::int64_t b) {
  __int128 l = static_cast<__int128>(a) / std::gcd(a, b) * b;
  if (l > INT64_MAX) throw std::overflow_error("engine: power denominators too large");
  return static_cast<std::int64_t>(l);
}

std::int64_t scale_units(const Rational& p, std::int64_t d) {
  __int128 u = static_cast<__int128>(p.num()) * (d / p.den());
  if (u > INT64_MAX || u < INT64_MIN) throw std::overflow_error("engine: scaled power too large");
  return static_cast<std::int64_t>(u);
}

}  // namespace

struct EngineRunner::Impl {
  SystemConfig config;
  EngineOptions options;

  std::uint32_t n = 0, r = 0, k = 0, words = 0;
  bool finite_alpha = false;
  std::uint32_t alpha_value = 0;
  std::int64_t tau_num = 1, tau_den = 1;
  std::int64_t noise_units = 0;
  std::int64_t scale_den = 1;
  std::vector<std::int64_t> level_units;

  // Per-window ground-truth tables.
  std::vector<std::int64_t> unit_of;   // device -> scaled power
  std::vector<std::uint32_t> dev_rb;   // flat N*K, ascending per device
  std::vector<std::uint32_t> occ_off;  // R+1 CSR offsets
  std::vector<std::uint32_t> occ;      // occupants per RB, ascending ids

  // Search state, reused across windows.
  std::vector<std::uint64_t> arena_bits;  // lineage rows, stride `words`
  std::vector<std::int64_t> arena_units;  // total subtracted units per row
  std::size_t arena_count = 0;
  std::vector<std::uint32_t> slots;
  std::vector<std::uint32_t> dirty_slots;
  std::size_t dedup_count = 0;
  std::vector<std::uint32_t> pool_dev;
  std::vector<std::int64_t> pool_units;
  std::vector<std::uint32_t> pool_iter;
  std::vector<std::uint64_t> decoded_bits;
  std::vector<std::uint32_t> pending;
  struct Real {
    std::int64_t u;
    std::uint32_t d;
  };
  std::vector<Real> reals;
  std::vector<std::uint64_t> child_bits;

  // Results of execute().
  std::uint32_t decoded_count = 0;
  std::uint32_t iterations = 0;
  Counters counters;
  Termination term = Termination::Exhausted;
  bool budget_hit = false;
  bool cap_hit = false;

  Impl(const SystemConfig& cfg, const EngineOptions& opts) : config(cfg), options(opts) {
    validate_config(config);
    n = config.n_devices;
    r = config.n_rbs;
    k = config.k_repetitions;
    words = (n + 63) / 64;
    finite_alpha = !config.alpha.is_unbounded();
    alpha_value = finite_alpha ? config.alpha.value() : 0;

    tau_num = config.channel.tau.num();
    tau_den = config.channel.tau.den();
    scale_den = config.channel.noise_power.den();
    for (const Rational& lvl : config.pool.levels) scale_den = lcm_checked(scale_den, lvl.den());
    noise_units = scale_units(config.channel.noise_power, scale_den);
    level_units.clear();
    for (const Rational& lvl : config.pool.levels)
      level_units.push_back(scale_units(lvl, scale_den));

    // Any denominator the SINR test can see must fit int64: all devices'
    // units plus an equal ghost load plus noise.
    __int128 worst = (static_cast<__int128>(level_units.back()) * n) * 2 + noise_units;
    if (worst > INT64_MAX) throw std::overflow_error("engine: scaled powers too large");

    unit_of.resize(n);
    dev_rb.resize(static_cast<std::size_t>(n) * k);
    occ_off.resize(r + 1);
    occ.resize(static_cast<std::size_t>(n) * k);
    decoded_bits.resize(words);
    child_bits.resize(words);
    slots.assign(1u << 10, kEmptySlot);
  }

  static bool bit_test(const std::uint64_t* row, std::uint32_t i) {
    return (row[i >> 6] >> (i & 63)) & 1u;
  }

  std::uint64_t hash_row(const std::uint64_t* row) const {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (std::uint32_t w = 0; w < words; ++w) h = mix64(h ^ row[w]);
    return h;
  }

  bool rows_equal(const std::uint64_t* a, const std::uint64_t* b) const {
    for (std::uint32_t w = 0; w < words; ++w)
      if (a[w] != b[w]) return false;
    return true;
  }

  const std::uint64_t* arena_row(std::size_t idx) const { return &arena_bits[idx * words]; }

  void build_tables(const AccessMap& truth) {
    if (truth.devices.size() != n)
      throw std::invalid_argument("run_engine: truth device count != config.n_devices");
    std::fill(occ_off.begin(), occ_off.end(), 0u);
    for (std::uint32_t d = 0; d < n; ++d) {
      const DeviceAccess& dev = truth.devices[d];
      if (dev.rb_choices.size() != k)
        throw std::invalid_argument("run_engine: device rb count != k_repetitions");
      std::size_t li = 0;
      while (li < level_units.size() && !(config.pool.levels[li] == dev.power_level)) ++li;
      if (li == level_units.size())
        throw std::invalid_argument("run_engine: device power not in pool");
      unit_of[d] = level_units[li];

      std::uint32_t* slot = &dev_rb[static_cast<std::size_t>(d) * k];
      for (std::uint32_t i = 0; i < k; ++i) {
        std::uint32_t rb = dev.rb_choices[i];
        if (rb >= r) throw std::invalid_argument("run_engine: rb index out of range");
        slot[i] = rb;
      }
      std::sort(slot, slot + k);
      for (std::uint32_t i = 1; i < k; ++i)
        if (slot[i] == slot[i - 1])
          throw std::invalid_argument("run_engine: duplicate rb choice for one device");
      for (std::uint32_t i = 0; i < k; ++i) ++occ_off[slot[i] + 1];
    }
    for (std::uint32_t rb = 0; rb < r; ++rb) occ_off[rb + 1] += occ_off[rb];
    std::vector<std::uint32_t> fill(occ_off.begin(), occ_off.end() - 1);
    for (std::uint32_t d = 0; d < n; ++d) {
      const std::uint32_t* slot = &dev_rb[static_cast<std::size_t>(d) * k];
      for (std::uint32_t i = 0; i < k; ++i) occ[fill[slot[i]]++] = d;
    }
  }

  // --- dedup set over lineage rows (open addressing, arena-backed keys) ---

  void dedup_clear() {
    if (dirty_slots.size() < slots.size() / 8) {
      for (std::uint32_t pos : dirty_slots) slots[pos] = kEmptySlot;
    } else {
      std::fill(slots.begin(), slots.end(), kEmptySlot);
    }
    dirty_slots.clear();
    dedup_count = 0;
  }

  void dedup_grow() {
    std::size_t cap = slots.size() * 2;
    slots.assign(cap, kEmptySlot);
    dirty_slots.clear();
    // Rows 1..arena_count-1 are exactly the inserted keys (row 0 is M0).
    for (std::size_t idx = 1; idx < arena_count; ++idx) {
      std::uint64_t pos = hash_row(arena_row(idx)) & (cap - 1);
      while (slots[pos] != kEmptySlot) pos = (pos + 1) & (cap - 1);
      slots[pos] = static_cast<std::uint32_t>(idx);
      dirty_slots.push_back(static_cast<std::uint32_t>(pos));
    }
  }

  // True if `key` is already present; otherwise reports the free slot.
  bool dedup_contains(const std::uint64_t* key, std::uint64_t* out_pos) const {
    std::uint64_t mask = slots.size() - 1;
    std::uint64_t pos = hash_row(key) & mask;
    while (true) {
      std::uint32_t v = slots[pos];
      if (v == kEmptySlot) {
        *out_pos = pos;
        return false;
      }
      if (rows_equal(arena_row(v), key)) return true;
      pos = (pos + 1) & mask;
    }
  }

  void dedup_place(std::uint64_t pos, std::uint32_t idx) {
    slots[pos] = idx;
    dirty_slots.push_back(static_cast<std::uint32_t>(pos));
    ++dedup_count;
    if (dedup_count * 10 >= slots.size() * 7) dedup_grow();
  }

  // --- per-RB SIC on the scaled representation ---

  // lineage == nullptr scans M0 itself.
  void scan_rb(std::uint32_t rb, const std::uint64_t* lineage, std::int64_t lineage_units) {
    reals.clear();
    std::int64_t present = 0;
    for (std::uint32_t idx = occ_off[rb]; idx < occ_off[rb + 1]; ++idx) {
      std::uint32_t d = occ[idx];
      if (lineage != nullptr && bit_test(lineage, d))
        present += unit_of[d];
      else
        reals.push_back({unit_of[d], d});
    }
    std::int64_t ghost = lineage_units - present;
    std::int64_t total = 0;
    for (const Real& rc : reals) total += rc.u;
    // Strongest first, lowest id on equal power (occupants arrive ascending,
    // and insertion keeps the order stable).
    for (std::size_t i = 1; i < reals.size(); ++i) {
      Real v = reals[i];
      std::size_t j = i;
      while (j > 0 && reals[j - 1].u < v.u) {
        reals[j] = reals[j - 1];
        --j;
      }
      reals[j] = v;
    }
    for (std::size_t i = 0; i < reals.size(); ++i) {
      const Real& rc = reals[i];
      // A shared top power is never decodable, regardless of tau.
      if (i + 1 < reals.size() && reals[i + 1].u == rc.u) break;
      std::int64_t denom = (total - rc.u) + ghost + noise_units;
      if (static_cast<__int128>(tau_den) * rc.u >= static_cast<__int128>(tau_num) * denom) {
        total -= rc.u;
        if (!bit_test(decoded_bits.data(), rc.d)) {
          decoded_bits[rc.d >> 6] |= std::uint64_t{1} << (rc.d & 63);
          pending.push_back(rc.d);
          ++decoded_count;
        }
      } else {
        break;
      }
    }
  }

  // New decodes join the pool at iteration end, in ascending id order.
  void flush(std::uint32_t iteration, std::uint64_t new_matrices) {
    std::sort(pending.begin(), pending.end());
    for (std::uint32_t d : pending) {
      pool_dev.push_back(d);
      pool_units.push_back(unit_of[d]);
      pool_iter.push_back(iteration);
    }
    if (options.trace) {
      TraceRecord rec;
      rec.iteration = iteration;
      rec.new_matrices = new_matrices;
      rec.new_decoded = pending;
      rec.pool_size = pool_dev.size();
      options.trace(rec);
    }
    pending.clear();
  }

  void execute(const AccessMap& truth) {
    build_tables(truth);

    arena_bits.assign(words, 0);  // row 0 = M0
    arena_units.assign(1, 0);
    arena_count = 1;
    dedup_clear();
    pool_dev.clear();
    pool_units.clear();
    pool_iter.clear();
    std::fill(decoded_bits.begin(), decoded_bits.end(), 0);
    pending.clear();
    decoded_count = 0;
    counters = Counters{};
    budget_hit = false;
    cap_hit = false;

    std::uint64_t cells = r;  // M0 is materialized
    std::uint64_t peak = r;   // entering iteration 1: M0, empty pool

    counters.dec_ops += r;
    for (std::uint32_t rb = 0; rb < r; ++rb) scan_rb(rb, nullptr, 0);
    iterations = 1;
    flush(1, 0);
    if (decoded_count == n) {
      term = Termination::AllRecovered;
      counters.peak_storage = peak;
      return;
    }

    std::size_t fr_begin = 0, fr_end = 1;
    while (true) {
      if (finite_alpha && iterations == alpha_value) {
        term = Termination::AlphaReached;
        break;
      }
      if (!finite_alpha && iterations >= options.max_iterations) {
        term = Termination::AlphaReached;
        cap_hit = true;
        break;
      }
      std::uint32_t next_i = iterations + 1;
      bool final_iter = finite_alpha && next_i == alpha_value;
      std::uint64_t live = static_cast<std::uint64_t>(r) * (fr_end - fr_begin) + pool_dev.size();
      if (live > peak) peak = live;

      std::uint64_t new_borns = 0;
      bool budget_stop = false;
      std::size_t pool_n = pool_dev.size();
      bool all_recovered = false;

      for (std::size_t mm = 0; mm < fr_end - fr_begin && !budget_stop && !all_recovered; ++mm) {
        std::size_t mi =
            options.reverse_within_iteration ? fr_end - 1 - mm : fr_begin + mm;
        const std::int64_t m_units = arena_units[mi];
        for (std::size_t ss = 0; ss < pool_n; ++ss) {
          std::size_t si = options.reverse_within_iteration ? pool_n - 1 - ss : ss;
          std::uint32_t s = pool_dev[si];
          const std::uint64_t* m_row = arena_row(mi);
          if (bit_test(m_row, s)) continue;
          for (std::uint32_t w = 0; w < words; ++w) child_bits[w] = m_row[w];
          child_bits[s >> 6] |= std::uint64_t{1} << (s & 63);

          std::uint64_t pos = 0;
          if (dedup_contains(child_bits.data(), &pos)) continue;
          if (cells + r > options.matrix_budget_cells) {
            budget_stop = true;
            break;
          }
          std::uint32_t idx = static_cast<std::uint32_t>(arena_count);
          arena_bits.insert(arena_bits.end(), child_bits.begin(), child_bits.end());
          arena_units.push_back(m_units + pool_units[si]);
          ++arena_count;
          dedup_place(pos, idx);
          cells += r;
          ++new_borns;
          counters.wr_ops += 2 * static_cast<std::uint64_t>(r);
          counters.dec_ops += r;

          // A child differs from its parent only where s's replicas were
          // removed; every other RB gains a ghost, which can only shrink
          // that RB's decodable set below the parent's already-harvested
          // scan. So scanning s's K RBs finds every new decode.
          const std::uint32_t* rbs_of_s = &dev_rb[static_cast<std::size_t>(s) * k];
          const std::uint64_t* child_row = arena_row(idx);
          const std::int64_t child_units = arena_units[idx];
          for (std::uint32_t i = 0; i < k; ++i) scan_rb(rbs_of_s[i], child_row, child_units);

          if (decoded_count == n) {
            all_recovered = true;
            break;
          }
        }
      }

      if (new_borns == 0) {
        // Nothing materialized: every candidate was a lineage member or a
        // duplicate (or the budget blocked the first one).
        term = Termination::Exhausted;
        budget_hit = budget_stop;
        break;
      }
      iterations = next_i;
      flush(next_i, new_borns);
      if (all_recovered) {
        term = Termination::AllRecovered;
        break;
      }
      if (budget_stop) {
        term = Termination::Exhausted;
        budget_hit = true;
        break;
      }
      if (final_iter) {
        // Loop head would stop anyway; final-iteration borns are
        // scan-transients and never become a frontier.
        term = Termination::AlphaReached;
        break;
      }
      fr_begin = fr_end;
      fr_end = arena_count;
    }

    counters.peak_storage = peak;
  }

  WindowStats stats() const {
    WindowStats ws;
    ws.decoded_count = decoded_count;
    ws.iterations_run = iterations;
    ws.counters = counters;
    ws.terminated_by = term;
    ws.budget_hit = budget_hit;
    ws.cap_hit = cap_hit;
    return ws;
  }
};

EngineRunner::EngineRunner(const SystemConfig& config, const EngineOptions& options)
    : impl_(new Impl(config, options)) {}
EngineRunner::~EngineRunner() = default;
EngineRunner::EngineRunner(EngineRunner&&) noexcept = default;
EngineRunner& EngineRunner::operator=(EngineRunner&&) noexcept = default;

WindowStats EngineRunner::run_stats(const AccessMap& truth) {
  impl_->execute(truth);
  return impl_->stats();
}

EngineOutcome EngineRunner::run_full(const AccessMap& truth) {
  impl_->execute(truth);
  EngineOutcome out;
  out.decoded = impl_->pool_dev;
  std::sort(out.decoded.begin(), out.decoded.end());
  out.iterations_run = impl_->iterations;
  out.counters = impl_->counters;
  out.terminated_by = impl_->term;
  out.budget_hit = impl_->budget_hit;
  out.cap_hit = impl_->cap_hit;
  for (std::size_t i = 0; i < impl_->pool_dev.size(); ++i) {
    std::uint32_t d = impl_->pool_dev[i];
    out.pool.signals.push_back({d, truth.devices[d].power_level});
    out.pool.first_iteration.push_back(impl_->pool_iter[i]);
  }
  return out;
}

EngineOutcome run_engine(const SignalMatrix& m0, const SystemConfig& config,
                         const AccessMap& truth, const EngineOptions& options) {
  if (!m0.lineage.empty())
    throw std::invalid_argument("run_engine: m0 must have empty lineage");
  if (m0.born_iteration != 0)
    throw std::invalid_argument("run_engine: m0 must have born_iteration 0");
  SignalMatrix expect = superpose(truth, config);
  if (m0.rbs.size() != expect.rbs.size())
    throw std::invalid_argument("run_engine: m0 has wrong RB count");
  for (std::size_t rb = 0; rb < expect.rbs.size(); ++rb) {
    if (!m0.rbs[rb].ghost_components.empty())
      throw std::invalid_argument("run_engine: m0 must be a raw superposition (no ghosts)");
    std::vector<DecodedSignal> got = m0.rbs[rb].real_components;
    std::sort(got.begin(), got.end(), [](const DecodedSignal& a, const DecodedSignal& b) {
      return a.device_id < b.device_id;
    });
    if (!(got == expect.rbs[rb].real_components))
      throw std::invalid_argument("run_engine: m0 does not match the superposition of truth");
  }
  EngineRunner runner(config, options);
  return runner.run_full(truth);
}

EngineOutcome run_engine(const SignalMatrix& m0, const SystemConfig& config,
                         const AccessMap& truth) {
  return run_engine(m0, config, truth, EngineOptions{});
}

AccessStat estimate_access(const std::vector<EngineOutcome>& outcomes, std::uint32_t n) {
  std::vector<std::uint32_t> counts;
  counts.reserve(outcomes.size());
  for (const EngineOutcome& o : outcomes)
    counts.push_back(static_cast<std::uint32_t>(o.decoded.size()));
  return estimate_access(counts, n);
}

}  // namespace gfa
