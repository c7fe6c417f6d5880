#include <doctest.h>

#include <algorithm>
#include <set>
#include <stdexcept>
#include <vector>

#include "fixtures.hpp"
#include "gfa/decoder.hpp"
#include "gfa/framegen.hpp"
#include "gfa/model.hpp"
#include "gfa/rng.hpp"

using namespace gfa;

namespace {

RbSignal make_rb(std::vector<DecodedSignal> reals, std::vector<Rational> ghosts = {}) {
  RbSignal rb;
  rb.real_components = std::move(reals);
  rb.ghost_components = std::move(ghosts);
  return rb;
}

std::vector<std::uint32_t> ids_of(const std::vector<DecodedSignal>& sigs) {
  std::vector<std::uint32_t> ids;
  for (const auto& s : sigs) ids.push_back(s.device_id);
  return ids;
}

SystemConfig random_config(std::uint32_t n, std::uint32_t r, std::uint32_t k, Alpha alpha) {
  SystemConfig c;
  c.n_devices = n;
  c.n_rbs = r;
  c.k_repetitions = k;
  c.alpha = alpha;
  c.pool = build_power_pool(3, c.channel);
  return c;
}

}  // namespace

TEST_CASE("per-RB SIC peels strictly dominant components") {
  ChannelParams ch;  // tau = 1, noise = 1

  SUBCASE("dominant chain decodes fully") {
    SicResult res = sic_decode_rb(make_rb({{1, Rational(4)}, {2, Rational(2)}}), ch);
    CHECK(ids_of(res.decoded) == std::vector<std::uint32_t>{1, 2});
    CHECK(res.residual.real_components.empty());
    CHECK(res.residual.ghost_components.empty());
  }

  SUBCASE("equal powers block each other") {
    SicResult res = sic_decode_rb(make_rb({{1, Rational(1)}, {2, Rational(1)}}), ch);
    CHECK(res.decoded.empty());
    CHECK(res.residual.real_components.size() == 2);
  }

  SUBCASE("an exclusive component decodes at the threshold boundary") {
    SicResult res = sic_decode_rb(make_rb({{1, Rational(1)}}), ch);
    CHECK(ids_of(res.decoded) == std::vector<std::uint32_t>{1});
  }

  SUBCASE("ghosts interfere but never decode and never leave") {
    SicResult res = sic_decode_rb(make_rb({{1, Rational(4)}}, {Rational(2)}), ch);
    CHECK(ids_of(res.decoded) == std::vector<std::uint32_t>{1});
    CHECK(res.residual.real_components.empty());
    CHECK(res.residual.ghost_components == std::vector<Rational>{Rational(2)});

    SicResult only_ghost = sic_decode_rb(make_rb({}, {Rational(5)}), ch);
    CHECK(only_ghost.decoded.empty());
    CHECK(only_ghost.residual.ghost_components == std::vector<Rational>{Rational(5)});
  }

  SUBCASE("a ghost can push a component below the threshold") {
    SicResult res =
        sic_decode_rb(make_rb({{1, Rational(4)}, {2, Rational(2)}}, {Rational(2)}), ch);
    CHECK(res.decoded.empty());  // 4 / (2 + 2 + 1) < 1
    CHECK(res.residual.real_components.size() == 2);
  }

  SUBCASE("empty RB decodes nothing") {
    CHECK(sic_decode_rb(RbSignal{}, ch).decoded.empty());
  }

  SUBCASE("a shared top power blocks decoding even under a permissive threshold") {
    ChannelParams loose;
    loose.tau = Rational(1, 4);
    SicResult res =
        sic_decode_rb(make_rb({{1, Rational(4)}, {2, Rational(4)}}), loose);
    CHECK(res.decoded.empty());
    // The tie rule binds only the top; a strictly dominant component above
    // a tied pair still decodes, then stops at the tie.
    SicResult dominated = sic_decode_rb(
        make_rb({{1, Rational(9)}, {2, Rational(1)}, {3, Rational(1)}}), loose);
    CHECK(ids_of(dominated.decoded) == std::vector<std::uint32_t>{1});
  }
}

TEST_CASE("matrix scan unions RBs and validates against ground truth") {
  ChannelParams ch;
  Counters counters;

  AccessMap truth;
  truth.devices = {
      {0, {0, 1}, Rational(4)},
      {1, {1, 2}, Rational(1)},
  };
  SystemConfig cfg = random_config(2, 3, 2, Alpha::finite(1));
  SignalMatrix m0 = superpose(truth, cfg);

  SUBCASE("decodes across RBs, deduplicated and ascending") {
    auto out = dec_crc(m0, ch, truth, counters);
    // RB0: dev0 alone; RB1: 4/(1+1) >= 1 then 1/1 >= 1; RB2: dev1 alone.
    CHECK(ids_of(out) == std::vector<std::uint32_t>{0, 1});
    CHECK(counters.dec_ops == 3);
  }

  SUBCASE("empty matrix yields nothing but still costs a scan pass") {
    SignalMatrix empty;
    empty.rbs.resize(5);
    CHECK(dec_crc(empty, ch, truth, counters).empty());
    CHECK(counters.dec_ops == 5);
  }

  SUBCASE("equal-power pairs everywhere yield nothing") {
    AccessMap pairs;
    pairs.devices = {
        {0, {0, 1}, Rational(2)},
        {1, {0, 1}, Rational(2)},
    };
    SignalMatrix m = superpose(pairs, random_config(2, 2, 2, Alpha::finite(1)));
    CHECK(dec_crc(m, ch, pairs, counters).empty());
  }

  SUBCASE("signals failing the integrity oracle are dropped") {
    SignalMatrix forged;
    forged.rbs.resize(3);
    forged.rbs[0].real_components = {{0, Rational(16)}};  // truth says power 4
    forged.rbs[1].real_components = {{7, Rational(4)}};   // no such device
    CHECK(dec_crc(forged, ch, truth, counters).empty());
  }
}

TEST_CASE("blind subtraction removes replicas and leaves ghosts elsewhere") {
  Counters counters;
  AccessMap truth;
  truth.devices = {
      {0, {1, 2, 7}, Rational(2)},
      {1, {0, 1}, Rational(1)},
  };
  // Hand-built m0 (device 1 carries fewer replicas; ic does not care).
  SignalMatrix m0;
  m0.rbs.resize(10);
  for (const auto& dev : truth.devices)
    for (auto rb : dev.rb_choices)
      m0.rbs[rb].real_components.push_back({dev.device_id, dev.power_level});

  SUBCASE("replicas removed, seven ghosts added") {
    SignalMatrix out = ic(m0, {0, Rational(2)}, 2, counters);
    CHECK(out.lineage == std::vector<std::uint32_t>{0});
    CHECK(out.born_iteration == 2);
    CHECK(counters.wr_ops == 20);
    for (std::uint32_t rb = 0; rb < 10; ++rb) {
      for (const auto& c : out.rbs[rb].real_components) CHECK(c.device_id != 0);
      bool had_dev0 = rb == 1 || rb == 2 || rb == 7;
      CHECK(out.rbs[rb].ghost_components.size() == (had_dev0 ? 0u : 1u));
      if (!had_dev0) CHECK(out.rbs[rb].ghost_components[0] == Rational(2));
    }
  }

  SUBCASE("subtracting a device occupying every RB leaves no ghosts") {
    AccessMap full;
    full.devices = {{0, {0, 1, 2}, Rational(1)}};
    SignalMatrix m;
    m.rbs.resize(3);
    for (auto rb : full.devices[0].rb_choices)
      m.rbs[rb].real_components.push_back({0, Rational(1)});
    SignalMatrix out = ic(m, {0, Rational(1)}, 2, counters);
    for (const auto& rb : out.rbs) {
      CHECK(rb.real_components.empty());
      CHECK(rb.ghost_components.empty());
    }
  }

  SUBCASE("lineage stays sorted across subtraction order") {
    SignalMatrix a = ic(m0, {1, Rational(1)}, 2, counters);
    SignalMatrix b = ic(a, {0, Rational(2)}, 3, counters);
    CHECK(b.lineage == std::vector<std::uint32_t>{0, 1});
    CHECK(b.born_iteration == 3);
  }

  SUBCASE("double subtraction along a lineage is a logic error") {
    SignalMatrix once = ic(m0, {0, Rational(2)}, 2, counters);
    CHECK_THROWS_AS(ic(once, {0, Rational(2)}, 3, counters), std::logic_error);
  }
}

TEST_CASE("two blind subtractions expose the chained device's RB") {
  Counters counters;
  AccessMap map = testfix::chain_map();
  SystemConfig cfg = testfix::chain_config(Alpha::finite(3));
  SignalMatrix m0 = superpose(map, cfg);
  SignalMatrix m1 = ic(m0, {0, Rational(1)}, 2, counters);
  SignalMatrix m2 = ic(m1, {1, Rational(1)}, 3, counters);
  REQUIRE(m2.rbs[1].real_components.size() == 1);
  CHECK(m2.rbs[1].real_components[0].device_id == 2);
  CHECK(m2.rbs[1].ghost_components.empty());
}

TEST_CASE("engine depth gates the chained device") {
  AccessMap map = testfix::chain_map();

  SUBCASE("depth 1 is the plain scan") {
    SystemConfig cfg = testfix::chain_config(Alpha::finite(1));
    EngineOutcome out = run_engine(superpose(map, cfg), cfg, map);
    CHECK(out.decoded == std::vector<std::uint32_t>{0, 1, 3, 4});
    CHECK(out.iterations_run == 1);
    CHECK(out.terminated_by == Termination::AlphaReached);
    CHECK(out.counters.dec_ops == 10);
    CHECK(out.counters.wr_ops == 0);
    CHECK(out.counters.peak_storage == 10);
  }

  SUBCASE("depth 2 cannot reach device 2") {
    SystemConfig cfg = testfix::chain_config(Alpha::finite(2));
    EngineOutcome out = run_engine(superpose(map, cfg), cfg, map);
    CHECK(out.decoded == std::vector<std::uint32_t>{0, 1, 3, 4});
    CHECK(out.iterations_run == 2);
    CHECK(out.terminated_by == Termination::AlphaReached);
  }

  SUBCASE("depth 3 recovers everyone via the pair subtraction") {
    SystemConfig cfg = testfix::chain_config(Alpha::finite(3));
    std::vector<TraceRecord> trace;
    EngineOptions opt;
    opt.trace = [&trace](const TraceRecord& rec) { trace.push_back(rec); };
    EngineOutcome out = run_engine(superpose(map, cfg), cfg, map, opt);
    CHECK(out.decoded == std::vector<std::uint32_t>{0, 1, 2, 3, 4});
    CHECK(out.iterations_run == 3);
    CHECK(out.terminated_by == Termination::AllRecovered);

    REQUIRE(trace.size() == 3);
    CHECK(trace[0].iteration == 1);
    CHECK(trace[0].new_matrices == 0);
    CHECK(trace[0].new_decoded == std::vector<std::uint32_t>{0, 1, 3, 4});
    CHECK(trace[0].pool_size == 4);
    CHECK(trace[1].new_matrices == 4);  // one branch per pooled signal
    CHECK(trace[1].new_decoded.empty());
    CHECK(trace[2].new_decoded == std::vector<std::uint32_t>{2});
    CHECK(trace[2].pool_size == 5);

    // Exact accounting: 1 scan + 4 + 1 materializations, peak at the
    // third iteration boundary (4 frontier matrices + 4 pooled signals).
    CHECK(out.counters.dec_ops == 60);
    CHECK(out.counters.wr_ops == 100);
    CHECK(out.counters.peak_storage == 44);

    // Pool preserves discovery order with first-decode iterations.
    REQUIRE(out.pool.signals.size() == 5);
    CHECK(out.pool.signals[4].device_id == 2);
    CHECK(out.pool.first_iteration ==
          std::vector<std::uint32_t>{1, 1, 1, 1, 3});
  }

  SUBCASE("unbounded depth matches depth 3 here") {
    SystemConfig cfg = testfix::chain_config(Alpha::unbounded());
    EngineOutcome out = run_engine(superpose(map, cfg), cfg, map);
    CHECK(out.decoded == std::vector<std::uint32_t>{0, 1, 2, 3, 4});
    CHECK(out.terminated_by == Termination::AllRecovered);
    CHECK(!out.cap_hit);
  }
}

TEST_CASE("a single device always decodes in one iteration") {
  SystemConfig cfg = random_config(1, 7, 3, Alpha::unbounded());
  Rng rng(11);
  AccessMap map = generate_access_map(cfg, rng);
  EngineOutcome out = run_engine(superpose(map, cfg), cfg, map);
  CHECK(out.decoded == std::vector<std::uint32_t>{0});
  CHECK(out.iterations_run == 1);
  CHECK(out.terminated_by == Termination::AllRecovered);
}

TEST_CASE("depth 1 equals the plain matrix scan on random realizations") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    SystemConfig cfg = random_config(2 + seed % 9, 6 + seed % 5, 1 + seed % 3,
                                     Alpha::finite(1));
    Rng rng(derive_seed(99, seed));
    AccessMap map = generate_access_map(cfg, rng);
    SignalMatrix m0 = superpose(map, cfg);
    EngineOutcome out = run_engine(m0, cfg, map);
    Counters scratch;
    auto direct = dec_crc(m0, cfg.channel, map, scratch);
    CHECK(out.decoded == ids_of(direct));
  }
}

TEST_CASE("decoded sets grow with depth and include exclusive-RB devices") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    SystemConfig base = random_config(4 + seed % 8, 8, 2 + seed % 2,
                                      Alpha::finite(1));
    Rng rng(derive_seed(7, seed));
    AccessMap map = generate_access_map(base, rng);
    SignalMatrix m0 = superpose(map, base);

    std::set<std::uint32_t> exclusive;
    for (const auto& rb : m0.rbs)
      if (rb.real_components.size() == 1)
        exclusive.insert(rb.real_components[0].device_id);

    std::vector<std::uint32_t> prev;
    for (std::uint32_t a = 1; a <= 4; ++a) {
      SystemConfig cfg = base;
      cfg.alpha = a == 4 ? Alpha::unbounded() : Alpha::finite(a);
      EngineOutcome out = run_engine(m0, cfg, map);
      CHECK(std::includes(out.decoded.begin(), out.decoded.end(), prev.begin(),
                          prev.end()));
      if (a == 1)
        for (auto d : exclusive) CHECK(std::count(out.decoded.begin(), out.decoded.end(), d));
      prev = out.decoded;
    }
  }
}

TEST_CASE("the decoded set ignores expansion order within an iteration") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    SystemConfig cfg = random_config(3 + seed % 8, 6 + seed % 4, 1 + seed % 3,
                                     Alpha::unbounded());
    Rng rng(derive_seed(1234, seed));
    AccessMap map = generate_access_map(cfg, rng);
    SignalMatrix m0 = superpose(map, cfg);
    EngineOutcome fwd = run_engine(m0, cfg, map);
    EngineOptions rev;
    rev.reverse_within_iteration = true;
    EngineOutcome bwd = run_engine(m0, cfg, map, rev);
    CHECK(fwd.decoded == bwd.decoded);
  }
}

TEST_CASE("engine rejects anything but the raw superposition") {
  AccessMap map = testfix::chain_map();
  SystemConfig cfg = testfix::chain_config(Alpha::finite(2));
  SignalMatrix m0 = superpose(map, cfg);

  SignalMatrix tainted = m0;
  tainted.lineage = {0};
  CHECK_THROWS_AS(run_engine(tainted, cfg, map), std::invalid_argument);

  SignalMatrix wrong_r = m0;
  wrong_r.rbs.pop_back();
  CHECK_THROWS_AS(run_engine(wrong_r, cfg, map), std::invalid_argument);

  SignalMatrix ghosted = m0;
  ghosted.rbs[0].ghost_components.push_back(Rational(1));
  CHECK_THROWS_AS(run_engine(ghosted, cfg, map), std::invalid_argument);

  SignalMatrix forged = m0;
  forged.rbs[1].real_components[0].power = Rational(4);
  CHECK_THROWS_AS(run_engine(forged, cfg, map), std::invalid_argument);
}

TEST_CASE("a tight matrix budget stops expansion and reports it") {
  AccessMap map = testfix::chain_map();
  SystemConfig cfg = testfix::chain_config(Alpha::unbounded());
  SignalMatrix m0 = superpose(map, cfg);

  EngineOptions opt;
  opt.matrix_budget_cells = 15;  // M0 costs 10; no child fits
  EngineOutcome out = run_engine(m0, cfg, map, opt);
  CHECK(out.decoded == std::vector<std::uint32_t>{0, 1, 3, 4});
  CHECK(out.iterations_run == 1);
  CHECK(out.terminated_by == Termination::Exhausted);
  CHECK(out.budget_hit);

  opt.matrix_budget_cells = 25;  // one child fits, the second does not
  EngineOutcome mid = run_engine(m0, cfg, map, opt);
  CHECK(mid.iterations_run == 2);
  CHECK(mid.terminated_by == Termination::Exhausted);
  CHECK(mid.budget_hit);

  opt.matrix_budget_cells = 1'000'000;
  EngineOutcome free_run = run_engine(m0, cfg, map, opt);
  CHECK(!free_run.budget_hit);
  CHECK(free_run.decoded.size() == 5);
}

TEST_CASE("the safety cap bounds unbounded-depth runs and is reported") {
  AccessMap map = testfix::chain_map();
  SystemConfig cfg = testfix::chain_config(Alpha::unbounded());
  EngineOptions opt;
  opt.max_iterations = 2;
  EngineOutcome out = run_engine(superpose(map, cfg), cfg, map, opt);
  CHECK(out.decoded == std::vector<std::uint32_t>{0, 1, 3, 4});
  CHECK(out.iterations_run == 2);
  CHECK(out.terminated_by == Termination::AlphaReached);
  CHECK(out.cap_hit);

  // Finite alpha never consults the cap.
  SystemConfig fin = testfix::chain_config(Alpha::finite(3));
  EngineOutcome deep = run_engine(superpose(map, fin), fin, map, opt);
  CHECK(deep.decoded.size() == 5);
  CHECK(!deep.cap_hit);
}

TEST_CASE("an isolated clique exhausts without recovering anyone") {
  // Two devices, same two RBs, same level: nothing ever decodes, and after
  // the first scan there is no pool to expand with.
  AccessMap map;
  map.devices = {
      {0, {0, 1}, Rational(1)},
      {1, {0, 1}, Rational(1)},
  };
  SystemConfig cfg = random_config(2, 2, 2, Alpha::unbounded());
  EngineOutcome out = run_engine(superpose(map, cfg), cfg, map);
  CHECK(out.decoded.empty());
  CHECK(out.iterations_run == 1);
  CHECK(out.terminated_by == Termination::Exhausted);
  CHECK(!out.budget_hit);
}

TEST_CASE("a runner is fully reusable across windows") {
  SystemConfig cfg = random_config(8, 10, 2, Alpha::unbounded());
  Rng rng(5);
  AccessMap a = generate_access_map(cfg, rng);
  AccessMap b = generate_access_map(cfg, rng);

  EngineRunner runner(cfg);
  EngineOutcome first = runner.run_full(a);
  EngineOutcome other = runner.run_full(b);
  EngineOutcome again = runner.run_full(a);

  CHECK(first.decoded == again.decoded);
  CHECK(first.iterations_run == again.iterations_run);
  CHECK(first.counters.wr_ops == again.counters.wr_ops);
  CHECK(first.counters.dec_ops == again.counters.dec_ops);
  CHECK(first.counters.peak_storage == again.counters.peak_storage);

  EngineRunner fresh(cfg);
  EngineOutcome ref = fresh.run_full(b);
  CHECK(other.decoded == ref.decoded);
  CHECK(other.counters.peak_storage == ref.counters.peak_storage);

  WindowStats ws = runner.run_stats(a);
  CHECK(ws.decoded_count == first.decoded.size());
  CHECK(ws.iterations_run == first.iterations_run);
  CHECK(ws.terminated_by == first.terminated_by);
  CHECK(ws.counters.dec_ops == first.counters.dec_ops);
}

TEST_CASE("fractional channel constants run exactly") {
  ChannelParams ch;
  ch.tau = Rational(1, 2);
  ch.noise_power = Rational(3, 4);
  SystemConfig cfg;
  cfg.n_devices = 3;
  cfg.n_rbs = 4;
  cfg.k_repetitions = 2;
  cfg.alpha = Alpha::unbounded();
  cfg.channel = ch;
  cfg.pool = build_power_pool(3, ch);
  Rng rng(3);
  AccessMap map = generate_access_map(cfg, rng);
  EngineOutcome out = run_engine(superpose(map, cfg), cfg, map);
  // Pinned only as: runs, terminates, stays deterministic.
  EngineOutcome rerun = run_engine(superpose(map, cfg), cfg, map);
  CHECK(out.decoded == rerun.decoded);
  CHECK(out.counters.wr_ops == rerun.counters.wr_ops);
}
