#include "gfa/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <stdexcept>

#include "gfa/decoder.hpp"
#include "gfa/framegen.hpp"
#include "gfa/io.hpp"
#include "gfa/oracle.hpp"
#include "gfa/rng.hpp"
#include "gfa/svg.hpp"

namespace gfa {
namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    std::size_t next = s.find(sep, pos);
    out.push_back(s.substr(pos, next == std::string::npos ? next : next - pos));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return out;
}

double parse_double_strict(const std::string& s) {
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size())
    throw std::invalid_argument("bad number \"" + s + "\"");
  return v;
}

std::vector<std::uint32_t> parse_k_list(const std::string& text) {
  std::vector<std::uint32_t> out;
  for (const std::string& part : split(text, ',')) {
    char* end = nullptr;
    unsigned long v = std::strtoul(part.c_str(), &end, 10);
    if (part.empty() || end != part.c_str() + part.size() || v < 1 || v > 1'000'000)
      throw std::invalid_argument("bad repetition count \"" + part + "\"");
    out.push_back(static_cast<std::uint32_t>(v));
  }
  return out;
}

std::vector<Alpha> parse_alpha_list(const std::string& text) {
  std::vector<Alpha> out;
  for (const std::string& part : split(text, ',')) out.push_back(Alpha::parse(part));
  return out;
}

// "a:b:c" arithmetic range or a comma list.
std::vector<double> parse_gamma_spec(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts = split(text, ':');
    if (parts.size() != 3) throw std::invalid_argument("expected start:stop:step");
    double start = parse_double_strict(parts[0]);
    double stop = parse_double_strict(parts[1]);
    double step = parse_double_strict(parts[2]);
    if (!(step > 0.0)) throw std::invalid_argument("step must be > 0");
    if (stop < start) throw std::invalid_argument("stop < start");
    for (int i = 0;; ++i) {
      double v = start + i * step;
      if (v > stop + step * 1e-9) break;
      out.push_back(v);
      if (out.size() > 10000) throw std::invalid_argument("range too long");
    }
  } else {
    for (const std::string& part : split(text, ',')) out.push_back(parse_double_strict(part));
  }
  for (double g : out)
    if (!(g > 0.0) || g > 1000.0)
      throw std::invalid_argument("gamma " + format_g6(g) + " out of range (0, 1000]");
  return out;
}

// Values from a --config JSON object become argv tokens placed right after
// the subcommand, so explicit flags (parsed later) override them.
std::vector<std::string> apply_config_file(const std::vector<std::string>& args) {
  static const char* kSubs[] = {"run", "sweep", "oracle", "fixtures"};
  std::size_t sub_at = 0;
  for (std::size_t i = 1; i < args.size() && sub_at == 0; ++i)
    for (const char* s : kSubs)
      if (args[i] == s) sub_at = i;

  std::string path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty() || sub_at == 0) return args;

  nlohmann::json root = nlohmann::json::parse(read_text_file(path));
  if (!root.is_object())
    throw std::invalid_argument("--config: " + path + " must hold a JSON object");

  std::vector<std::string> tokens;
  for (const auto& [key, value] : root.items()) {
    if (key == "config") throw std::invalid_argument("--config: file cannot set config");
    if (value.is_boolean()) {
      if (value.get<bool>()) tokens.push_back("--" + key);
    } else if (value.is_string()) {
      tokens.push_back("--" + key);
      tokens.push_back(value.get<std::string>());
    } else {
      tokens.push_back("--" + key);
      tokens.push_back(value.dump());
    }
  }

  std::vector<std::string> out(args.begin(), args.begin() + sub_at + 1);
  out.insert(out.end(), tokens.begin(), tokens.end());
  out.insert(out.end(), args.begin() + sub_at + 1, args.end());
  return out;
}

struct RawFlags {
  std::uint32_t n = 0, r = 0, k = 0, max_iters = 64;
  std::size_t levels = 3;
  std::uint64_t windows = 1, seed = 0, budget = 1'000'000;
  std::string alpha = "inf", tau = "1", noise = "1";
  std::string gamma, k_list, alpha_list;
  std::string out, format = "csv", plot, trace, fixture, config_path;
  int threads = 0;
  bool quiet = false;

  CLI::Option* n_o = nullptr;
  CLI::Option* r_o = nullptr;
  CLI::Option* k_o = nullptr;
  CLI::Option* gamma_o = nullptr;
  CLI::Option* fixture_o = nullptr;
  CLI::Option* out_o = nullptr;
};

CLI::Option* take_last(CLI::Option* o) {
  return o->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
}

void add_channel_flags(CLI::App* sub, RawFlags& f) {
  take_last(sub->add_option("--tau", f.tau, "SINR decode threshold, rational"));
  take_last(sub->add_option("--noise", f.noise, "noise power, rational"));
  take_last(sub->add_option("--levels", f.levels, "power pool size"));
  take_last(sub->add_option("--config", f.config_path, "JSON file with flag defaults"));
  sub->add_flag("--quiet", f.quiet, "suppress progress notes");
}

void add_engine_flags(CLI::App* sub, RawFlags& f) {
  take_last(sub->add_option("--seed", f.seed, "base RNG seed"));
  take_last(sub->add_option("--budget", f.budget, "per-window matrix budget, RB cells"));
  take_last(sub->add_option("--max-iters", f.max_iters, "safety iteration cap"));
  take_last(sub->add_option("--threads", f.threads, "worker threads (0 = auto)"));
}

struct ChannelSetup {
  ChannelParams channel;
  PowerPool pool;
  bool ok = false;
};

ChannelSetup build_channel(const RawFlags& f, std::vector<std::string>& issues) {
  ChannelSetup setup;
  bool parsed = true;
  try {
    setup.channel.tau = Rational::parse(f.tau);
  } catch (const std::exception& e) {
    issues.push_back(std::string("--tau: ") + e.what());
    parsed = false;
  }
  try {
    setup.channel.noise_power = Rational::parse(f.noise);
  } catch (const std::exception& e) {
    issues.push_back(std::string("--noise: ") + e.what());
    parsed = false;
  }
  if (f.levels < 1 || f.levels > 20) {
    issues.push_back("--levels: must be in [1, 20]");
    parsed = false;
  }
  if (!parsed) return setup;
  try {
    setup.pool = build_power_pool(f.levels, setup.channel);
    setup.ok = true;
  } catch (const std::exception& e) {
    issues.push_back(std::string("--levels/--tau: ") + e.what());
  }
  return setup;
}

void check_format(const RawFlags& f, std::vector<std::string>& issues) {
  if (f.format != "csv" && f.format != "json")
    issues.push_back("--format: must be csv or json, got \"" + f.format + "\"");
}

[[noreturn]] void throw_issues(const std::vector<std::string>& issues) {
  std::string msg = "usage errors:";
  for (const std::string& s : issues) {
    msg += "\n  ";
    msg += s;
  }
  throw std::invalid_argument(msg);
}

}  // namespace

CliConfig parse_args(const std::vector<std::string>& args_in) {
  std::vector<std::string> args = apply_config_file(args_in);

  CLI::App app{"K-repetition grant-free NOMA uplink simulator with blind"
               " iterative interference cancellation"};
  app.require_subcommand(1);

  RawFlags run_f;
  CLI::App* run_sub = app.add_subcommand("run", "Monte Carlo at one grid point");
  run_f.n_o = take_last(run_sub->add_option("--n", run_f.n, "device count"));
  run_f.r_o = take_last(run_sub->add_option("--r", run_f.r, "resource blocks per window"));
  run_f.k_o = take_last(run_sub->add_option("--k", run_f.k, "replicas per device"));
  take_last(run_sub->add_option("--alpha", run_f.alpha, "decode depth, integer or inf"));
  take_last(run_sub->add_option("--windows", run_f.windows, "windows to simulate"));
  run_f.out_o = take_last(run_sub->add_option("--out", run_f.out, "write the row here"));
  take_last(run_sub->add_option("--format", run_f.format, "csv or json"));
  take_last(run_sub->add_option("--trace", run_f.trace, "JSONL iteration trace (windows=1)"));
  run_f.fixture_o =
      take_last(run_sub->add_option("--fixture", run_f.fixture, "access-map JSON to decode"));
  add_channel_flags(run_sub, run_f);
  add_engine_flags(run_sub, run_f);

  RawFlags sweep_f;
  sweep_f.r = 100;
  sweep_f.windows = 10000;
  CLI::App* sweep_sub = app.add_subcommand("sweep", "grid of Monte Carlo points");
  sweep_f.gamma_o =
      take_last(sweep_sub->add_option("--gamma", sweep_f.gamma, "load points, a:b:c or list"));
  sweep_f.n_o = take_last(sweep_sub->add_option("--n", sweep_f.n, "explicit device count"));
  sweep_f.r_o = take_last(sweep_sub->add_option("--r", sweep_f.r, "resource blocks per window"));
  sweep_f.k_o = take_last(sweep_sub->add_option("--k", sweep_f.k_list, "replica counts, list"));
  take_last(sweep_sub->add_option("--alpha", sweep_f.alpha_list, "decode depths, list or inf"));
  take_last(sweep_sub->add_option("--windows", sweep_f.windows, "windows per point"));
  sweep_f.out_o = take_last(sweep_sub->add_option("--out", sweep_f.out, "output table path"));
  take_last(sweep_sub->add_option("--format", sweep_f.format, "csv or json"));
  take_last(sweep_sub->add_option("--plot", sweep_f.plot, "also write an SVG chart here"));
  add_channel_flags(sweep_sub, sweep_f);
  add_engine_flags(sweep_sub, sweep_f);

  RawFlags oracle_f;
  CLI::App* oracle_sub = app.add_subcommand("oracle", "exhaustive reference decoder");
  oracle_f.n_o = take_last(oracle_sub->add_option("--n", oracle_f.n, "device count"));
  oracle_f.r_o =
      take_last(oracle_sub->add_option("--r", oracle_f.r, "resource blocks per window"));
  oracle_f.k_o = take_last(oracle_sub->add_option("--k", oracle_f.k, "replicas per device"));
  oracle_f.fixture_o = take_last(
      oracle_sub->add_option("--fixture", oracle_f.fixture, "access-map JSON for closure"));
  oracle_f.out_o =
      take_last(oracle_sub->add_option("--out", oracle_f.out, "write JSON here (else stdout)"));
  add_channel_flags(oracle_sub, oracle_f);

  RawFlags fix_f;
  fix_f.n = 5;
  fix_f.r = 10;
  fix_f.k = 3;
  fix_f.seed = 1;
  CLI::App* fix_sub = app.add_subcommand("fixtures", "write example access maps");
  fix_f.out_o =
      take_last(fix_sub->add_option("--out", fix_f.out, "output directory (default fixtures)"));
  fix_f.n_o = take_last(fix_sub->add_option("--n", fix_f.n, "random map device count"));
  fix_f.r_o = take_last(fix_sub->add_option("--r", fix_f.r, "random map resource blocks"));
  fix_f.k_o = take_last(fix_sub->add_option("--k", fix_f.k, "random map replicas"));
  take_last(fix_sub->add_option("--seed", fix_f.seed, "random map seed"));
  add_channel_flags(fix_sub, fix_f);

  CliConfig cfg;
  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const std::string& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp" ||
        e.get_name() == "CallForVersion") {
      app.exit(e);
      cfg.help_shown = true;
      return cfg;
    }
    throw std::invalid_argument(std::string("usage errors:\n  ") + e.what());
  }

  std::vector<std::string> issues;

  if (run_sub->parsed()) {
    cfg.cmd = CliConfig::Cmd::Run;
    const RawFlags& f = run_f;
    ChannelSetup ch = build_channel(f, issues);
    const bool fixture_mode = f.fixture_o->count() > 0;
    if (fixture_mode) {
      if (f.r_o->count() == 0 || f.r < 1) issues.push_back("--r: required with --fixture");
      if (f.windows != 1) issues.push_back("--windows: fixed at 1 with --fixture");
    } else {
      if (f.n_o->count() == 0 || f.n < 1) issues.push_back("--n: device count >= 1 required");
      if (f.r_o->count() == 0 || f.r < 1) issues.push_back("--r: resource blocks >= 1 required");
      if (f.k_o->count() == 0 || f.k < 1) issues.push_back("--k: replica count >= 1 required");
      else if (f.r_o->count() > 0 && f.k > f.r)
        issues.push_back("--k: replicas cannot exceed --r");
      if (f.windows < 1) issues.push_back("--windows: must be >= 1");
    }
    try {
      cfg.config.alpha = Alpha::parse(f.alpha);
    } catch (const std::exception& e) {
      issues.push_back(std::string("--alpha: ") + e.what());
    }
    if (!f.trace.empty() && f.windows != 1 && !fixture_mode)
      issues.push_back("--trace: requires --windows 1");
    check_format(f, issues);
    if (!issues.empty()) throw_issues(issues);

    cfg.config.n_devices = f.n;
    cfg.config.n_rbs = f.r;
    cfg.config.k_repetitions = f.k;
    cfg.config.channel = ch.channel;
    cfg.config.pool = ch.pool;
    cfg.config.windows = f.windows;
    cfg.config.seed = f.seed;
    cfg.budget_cells = f.budget;
    cfg.max_iterations = f.max_iters;
    cfg.threads = f.threads;
    cfg.out_path = f.out;
    cfg.format = f.format;
    cfg.trace_path = f.trace;
    cfg.fixture_path = f.fixture;
    cfg.quiet = f.quiet;
    return cfg;
  }

  if (sweep_sub->parsed()) {
    cfg.cmd = CliConfig::Cmd::Sweep;
    const RawFlags& f = sweep_f;
    ChannelSetup ch = build_channel(f, issues);
    const bool by_gamma = f.gamma_o->count() > 0;
    const bool by_pair = f.n_o->count() > 0;
    if (by_gamma == by_pair)
      issues.push_back("--gamma: provide either --gamma or an explicit --n (with --r)");
    if (by_gamma) {
      try {
        cfg.sweep.gamma_values = parse_gamma_spec(f.gamma);
      } catch (const std::exception& e) {
        issues.push_back(std::string("--gamma: ") + e.what());
      }
    }
    if (by_pair) {
      if (f.n < 1) issues.push_back("--n: device count >= 1 required");
      cfg.sweep.nr_pairs.emplace_back(f.n, f.r);
    }
    if (f.r < 1) issues.push_back("--r: resource blocks >= 1 required");
    if (f.k_o->count() == 0)
      issues.push_back("--k: replica list required");
    else {
      try {
        cfg.sweep.k_values = parse_k_list(f.k_list);
      } catch (const std::exception& e) {
        issues.push_back(std::string("--k: ") + e.what());
      }
    }
    if (f.alpha_list.empty())
      issues.push_back("--alpha: depth list required");
    else {
      try {
        cfg.sweep.alpha_values = parse_alpha_list(f.alpha_list);
      } catch (const std::exception& e) {
        issues.push_back(std::string("--alpha: ") + e.what());
      }
    }
    if (f.windows < 1) issues.push_back("--windows: must be >= 1");
    if (f.out_o->count() == 0) issues.push_back("--out: required for sweep");
    check_format(f, issues);
    if (!issues.empty()) throw_issues(issues);

    cfg.sweep.fixed_r = f.r;
    cfg.sweep.windows = f.windows;
    cfg.sweep.base_seed = f.seed;
    cfg.sweep.pool_levels = f.levels;
    cfg.sweep.channel = ch.channel;
    cfg.budget_cells = f.budget;
    cfg.max_iterations = f.max_iters;
    cfg.threads = f.threads;
    cfg.out_path = f.out;
    cfg.format = f.format;
    cfg.plot_path = f.plot;
    cfg.quiet = f.quiet;
    return cfg;
  }

  if (oracle_sub->parsed()) {
    cfg.cmd = CliConfig::Cmd::Oracle;
    const RawFlags& f = oracle_f;
    ChannelSetup ch = build_channel(f, issues);
    const bool fixture_mode = f.fixture_o->count() > 0;
    if (fixture_mode) {
      if (f.r_o->count() == 0 || f.r < 1) issues.push_back("--r: required with --fixture");
    } else {
      if (f.n_o->count() == 0 || f.n < 1) issues.push_back("--n: device count >= 1 required");
      if (f.r_o->count() == 0 || f.r < 1) issues.push_back("--r: resource blocks >= 1 required");
      if (f.k_o->count() == 0 || f.k < 1) issues.push_back("--k: replica count >= 1 required");
      else if (f.r_o->count() > 0 && f.k > f.r)
        issues.push_back("--k: replicas cannot exceed --r");
    }
    if (!issues.empty()) throw_issues(issues);

    cfg.config.n_devices = f.n;
    cfg.config.n_rbs = f.r;
    cfg.config.k_repetitions = f.k;
    cfg.config.alpha = Alpha::unbounded();
    cfg.config.channel = ch.channel;
    cfg.config.pool = ch.pool;
    cfg.config.windows = 1;
    cfg.fixture_path = f.fixture;
    cfg.out_path = f.out;
    cfg.quiet = f.quiet;
    return cfg;
  }

  cfg.cmd = CliConfig::Cmd::Fixtures;
  const RawFlags& f = fix_f;
  ChannelSetup ch = build_channel(f, issues);
  if (f.n < 1) issues.push_back("--n: device count >= 1 required");
  if (f.r < 1) issues.push_back("--r: resource blocks >= 1 required");
  if (f.k < 1 || f.k > f.r) issues.push_back("--k: must be in [1, --r]");
  if (!issues.empty()) throw_issues(issues);
  cfg.config.n_devices = f.n;
  cfg.config.n_rbs = f.r;
  cfg.config.k_repetitions = f.k;
  cfg.config.channel = ch.channel;
  cfg.config.pool = ch.pool;
  cfg.config.windows = 1;
  cfg.config.seed = f.seed;
  cfg.fixtures_dir = f.out_o->count() ? f.out : std::string("fixtures");
  cfg.quiet = f.quiet;
  return cfg;
}

namespace {

SweepRow row_from_outcome(const SystemConfig& config, const EngineOutcome& out) {
  SweepRow row;
  row.gamma = config.gamma();
  row.n = config.n_devices;
  row.r = config.n_rbs;
  row.k = config.k_repetitions;
  row.alpha = config.alpha;
  row.windows = 1;
  std::uint32_t count = static_cast<std::uint32_t>(out.decoded.size());
  AccessStat acc = estimate_access(std::span<const std::uint32_t>(&count, 1), config.n_devices);
  row.access_prob = acc.mean_access_prob;
  row.ci95 = acc.ci95_halfwidth;
  row.mean_wr = static_cast<double>(out.counters.wr_ops);
  row.mean_dec = static_cast<double>(out.counters.dec_ops);
  row.mean_peak_storage = static_cast<double>(out.counters.peak_storage);
  row.seed = config.seed;
  return row;
}

void write_rows(const CliConfig& cfg, const std::vector<SweepRow>& rows) {
  std::string payload = cfg.format == "json" ? rows_to_json(rows) : rows_to_csv(rows);
  write_text_file(cfg.out_path, payload);
}

int exec_run(const CliConfig& cfg) {
  EngineOptions opts;
  opts.matrix_budget_cells = cfg.budget_cells;
  opts.max_iterations = cfg.max_iterations;
  std::string trace_buf;
  if (!cfg.trace_path.empty())
    opts.trace = [&trace_buf](const TraceRecord& rec) {
      trace_buf += trace_to_jsonl(rec);
      trace_buf += '\n';
    };

  SystemConfig config = cfg.config;

  if (!cfg.fixture_path.empty() || config.windows == 1) {
    AccessMap map;
    if (!cfg.fixture_path.empty()) {
      map = access_map_from_json(read_text_file(cfg.fixture_path));
      if (map.devices.empty())
        throw std::invalid_argument("--fixture: no devices in " + cfg.fixture_path);
      config.n_devices = static_cast<std::uint32_t>(map.devices.size());
      config.k_repetitions = static_cast<std::uint32_t>(map.devices[0].rb_choices.size());
      for (const DeviceAccess& dev : map.devices)
        if (dev.rb_choices.size() != config.k_repetitions)
          throw std::invalid_argument("--fixture: devices must share one replica count");
      std::vector<Rational> levels;
      for (const DeviceAccess& dev : map.devices) levels.push_back(dev.power_level);
      std::sort(levels.begin(), levels.end());
      levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
      config.pool.levels = std::move(levels);
      config.windows = 1;
    } else {
      Rng rng(derive_seed(config.seed, 0));
      map = generate_access_map(config, rng);
    }
    validate_config(config);

    EngineRunner runner(config, opts);
    EngineOutcome out = runner.run_full(map);

    std::cout << "n " << config.n_devices << " r " << config.n_rbs << " k "
              << config.k_repetitions << " alpha " << config.alpha.str() << " windows 1 seed "
              << config.seed << "\n";
    std::cout << "decoded";
    for (std::uint32_t d : out.decoded) std::cout << ' ' << d;
    std::cout << "\niterations " << out.iterations_run << " terminated "
              << termination_name(out.terminated_by) << (out.budget_hit ? " budget_hit" : "")
              << (out.cap_hit ? " cap_hit" : "") << "\n";
    std::cout << "wr_ops " << out.counters.wr_ops << " dec_ops " << out.counters.dec_ops
              << " peak_storage " << out.counters.peak_storage << "\n";
    SweepRow row = row_from_outcome(config, out);
    std::cout << "access_prob " << format_g6(row.access_prob) << " ci95 "
              << format_g6(row.ci95) << "\n";

    if (!cfg.out_path.empty()) write_rows(cfg, {row});
    if (!cfg.trace_path.empty()) write_text_file(cfg.trace_path, trace_buf);
    return 0;
  }

  PointResult pr = run_point_detailed(config, opts, cfg.threads);
  std::uint64_t tally[3] = {0, 0, 0};
  for (const WindowStats& w : pr.windows) tally[static_cast<int>(w.terminated_by)] += 1;

  std::cout << "n " << config.n_devices << " r " << config.n_rbs << " k " << config.k_repetitions
            << " alpha " << config.alpha.str() << " windows " << config.windows << " seed "
            << config.seed << "\n";
  std::cout << "access_prob " << format_g6(pr.row.access_prob) << " ci95 "
            << format_g6(pr.row.ci95) << "\n";
  std::cout << "mean_wr " << format_g6(pr.row.mean_wr) << " mean_dec "
            << format_g6(pr.row.mean_dec) << " mean_peak_storage "
            << format_g6(pr.row.mean_peak_storage) << "\n";
  std::cout << "terminations AlphaReached " << tally[0] << " AllRecovered " << tally[1]
            << " Exhausted " << tally[2] << "\n";
  std::cout << "budget_hits " << pr.budget_hits << " cap_hits " << pr.cap_hits << "\n";

  if (!cfg.out_path.empty()) write_rows(cfg, {pr.row});
  return 0;
}

int exec_sweep(const CliConfig& cfg) {
  EngineOptions opts;
  opts.matrix_budget_cells = cfg.budget_cells;
  opts.max_iterations = cfg.max_iterations;

  std::vector<SystemConfig> grid = expand_grid(cfg.sweep);
  std::vector<SweepRow> rows;
  std::uint64_t budget_hits = 0, cap_hits = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const SystemConfig& config = grid[i];
    if (!cfg.quiet)
      std::cerr << "point " << (i + 1) << "/" << grid.size() << ": n " << config.n_devices
                << " r " << config.n_rbs << " k " << config.k_repetitions << " alpha "
                << config.alpha.str() << "\n";
    PointResult p = run_point_detailed(config, opts, cfg.threads);
    rows.push_back(p.row);
    budget_hits += p.budget_hits;
    cap_hits += p.cap_hits;
  }

  write_rows(cfg, rows);
  if (!cfg.plot_path.empty()) write_text_file(cfg.plot_path, plot_rows(rows));
  if (!cfg.quiet && (budget_hits || cap_hits))
    std::cerr << "note: matrix budget exhausted in " << budget_hits
              << " windows, iteration cap hit in " << cap_hits << "\n";
  return 0;
}

int exec_oracle(const CliConfig& cfg) {
  nlohmann::ordered_json doc;
  if (!cfg.fixture_path.empty()) {
    AccessMap map = access_map_from_json(read_text_file(cfg.fixture_path));
    SystemConfig config = cfg.config;
    config.n_devices = static_cast<std::uint32_t>(map.devices.size());
    SignalMatrix m0 = superpose(map, config);
    ClosureResult res = closure_decode(m0, config.channel);
    doc["decodable"] = res.decodable;
    nlohmann::ordered_json witnesses = nlohmann::ordered_json::array();
    for (const auto& [id, subtracted] : res.witness) {
      nlohmann::ordered_json w;
      w["id"] = id;
      w["subtracted"] = subtracted;
      witnesses.push_back(std::move(w));
    }
    doc["witnesses"] = std::move(witnesses);
  } else {
    validate_config(cfg.config);
    Rational p = exact_access_probability(cfg.config);
    doc["exact_probability"] = p.str();
    doc["value"] = format_g6(p.to_double());
  }
  std::string text = doc.dump(2);
  text += '\n';
  if (cfg.out_path.empty())
    std::cout << text;
  else
    write_text_file(cfg.out_path, text);
  return 0;
}

int exec_fixtures(const CliConfig& cfg) {
  std::filesystem::create_directories(cfg.fixtures_dir);

  AccessMap demo;
  const std::vector<std::vector<std::uint32_t>> rbs = {
      {0, 1, 6}, {1, 7, 9}, {1, 2, 3}, {2, 3, 4}, {2, 3, 5}};
  for (std::uint32_t id = 0; id < rbs.size(); ++id)
    demo.devices.push_back({id, rbs[id], Rational(1)});
  std::string demo_path = cfg.fixtures_dir + "/demo_map.json";
  write_text_file(demo_path, access_map_to_json(demo) + "\n");

  Rng rng(cfg.config.seed);
  AccessMap random_map = generate_access_map(cfg.config, rng);
  std::string random_path = cfg.fixtures_dir + "/random_map.json";
  write_text_file(random_path, access_map_to_json(random_map) + "\n");

  std::cout << demo_path << "\n" << random_path << "\n";
  if (!cfg.quiet)
    std::cerr << "decode one with: gfa run --fixture " << demo_path << " --r 10 --alpha 3\n";
  return 0;
}

}  // namespace

int execute(const CliConfig& cfg) {
  switch (cfg.cmd) {
    case CliConfig::Cmd::Run: return exec_run(cfg);
    case CliConfig::Cmd::Sweep: return exec_sweep(cfg);
    case CliConfig::Cmd::Oracle: return exec_oracle(cfg);
    case CliConfig::Cmd::Fixtures: return exec_fixtures(cfg);
    case CliConfig::Cmd::None: break;
  }
  return cfg.help_shown ? 0 : 2;
}

int cli_main(int argc, const char* const* argv) {
  std::vector<std::string> args(argv, argv + argc);
  CliConfig cfg;
  try {
    cfg = parse_args(args);
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  if (cfg.help_shown) return 0;
  try {
    return execute(cfg);
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
}

}  // namespace gfa
