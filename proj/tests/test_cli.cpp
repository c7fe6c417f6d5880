#include <doctest.h>

#include <filesystem>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gfa/cli.hpp"
#include "gfa/io.hpp"
#include "gfa/model.hpp"

using namespace gfa;

namespace {

namespace fs = std::filesystem;

struct CoutCapture {
  std::ostringstream buf;
  std::streambuf* saved;
  CoutCapture() : saved(std::cout.rdbuf(buf.rdbuf())) {}
  ~CoutCapture() { std::cout.rdbuf(saved); }
  std::string text() const { return buf.str(); }
};

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

fs::path temp_dir() {
  fs::path dir = fs::temp_directory_path() / "gfa_cli_test";
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("the load-sweep command line maps onto the grid spec") {
  CliConfig cfg = parse_args({"gfa", "sweep", "--r", "100", "--gamma", "0.1:0.9:0.1",
                              "--k", "2,3,4,5", "--alpha", "1,2,inf", "--windows",
                              "10000", "--seed", "7", "--out", "fig4.csv"});
  CHECK(cfg.cmd == CliConfig::Cmd::Sweep);
  REQUIRE(cfg.sweep.gamma_values.size() == 9);
  CHECK(cfg.sweep.gamma_values.front() == doctest::Approx(0.1));
  CHECK(cfg.sweep.gamma_values.back() == doctest::Approx(0.9));
  CHECK(cfg.sweep.fixed_r == 100);
  CHECK(cfg.sweep.k_values == std::vector<std::uint32_t>{2, 3, 4, 5});
  REQUIRE(cfg.sweep.alpha_values.size() == 3);
  CHECK(cfg.sweep.alpha_values[0] == Alpha::finite(1));
  CHECK(cfg.sweep.alpha_values[2] == Alpha::unbounded());
  CHECK(cfg.sweep.windows == 10000);
  CHECK(cfg.sweep.base_seed == 7);
  CHECK(cfg.out_path == "fig4.csv");
  CHECK(cfg.format == "csv");
  CHECK(cfg.sweep.pool_levels == 3);
}

TEST_CASE("the single-run command line maps onto the system config") {
  CliConfig cfg = parse_args({"gfa", "run", "--n", "5", "--r", "10", "--k", "3",
                              "--alpha", "3", "--windows", "1", "--seed", "1"});
  CHECK(cfg.cmd == CliConfig::Cmd::Run);
  CHECK(cfg.config.n_devices == 5);
  CHECK(cfg.config.n_rbs == 10);
  CHECK(cfg.config.k_repetitions == 3);
  CHECK(cfg.config.alpha == Alpha::finite(3));
  CHECK(cfg.config.windows == 1);
  CHECK(cfg.config.seed == 1);
  REQUIRE(cfg.config.pool.size() == 3);
  CHECK(cfg.config.pool.levels[2] == Rational(4));
  CHECK(cfg.budget_cells == 1'000'000);
  CHECK(cfg.max_iterations == 64);
}

TEST_CASE("channel flags reshape the pool") {
  CliConfig cfg = parse_args({"gfa", "run", "--n", "2", "--r", "4", "--k", "1",
                              "--tau", "2", "--levels", "2"});
  REQUIRE(cfg.config.pool.size() == 2);
  CHECK(cfg.config.pool.levels[0] == Rational(2));
  CHECK(cfg.config.pool.levels[1] == Rational(6));

  CliConfig frac = parse_args({"gfa", "run", "--n", "2", "--r", "4", "--k", "1",
                               "--tau", "1/2", "--noise", "0.5"});
  CHECK(frac.config.channel.tau == Rational(1, 2));
  CHECK(frac.config.channel.noise_power == Rational(1, 2));
}

TEST_CASE("usage problems are collected and name the flags") {
  auto fails_with = [](const std::vector<std::string>& args,
                       const std::vector<std::string>& needles) {
    try {
      parse_args(args);
      FAIL_CHECK("expected usage error for " << args[1]);
    } catch (const std::invalid_argument& e) {
      std::string msg = e.what();
      for (const auto& needle : needles) {
        INFO("message: " << msg);
        CHECK(msg.find(needle) != std::string::npos);
      }
    }
  };

  fails_with({"gfa", "run", "--k", "0", "--n", "4", "--r", "2"}, {"--k"});
  fails_with({"gfa", "run", "--r", "10", "--k", "3"}, {"--n"});
  fails_with({"gfa", "run", "--n", "4", "--r", "2", "--k", "3"}, {"--k"});
  fails_with({"gfa", "run", "--n", "4", "--r", "8", "--k", "2", "--alpha", "0"},
             {"--alpha"});
  fails_with({"gfa", "run", "--n", "0", "--r", "0", "--k", "0"},
             {"--n", "--r", "--k"});
  fails_with({"gfa", "sweep", "--gamma", "0.5", "--k", "2", "--alpha", "1"}, {"--out"});
  fails_with({"gfa", "sweep", "--gamma", "0.5", "--k", "2", "--alpha", "1", "--out",
              "x.csv", "--format", "xml"},
             {"--format"});
  fails_with({"gfa", "sweep", "--gamma", "0.5", "--n", "5", "--k", "2", "--alpha", "1",
              "--out", "x.csv"},
             {"--gamma"});
  fails_with({"gfa", "sweep", "--k", "2", "--alpha", "1", "--out", "x.csv"}, {"--gamma"});
  fails_with({"gfa", "sweep", "--gamma", "0:0.5:0.1", "--k", "2", "--alpha", "1",
              "--out", "x.csv"},
             {"--gamma"});
  fails_with({"gfa", "sweep", "--gamma", "0.5", "--k", "2", "--alpha", "never",
              "--out", "x.csv"},
             {"--alpha"});
  fails_with({"gfa", "run", "--n", "4", "--r", "8", "--k", "2", "--levels", "40"},
             {"--levels"});
  fails_with({"gfa", "run", "--n", "4", "--r", "8", "--k", "2", "--tau", "zero"},
             {"--tau"});

  CHECK_THROWS_AS(parse_args({"gfa"}), std::invalid_argument);
  CHECK_THROWS_AS(parse_args({"gfa", "run", "--bogus"}), std::invalid_argument);
}

TEST_CASE("gamma specs accept ranges and lists") {
  CliConfig range = parse_args({"gfa", "sweep", "--gamma", "0.1:0.3:0.1", "--k", "2",
                                "--alpha", "1", "--out", "x.csv"});
  REQUIRE(range.sweep.gamma_values.size() == 3);
  CHECK(range.sweep.gamma_values[1] == doctest::Approx(0.2));

  CliConfig list = parse_args({"gfa", "sweep", "--gamma", "0.25,0.75", "--k", "2",
                               "--alpha", "1", "--out", "x.csv"});
  REQUIRE(list.sweep.gamma_values.size() == 2);
  CHECK(list.sweep.gamma_values[1] == doctest::Approx(0.75));

  CliConfig single = parse_args({"gfa", "sweep", "--gamma", "0.5", "--k", "2",
                                 "--alpha", "1", "--out", "x.csv"});
  REQUIRE(single.sweep.gamma_values.size() == 1);
}

TEST_CASE("a config file provides defaults that flags override") {
  fs::path dir = temp_dir();
  fs::path cfg_path = dir / "point.json";
  write_text_file(cfg_path.string(),
                  R"({"n":5,"r":10,"k":3,"alpha":"2","seed":9,"quiet":true})");

  CliConfig from_file =
      parse_args({"gfa", "run", "--config", cfg_path.string()});
  CHECK(from_file.config.n_devices == 5);
  CHECK(from_file.config.n_rbs == 10);
  CHECK(from_file.config.k_repetitions == 3);
  CHECK(from_file.config.alpha == Alpha::finite(2));
  CHECK(from_file.config.seed == 9);
  CHECK(from_file.quiet);

  CliConfig overridden = parse_args(
      {"gfa", "run", "--config", cfg_path.string(), "--alpha", "3", "--seed", "4"});
  CHECK(overridden.config.alpha == Alpha::finite(3));
  CHECK(overridden.config.seed == 4);
  CHECK(overridden.config.n_devices == 5);  // still from the file

  fs::path nested = dir / "nested.json";
  write_text_file(nested.string(), R"({"config":"loop.json"})");
  CHECK_THROWS_AS(parse_args({"gfa", "run", "--config", nested.string()}),
                  std::invalid_argument);

  fs::path not_obj = dir / "arr.json";
  write_text_file(not_obj.string(), "[1,2]");
  CHECK_THROWS_AS(parse_args({"gfa", "run", "--config", not_obj.string()}),
                  std::invalid_argument);
}

TEST_CASE("help exits cleanly without executing") {
  CoutCapture cap;
  CHECK(run_cli({"gfa", "--help"}) == 0);
  CHECK(run_cli({"gfa", "run", "--help"}) == 0);
  CHECK(cap.text().find("--alpha") != std::string::npos);
}

TEST_CASE("full command round trip over a fixture") {
  fs::path dir = temp_dir();
  CoutCapture cap;

  CHECK(run_cli({"gfa", "fixtures", "--out", (dir / "fx").string(), "--quiet"}) == 0);
  REQUIRE(fs::exists(dir / "fx/demo_map.json"));
  REQUIRE(fs::exists(dir / "fx/random_map.json"));

  fs::path row_path = dir / "run_row.csv";
  fs::path trace_path = dir / "run_trace.jsonl";
  CHECK(run_cli({"gfa", "run", "--fixture", (dir / "fx/demo_map.json").string(), "--r",
                 "10", "--alpha", "3", "--out", row_path.string(), "--trace",
                 trace_path.string(), "--quiet"}) == 0);
  CHECK(cap.text().find("decoded 0 1 2 3 4") != std::string::npos);
  CHECK(cap.text().find("terminated AllRecovered") != std::string::npos);

  std::vector<SweepRow> rows = rows_from_csv(read_text_file(row_path.string()));
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].n == 5);
  CHECK(rows[0].access_prob == doctest::Approx(1.0));

  std::string trace = read_text_file(trace_path.string());
  CHECK(trace.find("{\"iter\":1,") == 0);
  CHECK(trace.find("\"new_decoded\":[2]") != std::string::npos);

  fs::remove_all(dir);
}

TEST_CASE("oracle subcommand emits exact probabilities and closures") {
  fs::path dir = temp_dir();
  CoutCapture cap;

  fs::path exact_path = dir / "exact.json";
  CHECK(run_cli({"gfa", "oracle", "--n", "2", "--r", "2", "--k", "1", "--out",
                 exact_path.string()}) == 0);
  std::string exact = read_text_file(exact_path.string());
  CHECK(exact.find("\"5/6\"") != std::string::npos);
  CHECK(exact.find("0.833333") != std::string::npos);

  fs::path map_path = dir / "pair.json";
  write_text_file(map_path.string(),
                  R"({"devices":[{"id":0,"rbs":[0],"power":4},{"id":1,"rbs":[0],"power":1}]})");
  CHECK(run_cli({"gfa", "oracle", "--fixture", map_path.string(), "--r", "2"}) == 0);
  CHECK(cap.text().find("\"decodable\": [") != std::string::npos);

  fs::remove_all(dir);
}

TEST_CASE("sweep subcommand writes tables and charts") {
  fs::path dir = temp_dir();
  fs::path csv_path = dir / "mini.csv";
  fs::path json_path = dir / "mini.json";
  fs::path svg_path = dir / "mini.svg";

  CHECK(run_cli({"gfa", "sweep", "--r", "10", "--gamma", "0.2,0.4", "--k", "1,2",
                 "--alpha", "1,inf", "--windows", "25", "--seed", "5", "--out",
                 csv_path.string(), "--plot", svg_path.string(), "--quiet"}) == 0);
  std::vector<SweepRow> rows = rows_from_csv(read_text_file(csv_path.string()));
  CHECK(rows.size() == 8);
  std::string svg = read_text_file(svg_path.string());
  CHECK(svg.rfind("<svg", 0) == 0);

  CHECK(run_cli({"gfa", "sweep", "--r", "10", "--gamma", "0.2,0.4", "--k", "1,2",
                 "--alpha", "1,inf", "--windows", "25", "--seed", "5", "--out",
                 json_path.string(), "--format", "json", "--quiet"}) == 0);
  CHECK(read_text_file(json_path.string()).rfind("[\n", 0) == 0);

  // exit-code contract: unwritable output is a runtime error, not usage
  CHECK(run_cli({"gfa", "sweep", "--r", "10", "--gamma", "0.2,0.4", "--k", "1",
                 "--alpha", "1", "--windows", "5", "--out",
                 "/nonexistent-dir/x.csv", "--quiet"}) == 1);
  CHECK(run_cli({"gfa", "sweep", "--nope"}) == 2);
  CHECK(run_cli({"gfa", "run", "--k", "0", "--n", "4", "--r", "2"}) == 2);

  fs::remove_all(dir);
}
