#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "experiment.hpp"
#include "mbg/serialize.hpp"

using namespace mbg;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  fs::path d = fs::temp_directory_path() / "mbg_cli_tests" / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

int run_binary(const std::string& args) {
  const int rc = std::system((std::string(MBGAME_PATH) + " " + args + " 2>/dev/null").c_str());
  return WEXITSTATUS(rc);
}

ExperimentConfig pennies_config(const fs::path& out) {
  ExperimentConfig cfg;
  cfg.environment = "example1";
  cfg.algorithm = Algorithm::discounted;
  cfg.steps = 500;
  cfg.seeds = {1};
  cfg.snapshot_every = 100;
  cfg.out_dir = out.string();
  return cfg;
}

}  // namespace

TEST_CASE("run_experiment writes the full artifact set") {
  fs::path out = fresh_dir("artifacts");
  ExperimentConfig cfg = pennies_config(out);
  EvaluationConfig ev;
  ev.n_traj = 200;
  ev.n_traj_every = 50;
  ev.every = 100;
  cfg.evaluation = ev;
  CHECK(cli::run_experiment(cfg, true) == cli::kExitOk);
  CHECK(fs::exists(out / "trace.csv"));
  CHECK(fs::exists(out / "snapshots.jsonl"));
  CHECK(fs::exists(out / "constraints.csv"));
  CHECK(fs::exists(out / "summary.json"));
  std::ifstream trace(out / "trace.csv");
  std::string header;
  std::getline(trace, header);
  CHECK(header == "step,s,a,o,alpha_or_beta,q_updated_value");
  std::ifstream cons(out / "constraints.csv");
  std::getline(cons, header);
  CHECK(header == "step,constraint_index,mean,half_width");
  // 6 snapshots (k=0 plus every 100 of 500); one JSON object per line
  int lines = 0;
  std::ifstream snaps(out / "snapshots.jsonl");
  for (std::string l; std::getline(snaps, l);) ++lines;
  CHECK(lines == 6);
}

TEST_CASE("identical configs produce byte-identical artifacts") {
  fs::path a = fresh_dir("det_a"), b = fresh_dir("det_b");
  ExperimentConfig ca = pennies_config(a), cb = pennies_config(b);
  REQUIRE(cli::run_experiment(ca, true) == cli::kExitOk);
  REQUIRE(cli::run_experiment(cb, true) == cli::kExitOk);
  CHECK(slurp(a / "trace.csv") == slurp(b / "trace.csv"));
  CHECK(slurp(a / "snapshots.jsonl") == slurp(b / "snapshots.jsonl"));
}

TEST_CASE("average-mode trace carries the gain column") {
  fs::path out = fresh_dir("avg");
  ExperimentConfig cfg = pennies_config(out);
  cfg.algorithm = Algorithm::average;
  cfg.steps = 200;
  REQUIRE(cli::run_experiment(cfg, true) == cli::kExitOk);
  std::ifstream trace(out / "trace.csv");
  std::string header;
  std::getline(trace, header);
  CHECK(header == "step,s,a,o,alpha_or_beta,q_updated_value,f_value");
}

TEST_CASE("multi-seed runs write per-seed subdirectories") {
  fs::path out = fresh_dir("multi");
  ExperimentConfig cfg = pennies_config(out);
  cfg.seeds = {1, 2, 3};
  REQUIRE(cli::run_experiment(cfg, true) == cli::kExitOk);
  for (auto s : {"seed1", "seed2", "seed3"}) CHECK(fs::exists(out / s / "trace.csv"));
  CHECK(fs::exists(out / "summary.json"));
}

TEST_CASE("emit_report produces plotting CSVs and is idempotent") {
  fs::path out = fresh_dir("report");
  ExperimentConfig cfg = pennies_config(out);
  REQUIRE(cli::run_experiment(cfg, true) == cli::kExitOk);
  REQUIRE(cli::emit_report(out.string(), true) == cli::kExitOk);
  REQUIRE(fs::exists(out / "fig1.csv"));
  std::string first = slurp(out / "fig1.csv");
  std::istringstream is(first);
  std::string header;
  std::getline(is, header);
  CHECK(header == "step,Q11,Q12,Q21,Q22");
  REQUIRE(cli::emit_report(out.string(), true) == cli::kExitOk);
  CHECK(slurp(out / "fig1.csv") == first);
}

TEST_CASE("the policy-error report covers the three-action sweep") {
  fs::path out = fresh_dir("fig2");
  ExperimentConfig cfg = pennies_config(out);
  cfg.environment = "example2";
  cfg.steps = 1000;
  cfg.seeds = {1, 2};
  REQUIRE(cli::run_experiment(cfg, true) == cli::kExitOk);
  REQUIRE(cli::emit_report(out.string(), true) == cli::kExitOk);
  std::ifstream f(out / "fig2.csv");
  std::string header;
  std::getline(f, header);
  CHECK(header == "step,l1_error");
  int rows = 0;
  for (std::string l; std::getline(f, l);) ++rows;
  CHECK(rows == 11);  // snapshots at 0,100,...,1000
}

TEST_CASE("unknown environments exit with the config code") {
  ExperimentConfig cfg = pennies_config(fresh_dir("bad_env"));
  cfg.environment = "no-such-preset";
  CHECK(cli::run_experiment(cfg, true) == cli::kExitConfigError);
}

TEST_CASE("binary: config and solver failures map to exit codes 2 and 3") {
  fs::path dir = fresh_dir("binary");
  // missing config file
  CHECK(run_binary("learn --config " + (dir / "nope.json").string()) == 2);
  // malformed config
  std::ofstream(dir / "bad.json") << "{\"environment\": \"nowhere\", \"algorithm\": \"discounted\"}";
  CHECK(run_binary("learn --config " + (dir / "bad.json").string()) == 2);
  // learn refuses oracle algorithms
  std::ofstream(dir / "oracle.json") << R"({"environment":"queue","algorithm":"oracle-lp"})";
  CHECK(run_binary("learn --config " + (dir / "oracle.json").string()) == 2);
  // report on a directory with no artifacts
  CHECK(run_binary("report --out " + (dir / "empty").string()) == 3);
  // a good tiny run exits 0
  std::ofstream(dir / "ok.json") << R"({"environment":"example1","algorithm":"discounted","steps":50,)"
                                 << R"("seed":1,"out":")" << (dir / "run").string() << R"("})";
  CHECK(run_binary("learn --config " + (dir / "ok.json").string()) == 0);
  CHECK(fs::exists(dir / "run" / "trace.csv"));
  // --seed override changes the artifact
  CHECK(run_binary("learn --config " + (dir / "ok.json").string() + " --out " + (dir / "run2").string() +
                   " --seed 2") == 0);
  CHECK(slurp(dir / "run" / "trace.csv") != slurp(dir / "run2" / "trace.csv"));
}

TEST_CASE("binary: LP-oracle bisection reproduces the exact threshold") {
  fs::path dir = fresh_dir("bisect");
  std::ofstream(dir / "cfg.json") << R"({"environment":"queue","algorithm":"oracle-lp",)"
                                  << R"("bisection":{"delta_lo":9.0,"delta_hi":10.0,"delta_tol":0.01},)"
                                  << R"("out":")" << (dir / "run").string() << R"("})";
  REQUIRE(run_binary("bisect --config " + (dir / "cfg.json").string()) == 0);
  std::string summary = slurp(dir / "run" / "summary.json");
  const auto pos = summary.find("\"delta_star\"");
  REQUIRE(pos != std::string::npos);
  const double dstar = std::strtod(summary.c_str() + summary.find(':', pos) + 1, nullptr);
  CHECK(std::abs(dstar - 9.780821918) <= 0.01);
}
