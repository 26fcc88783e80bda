#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "experiment.hpp"
#include "mbg/serialize.hpp"

namespace {

using mbg::cli::kExitConfigError;

/// Loads and parses the config file; throws mbg::ConfigError on any problem.
mbg::ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw mbg::ConfigError("config: cannot open \"" + path + "\"");
  std::ostringstream buf;
  buf << f.rdbuf();
  return mbg::config_from_text(buf.str());
}

struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool quiet = false;
};

void add_common(CLI::App* cmd, CommonFlags& fl, bool config_required) {
  auto* c = cmd->add_option("--config", fl.config_path, "experiment config file (JSON)");
  if (config_required) c->required();
  cmd->add_option("--out", fl.out_dir, "output directory (overrides config)");
  cmd->add_option("--seed", fl.seed, "root seed (overrides config, single seed)")
      ->each([&fl](const std::string&) { fl.seed_set = true; });
  cmd->add_flag("--quiet", fl.quiet, "suppress diagnostics on stderr");
}

int run_subcommand(const CommonFlags& fl, const char* subcommand) {
  mbg::ExperimentConfig cfg;
  try {
    cfg = load_config(fl.config_path);
    if (!fl.out_dir.empty()) cfg.out_dir = fl.out_dir;
    if (fl.seed_set) cfg.seeds = {fl.seed};

    const std::string sub(subcommand);
    const bool learner =
        cfg.algorithm == mbg::Algorithm::discounted || cfg.algorithm == mbg::Algorithm::average;
    if (sub == "learn" && !learner)
      throw mbg::ConfigError("algorithm: learn needs \"discounted\" or \"average\"");
    if (sub == "oracle" && learner)
      throw mbg::ConfigError("algorithm: oracle needs an oracle-* algorithm");
    if (sub == "evaluate" && !cfg.evaluation)
      throw mbg::ConfigError("evaluation: block required by the evaluate subcommand");
    if (sub == "bisect" && !cfg.bisection)
      throw mbg::ConfigError("bisection: block required by the bisect subcommand");
    if (sub != "bisect") cfg.bisection.reset();
  } catch (const mbg::ConfigError& e) {
    if (!fl.quiet) std::cerr << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }
  return mbg::cli::run_experiment(cfg, fl.quiet);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constrained-MDP toolkit: maximin Q-learning and exact oracles"};
  app.require_subcommand(1);

  CommonFlags learn_fl, oracle_fl, eval_fl, bisect_fl, report_fl;
  CLI::App* learn = app.add_subcommand("learn", "run a Q-learning experiment");
  add_common(learn, learn_fl, true);
  CLI::App* oracle = app.add_subcommand("oracle", "run an exact model-known solver");
  add_common(oracle, oracle_fl, true);
  CLI::App* evaluate = app.add_subcommand("evaluate", "learn plus Monte Carlo constraint auditing");
  add_common(evaluate, eval_fl, true);
  CLI::App* bisect = app.add_subcommand("bisect", "bisection over the objective threshold");
  add_common(bisect, bisect_fl, true);
  CLI::App* report = app.add_subcommand("report", "emit figure CSVs from a finished run directory");
  report->add_option("--out", report_fl.out_dir, "run directory to summarize")->required();
  report->add_flag("--quiet", report_fl.quiet, "suppress diagnostics on stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitConfigError;
  }

  if (learn->parsed()) return run_subcommand(learn_fl, "learn");
  if (oracle->parsed()) return run_subcommand(oracle_fl, "oracle");
  if (evaluate->parsed()) return run_subcommand(eval_fl, "evaluate");
  if (bisect->parsed()) return run_subcommand(bisect_fl, "bisect");
  return mbg::cli::emit_report(report_fl.out_dir, report_fl.quiet);
}
