#include "experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <map>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "mbg/environments.hpp"
#include "mbg/evaluation.hpp"
#include "mbg/learner_average.hpp"
#include "mbg/learner_discounted.hpp"
#include "mbg/oracle.hpp"
#include "mbg/rng.hpp"

namespace mbg::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct ResolvedEnv {
  ConstrainedProblem problem;  ///< canonical form; inline games get one column per opponent action
  std::string name;
};

ConstrainedProblem problem_from_game(const TabularModel& g) {
  ConstrainedProblem p;
  p.n_states = g.n_states;
  p.n_actions = g.n_actions;
  p.P = g.P;
  p.criterion = g.criterion;
  p.gamma = g.gamma;
  p.mu0.assign(g.n_states, 0.0);
  p.mu0[g.initial_state] = 1.0;
  p.bound_c = g.bound_c;
  for (int o = 0; o < g.n_opponent; ++o) {
    std::vector<double> r(std::size_t(g.n_states) * g.n_actions);
    for (int s = 0; s < g.n_states; ++s)
      for (int a = 0; a < g.n_actions; ++a) r[std::size_t(s) * g.n_actions + a] = g.R(s, a, o);
    p.constraints.push_back(std::move(r));
  }
  return p;
}

ResolvedEnv resolve_environment(const ExperimentConfig& cfg) {
  ResolvedEnv env;
  if (cfg.inline_model) {
    ValidationReport rep = validate_model(*cfg.inline_model);
    if (!rep.ok()) throw ConfigError("environment: inline model invalid: " + rep.violations.front());
    env.problem = problem_from_game(*cfg.inline_model);
    env.name = "inline";
    return env;
  }
  if (cfg.environment == "example1")
    env.problem = build_static_example(StaticExample::example1);
  else if (cfg.environment == "example2")
    env.problem = build_static_example(StaticExample::example2);
  else if (cfg.environment == "queue")
    env.problem = build_queue();
  else
    throw ConfigError("environment: unknown preset \"" + cfg.environment + "\"");
  env.name = cfg.environment;
  return env;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

void write_trace_csv(const fs::path& path, const std::vector<TraceRow>& rows, bool average_mode) {
  std::ofstream f(path);
  f << (average_mode ? "step,s,a,o,alpha_or_beta,q_updated_value,f_value\n"
                     : "step,s,a,o,alpha_or_beta,q_updated_value\n");
  for (const auto& r : rows) {
    f << r.step << ',' << r.s << ',' << r.a << ',' << r.o << ',' << fmt(r.rate) << ',' << fmt(r.q_value);
    if (average_mode) f << ',' << fmt(r.f_value);
    f << '\n';
  }
}

json policy_to_json(const MixedPolicy& pi) {
  json rows = json::array();
  for (int s = 0; s < pi.n_states; ++s) {
    json row = json::array();
    for (int a = 0; a < pi.n_actions; ++a) row.push_back(pi(s, a));
    rows.push_back(row);
  }
  return rows;
}

void write_snapshots_jsonl(const fs::path& path, const std::vector<Snapshot>& snaps, bool average_mode) {
  std::ofstream f(path);
  for (const auto& s : snaps) {
    json j;
    j["step"] = s.step;
    j["Q"] = s.Q.v;
    j["policy"] = policy_to_json(s.policy);
    if (average_mode) j["f"] = s.f_value;
    f << j.dump() << '\n';
  }
}

struct ConstraintRow {
  std::int64_t step;
  int index;
  double mean, half_width;
};

void write_constraints_csv(const fs::path& path, const std::vector<ConstraintRow>& rows) {
  std::ofstream f(path);
  f << "step,constraint_index,mean,half_width\n";
  for (const auto& r : rows)
    f << r.step << ',' << r.index << ',' << fmt(r.mean) << ',' << fmt(r.half_width) << '\n';
}

std::vector<ConstraintRow> estimate_rows(std::int64_t step, const std::vector<ConstraintEstimate>& es) {
  std::vector<ConstraintRow> rows;
  for (int j = 0; j < int(es.size()); ++j) rows.push_back({step, j, es[j].mean, es[j].half_width});
  return rows;
}

/// One learner run with optional periodic constraint evaluation.
struct SeedRunResult {
  RunTrace trace;
  std::vector<ConstraintRow> constraint_rows;
  std::optional<Verdict> verdict;
};

SeedRunResult run_learner_seed(const ExperimentConfig& cfg, const ConstrainedProblem& problem,
                               const TabularModel& game, std::uint64_t seed) {
  const bool average = cfg.algorithm == Algorithm::average;
  ExploreSchedule expl{cfg.eps0, cfg.eps_floor, cfg.eps_sqrt_decay};
  const std::uint64_t lseed = derive_seed(seed, stream::learner);

  SeedRunResult out;
  auto eval_at = [&](std::int64_t step, const MixedPolicy& pi, int n_traj) {
    std::vector<ConstraintEstimate> es = mc_constraint_values(
        problem, pi, n_traj, cfg.evaluation->tol, derive_seed(seed, stream::evaluator, std::uint64_t(step)));
    auto rows = estimate_rows(step, es);
    out.constraint_rows.insert(out.constraint_rows.end(), rows.begin(), rows.end());
    return es;
  };

  const bool record_rows = cfg.steps <= 2'000'000;
  if (average) {
    AverageLearner learner(game, expl, lseed);
    out.trace.snapshots.push_back({0, learner.q(), learner.greedy_policy(), 0.0});
    for (std::int64_t k = 0; k < cfg.steps; ++k) {
      TraceRow row = learner.step();
      if (record_rows) out.trace.rows.push_back(row);
      const std::int64_t done = k + 1;
      if (cfg.snapshot_every > 0 && done % cfg.snapshot_every == 0)
        out.trace.snapshots.push_back({done, learner.q(), learner.greedy_policy(), f_mean(learner.q())});
      if (cfg.evaluation && cfg.evaluation->every > 0 && done % cfg.evaluation->every == 0 &&
          done < cfg.steps)
        eval_at(done, learner.greedy_policy(), cfg.evaluation->n_traj_every);
    }
    out.trace.final_q = learner.q();
    out.trace.final_policy = learner.greedy_policy();
  } else {
    DiscountedLearner learner(game, expl, lseed);
    out.trace.snapshots.push_back({0, learner.q(), learner.greedy_policy(), 0.0});
    for (std::int64_t k = 0; k < cfg.steps; ++k) {
      TraceRow row = learner.step();
      if (record_rows) out.trace.rows.push_back(row);
      const std::int64_t done = k + 1;
      if (cfg.snapshot_every > 0 && done % cfg.snapshot_every == 0)
        out.trace.snapshots.push_back({done, learner.q(), learner.greedy_policy(), 0.0});
      if (cfg.evaluation && cfg.evaluation->every > 0 && done % cfg.evaluation->every == 0 &&
          done < cfg.steps)
        eval_at(done, learner.greedy_policy(), cfg.evaluation->n_traj_every);
    }
    out.trace.final_q = learner.q();
    out.trace.final_policy = learner.greedy_policy();
  }

  if (cfg.evaluation) {
    auto es = eval_at(cfg.steps, out.trace.final_policy, cfg.evaluation->n_traj);
    out.verdict = feasibility_verdict(es, cfg.evaluation->margin);
  }
  return out;
}

Verdict lp_verdict(const ConstrainedProblem& shifted) {
  CmdpLpResult r = cmdp_lp_discounted(shifted);
  return r.feasible ? Verdict::feasible : Verdict::infeasible;
}

void write_summary(const fs::path& dir, const json& extra, double wall_s) {
  json j = extra;
  j["wall_time_s"] = wall_s;
  std::ofstream f(dir / "summary.json");
  f << j.dump(2) << '\n';
}

int run_experiment_impl(const ExperimentConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  auto wall = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };

  if (cfg.out_dir.empty()) throw ConfigError("out: output directory not set");
  fs::create_directories(cfg.out_dir);
  ResolvedEnv env = resolve_environment(cfg);

  ConstrainedProblem problem = env.problem;
  if (cfg.delta) problem = shift_rewards(problem, *cfg.delta);

  const bool learner_alg = cfg.algorithm == Algorithm::discounted || cfg.algorithm == Algorithm::average;

  // ----- bisection driver -----
  if (cfg.bisection) {
    if (!env.problem.objective)
      throw ConfigError("bisection: environment \"" + env.name + "\" has no objective reward");
    const BisectionConfig& bi = *cfg.bisection;
    int probe = 0;
    auto solver = [&](double delta) -> Verdict {
      ConstrainedProblem shifted = shift_rewards(env.problem, delta);
      if (cfg.algorithm == Algorithm::oracle_lp) return lp_verdict(shifted);
      if (!learner_alg) throw ConfigError("algorithm: bisection needs a learner or oracle-lp");
      if (!cfg.evaluation) throw ConfigError("evaluation: required for learner-based bisection");
      TabularModel game = assemble_game(shifted);
      if (cfg.algorithm == Algorithm::average) game.criterion = Criterion::average;
      SeedRunResult r = run_learner_seed(cfg, shifted, game, derive_seed(cfg.seeds[0], 100, probe++));
      return *r.verdict;
    };
    BisectResult res = bisect_delta(solver, bi.delta_lo, bi.delta_hi, bi.delta_tol);
    json j;
    j["delta_star"] = res.delta_star;
    j["seed"] = cfg.seeds[0];
    json probes = json::array();
    for (auto& [d, v] : res.verdicts) probes.push_back({{"delta", d}, {"verdict", to_string(v)}});
    j["probes"] = probes;
    write_summary(cfg.out_dir, j, wall());
    return kExitOk;
  }

  // ----- oracle algorithms -----
  if (cfg.algorithm == Algorithm::oracle_lp) {
    CmdpLpResult r = cmdp_lp_discounted(problem);
    json j;
    j["feasible"] = r.feasible;
    j["value"] = r.value;
    j["seed"] = cfg.seeds[0];
    if (r.feasible) j["policy"] = policy_to_json(r.policy);
    write_summary(cfg.out_dir, j, wall());
    return kExitOk;
  }
  if (cfg.algorithm == Algorithm::oracle_fixed_point || cfg.algorithm == Algorithm::oracle_rvi) {
    TabularModel game = assemble_game(problem);
    if (cfg.algorithm == Algorithm::oracle_rvi) game.criterion = Criterion::average;
    json j;
    j["seed"] = cfg.seeds[0];
    std::vector<Snapshot> snaps;
    if (cfg.algorithm == Algorithm::oracle_fixed_point) {
      auto [Q, pi] = fixed_point_discounted(game, 1e-9);
      std::vector<double> v = expected_q(Q, game.initial_state, pi);
      j["value"] = *std::min_element(v.begin(), v.end());
      snaps.push_back({0, Q, pi, 0.0});
    } else {
      AverageSolution sol = rvi_average(game, 1e-9);
      j["v_star"] = sol.v_star;
      j["value"] = *std::min_element(sol.v_star.begin(), sol.v_star.end());
      snaps.push_back({0, sol.Q_star, sol.policy, f_mean(sol.Q_star)});
    }
    write_snapshots_jsonl(fs::path(cfg.out_dir) / "snapshots.jsonl", snaps,
                          cfg.algorithm == Algorithm::oracle_rvi);
    write_summary(cfg.out_dir, j, wall());
    return kExitOk;
  }

  // ----- learner runs -----
  TabularModel game = assemble_game(problem);
  if (cfg.algorithm == Algorithm::average) game.criterion = Criterion::average;
  ValidationReport rep = validate_model(game);
  if (!rep.ok()) throw ConfigError("environment: assembled game invalid: " + rep.violations.front());

  const bool average = cfg.algorithm == Algorithm::average;
  const bool multi = cfg.seeds.size() > 1;
  json verdicts = json::array();
  for (std::size_t i = 0; i < cfg.seeds.size(); ++i) {
    SeedRunResult r = run_learner_seed(cfg, problem, game, cfg.seeds[i]);
    fs::path dir = multi ? fs::path(cfg.out_dir) / ("seed" + std::to_string(cfg.seeds[i])) : fs::path(cfg.out_dir);
    fs::create_directories(dir);
    write_trace_csv(dir / "trace.csv", r.trace.rows, average);
    write_snapshots_jsonl(dir / "snapshots.jsonl", r.trace.snapshots, average);
    if (cfg.evaluation) write_constraints_csv(dir / "constraints.csv", r.constraint_rows);
    json j;
    j["seed"] = cfg.seeds[i];
    j["steps"] = cfg.steps;
    j["environment"] = env.name;
    if (cfg.delta) j["delta"] = *cfg.delta;
    if (r.verdict) j["verdict"] = to_string(*r.verdict);
    if (average) j["f_final"] = f_mean(r.trace.final_q);
    write_summary(dir, j, wall());
    if (r.verdict) verdicts.push_back({{"seed", cfg.seeds[i]}, {"verdict", to_string(*r.verdict)}});
  }
  if (multi) {
    json j;
    j["seeds"] = cfg.seeds;
    j["environment"] = env.name;
    if (!verdicts.empty()) j["verdicts"] = verdicts;
    write_summary(cfg.out_dir, j, wall());
  }
  return kExitOk;
}

}  // namespace

int run_experiment(const ExperimentConfig& cfg, bool quiet) {
  try {
    return run_experiment_impl(cfg);
  } catch (const ConfigError& e) {
    if (!quiet) std::cerr << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    if (!quiet) std::cerr << "solver error: " << e.what() << '\n';
    return kExitSolverError;
  }
}

namespace {

std::vector<json> read_jsonl(const fs::path& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("missing artifact: " + path.string());
  std::vector<json> out;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    out.push_back(json::parse(line));
  }
  return out;
}

void emit_fig1(const fs::path& dir, const std::vector<json>& snaps) {
  std::ofstream f(dir / "fig1.csv");
  f << "step,Q11,Q12,Q21,Q22\n";
  for (const auto& s : snaps) {
    const auto& q = s.at("Q");
    if (q.size() != 4) throw std::runtime_error("fig1.csv needs a 1-state 2x2 Q table");
    f << s.at("step").get<std::int64_t>() << ',' << fmt(q[0].get<double>()) << ',' << fmt(q[1].get<double>())
      << ',' << fmt(q[2].get<double>()) << ',' << fmt(q[3].get<double>()) << '\n';
  }
}

void emit_fig2(const fs::path& run_dir, const std::vector<fs::path>& seed_dirs) {
  // l1 policy error against the uniform 1/3 target, max over seeds per step
  std::map<std::int64_t, double> worst;
  for (const auto& d : seed_dirs) {
    for (const auto& s : read_jsonl(d / "snapshots.jsonl")) {
      const auto& pi = s.at("policy").at(0);
      double err = 0.0;
      for (const auto& p : pi) err += std::abs(p.get<double>() - 1.0 / 3.0);
      std::int64_t step = s.at("step").get<std::int64_t>();
      auto it = worst.find(step);
      if (it == worst.end() || err > it->second) worst[step] = err;
    }
  }
  std::ofstream f(run_dir / "fig2.csv");
  f << "step,l1_error\n";
  for (const auto& [step, err] : worst) f << step << ',' << fmt(err) << '\n';
}

void emit_fig3(const fs::path& dir, const json& summary) {
  std::ifstream cf(dir / "constraints.csv");
  if (!cf) return;
  std::string label = "run";
  if (summary.contains("delta")) {
    std::ostringstream os;
    os << summary.at("delta").get<double>();
    label = os.str();
  }
  std::map<std::int64_t, std::map<int, double>> by_step;
  std::string line;
  std::getline(cf, line);  // header
  while (std::getline(cf, line)) {
    std::istringstream is(line);
    std::string tok;
    std::getline(is, tok, ',');
    std::int64_t step = std::stoll(tok);
    std::getline(is, tok, ',');
    int idx = std::stoi(tok);
    std::getline(is, tok, ',');
    by_step[step][idx] = std::stod(tok);
  }
  if (by_step.empty()) return;
  const int nc = int(by_step.begin()->second.size());
  std::ofstream f(dir / ("fig3_" + label + ".csv"));
  f << "step";
  for (int j = 0; j < nc; ++j) f << ",c" << j;
  f << '\n';
  for (const auto& [step, cols] : by_step) {
    f << step;
    for (int j = 0; j < nc; ++j) f << ',' << fmt(cols.count(j) ? cols.at(j) : 0.0);
    f << '\n';
  }
}

}  // namespace

int emit_report(const std::string& run_dir, bool quiet) {
  try {
    fs::path dir(run_dir);
    if (!fs::exists(dir / "summary.json")) throw std::runtime_error("missing artifact: summary.json");
    json summary = json::parse(std::ifstream(dir / "summary.json"));

    std::vector<fs::path> seed_dirs;
    for (const auto& e : fs::directory_iterator(dir))
      if (e.is_directory() && e.path().filename().string().rfind("seed", 0) == 0) seed_dirs.push_back(e.path());
    std::sort(seed_dirs.begin(), seed_dirs.end());
    if (seed_dirs.empty()) seed_dirs.push_back(dir);

    if (fs::exists(seed_dirs.front() / "snapshots.jsonl")) {
      auto snaps = read_jsonl(seed_dirs.front() / "snapshots.jsonl");
      if (!snaps.empty() && snaps.front().at("Q").size() == 4) emit_fig1(dir, snaps);
      if (!snaps.empty() && snaps.front().at("policy").at(0).size() == 3) emit_fig2(dir, seed_dirs);
    }
    emit_fig3(dir, summary);
    return kExitOk;
  } catch (const std::exception& e) {
    if (!quiet) std::cerr << "report error: " << e.what() << '\n';
    return kExitSolverError;
  }
}

}  // namespace mbg::cli
