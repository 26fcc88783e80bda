#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mbg/model.hpp"

namespace mbg {

/// Raised on malformed documents; message names the offending field.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// JSON document with fields n_states, n_actions, n_opponent, gamma (number)
/// or "average", P and R flat row-major, initial_state, bound_c.
std::string model_to_text(const TabularModel& model);
TabularModel model_from_text(const std::string& text);

enum class Algorithm { discounted, average, oracle_fixed_point, oracle_rvi, oracle_lp };

struct EvaluationConfig {
  int n_traj = 10000;          ///< trajectories at the final checkpoint
  int n_traj_every = 100;      ///< trajectories at intermediate checkpoints
  double tol = 1e-3;
  double margin = 0.05;
  std::int64_t every = 0;  ///< evaluate every N learner steps (0 = final only)
};

struct BisectionConfig {
  double delta_lo = 0.0;
  double delta_hi = 0.0;
  double delta_tol = 0.01;
};

struct ExperimentConfig {
  std::string environment;                  ///< preset name; empty when inline
  std::optional<TabularModel> inline_model; ///< used when environment is empty
  Algorithm algorithm = Algorithm::discounted;
  std::int64_t steps = 0;
  std::vector<std::uint64_t> seeds = {0};
  double eps0 = 0.05, eps_floor = 0.01;
  bool eps_sqrt_decay = true;
  std::int64_t snapshot_every = 0;
  std::optional<double> delta;  ///< objective shift applied before learning
  std::optional<EvaluationConfig> evaluation;
  std::optional<BisectionConfig> bisection;
  std::string out_dir;
};

/// Parses the config document; throws ConfigError naming the bad field.
ExperimentConfig config_from_text(const std::string& text);

}  // namespace mbg
